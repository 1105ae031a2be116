#pragma once

#include <bit>
#include <cstddef>
#include <limits>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "hypsr/geometry.hpp"

namespace hypsr {

inline constexpr int kDefaultMaxLiftOrder = 6;

/// Dimension 2^p n of the p-fold tangent bundle over an n-manifold.
inline std::size_t bundle_dim(std::size_t n, int p) {
  if (n < 1) throw std::invalid_argument("bundle_dim: n must be >= 1");
  if (p < 0) throw std::invalid_argument("bundle_dim: order must be >= 0");
  constexpr int kBits = std::numeric_limits<std::size_t>::digits;
  if (p >= kBits || n > (std::numeric_limits<std::size_t>::max() >> p)) {
    throw std::overflow_error("bundle_dim: 2^" + std::to_string(p) + " * " + std::to_string(n) +
                              " does not fit in size_t");
  }
  return n << p;
}

/// Element of T^p(M). Order 0 is a bare point; an order-p element is the pair
/// (base, fibre) of two order-(p-1) elements stored as [base | fibre].
template <typename Scalar = double>
class BundleElement {
 public:
  BundleElement(const Signature& sig, int order, Coords<Scalar> coords)
      : sig_(sig), order_(order), coords_(std::move(coords)) {
    const std::size_t expected = bundle_dim(static_cast<std::size_t>(sig.n()), order);
    if (static_cast<std::size_t>(coords_.size()) != expected) {
      throw std::invalid_argument("bundle element of order " + std::to_string(order) +
                                  " needs " + std::to_string(expected) + " coordinates, got " +
                                  std::to_string(coords_.size()));
    }
  }

  const Signature& sig() const { return sig_; }
  int order() const { return order_; }
  const Coords<Scalar>& coords() const { return coords_; }

  /// n-coordinate block at position k in [0, 2^p); in a curve lift, block k
  /// holds the derivative of order popcount(k).
  auto block(std::size_t k) const { return coords_.segment(k * sig_.n(), sig_.n()); }

  friend bool operator==(const BundleElement& a, const BundleElement& b) {
    return a.sig_ == b.sig_ && a.order_ == b.order_ && a.coords_ == b.coords_;
  }

 private:
  Signature sig_;
  int order_;
  Coords<Scalar> coords_;
};

/// pi: T^p(M) -> T^(p-1)(M), keeps the base half.
template <typename Scalar>
BundleElement<Scalar> project(const BundleElement<Scalar>& e) {
  if (e.order() < 1) {
    throw std::invalid_argument("project: order-0 element has no base to project to");
  }
  const Eigen::Index half = e.coords().size() / 2;
  return BundleElement<Scalar>(e.sig(), e.order() - 1, e.coords().head(half));
}

/// Local trivialization (p, v) -> [p | v] in R^{2n}.
template <typename Scalar>
Coords<Scalar> trivialize(const PseudoPoint<Scalar>& point, const TangentVector<Scalar>& v) {
  if (!(point.sig() == v.sig())) {
    throw std::invalid_argument("trivialize: signature mismatch " + to_string(point.sig()) +
                                " vs " + to_string(v.sig()));
  }
  const int n = point.sig().n();
  Coords<Scalar> out(2 * n);
  out << point.coords(), v.coords();
  return out;
}

/// Inverse of trivialize.
template <typename Derived>
std::pair<PseudoPoint<typename Derived::Scalar>, TangentVector<typename Derived::Scalar>>
split_trivialized(const Eigen::MatrixBase<Derived>& flat, const Signature& sig) {
  using Scalar = typename Derived::Scalar;
  detail::require_size(flat.size(), 2 * sig.n(), "split_trivialized");
  return {PseudoPoint<Scalar>(sig, flat.head(sig.n())),
          TangentVector<Scalar>(sig, flat.tail(sig.n()))};
}

/// Order-p lift of the uniform curve at psi: recursively (lift_{p-1}, d/dpsi lift_{p-1}).
template <typename Scalar>
BundleElement<Scalar> curve_lift(const CurveSpec<Scalar>& spec, Scalar psi, int order,
                                 int max_order = kDefaultMaxLiftOrder) {
  if (order < 0) throw std::invalid_argument("curve_lift: order must be >= 0");
  if (order > max_order) {
    throw std::length_error("curve_lift: order " + std::to_string(order) + " exceeds cap " +
                            std::to_string(max_order));
  }
  const int n = spec.sig().n();
  std::vector<Coords<Scalar>> tower;
  tower.reserve(order + 1);
  for (int m = 0; m <= order; ++m) tower.push_back(derivative_at(psi, spec, m));

  const std::size_t blocks = std::size_t{1} << order;
  Coords<Scalar> coords(static_cast<Eigen::Index>(blocks) * n);
  for (std::size_t k = 0; k < blocks; ++k) {
    coords.segment(static_cast<Eigen::Index>(k) * n, n) = tower[std::popcount(k)];
  }
  return BundleElement<Scalar>(spec.sig(), order, std::move(coords));
}

}  // namespace hypsr

#pragma once

#include <cmath>
#include <stdexcept>
#include <string>

#include <Eigen/Core>

#include "hypsr/signature.hpp"

namespace hypsr {

namespace detail {

inline void require_size(Eigen::Index actual, int expected, const char* what) {
  if (actual != expected) {
    throw std::invalid_argument(std::string(what) + ": expected " + std::to_string(expected) +
                                " coordinates, got " + std::to_string(actual));
  }
}

/// Coordinates laid out as [t_1..t_s | x_{s+1}..x_n] over a fixed signature.
/// Tag separates points from tangent vectors at the type level.
template <typename Scalar, typename Tag>
class BlockVector {
 public:
  using scalar_type = Scalar;

  BlockVector(const Signature& sig, Coords<Scalar> coords) : sig_(sig), coords_(std::move(coords)) {
    require_size(coords_.size(), sig_.n(), "block vector");
  }

  explicit BlockVector(const Signature& sig) : sig_(sig), coords_(Coords<Scalar>::Zero(sig.n())) {}

  template <typename T, typename X>
  static BlockVector from_blocks(const Signature& sig, const Eigen::MatrixBase<T>& t,
                                 const Eigen::MatrixBase<X>& x) {
    require_size(t.size(), sig.s(), "temporal block");
    require_size(x.size(), sig.r(), "spatial block");
    Coords<Scalar> c(sig.n());
    c << t, x;
    return BlockVector(sig, std::move(c));
  }

  const Signature& sig() const { return sig_; }
  const Coords<Scalar>& coords() const { return coords_; }

  auto t() const { return coords_.head(sig_.s()); }
  auto x() const { return coords_.tail(sig_.r()); }

  Scalar operator[](int i) const { return coords_[i]; }
  Scalar& operator[](int i) { return coords_[i]; }

 private:
  Signature sig_;
  Coords<Scalar> coords_;
};

}  // namespace detail

struct PointTag {};
struct TangentTag {};

template <typename Scalar = double>
using PseudoPoint = detail::BlockVector<Scalar, PointTag>;

template <typename Scalar = double>
using TangentVector = detail::BlockVector<Scalar, TangentTag>;

/// The indefinite product u ⊛ v = -Σ u_i v_i (temporal) + Σ u_j v_j (spatial).
template <typename U, typename V>
typename U::Scalar inner_product(const Eigen::MatrixBase<U>& u, const Eigen::MatrixBase<V>& v,
                                 const Signature& sig) {
  detail::require_size(u.size(), sig.n(), "inner_product lhs");
  detail::require_size(v.size(), sig.n(), "inner_product rhs");
  const int s = sig.s();
  const int r = sig.r();
  return u.tail(r).dot(v.tail(r)) - u.head(s).dot(v.head(s));
}

template <typename Scalar, typename TagA, typename TagB>
Scalar inner_product(const detail::BlockVector<Scalar, TagA>& a,
                     const detail::BlockVector<Scalar, TagB>& b) {
  if (!(a.sig() == b.sig())) {
    throw std::invalid_argument("inner_product: signature mismatch " + to_string(a.sig()) +
                                " vs " + to_string(b.sig()));
  }
  return inner_product(a.coords(), b.coords(), a.sig());
}

template <typename Scalar, typename Tag>
Scalar quadratic_form(const detail::BlockVector<Scalar, Tag>& a) {
  return inner_product(a, a);
}

/// Amplitude R / sqrt(r) that places the uniform curve on the quadric of radius R.
template <typename Scalar>
Scalar effective_radius(Scalar radius, const Signature& sig) {
  using std::isfinite;
  using std::sqrt;
  if (!(radius > Scalar(0)) || !isfinite(radius)) {
    throw std::domain_error("effective_radius: radius must be positive and finite");
  }
  return radius / sqrt(Scalar(sig.r()));
}

/// Parameters of the uniform curve through (0,..,0, R_eff,..,R_eff).
template <typename Scalar = double>
class CurveSpec {
 public:
  CurveSpec(const Signature& sig, Scalar radius)
      : sig_(sig), radius_(radius), amplitude_(hypsr::effective_radius(radius, sig)) {}

  /// Builds a spec whose amplitude is not tied to the radius. Only useful for
  /// fault injection: the resulting curve leaves the quadric unless
  /// amplitude == R / sqrt(r).
  static CurveSpec with_amplitude(const Signature& sig, Scalar radius, Scalar amplitude) {
    CurveSpec spec(sig, radius);
    spec.amplitude_ = amplitude;
    return spec;
  }

  const Signature& sig() const { return sig_; }
  Scalar radius() const { return radius_; }
  Scalar effective_radius() const { return amplitude_; }

  /// sqrt(s r), the common rate of every coordinate.
  Scalar frequency() const {
    using std::sqrt;
    return sqrt(Scalar(sig_.s()) * Scalar(sig_.r()));
  }

 private:
  Signature sig_;
  Scalar radius_;
  Scalar amplitude_;
};

/// m-th psi-derivative of the uniform curve. Every temporal coordinate gets
/// the same value and every spatial coordinate gets the same value.
///
/// Temporal: (sr)^(m/2) sqrt(r/s) R_eff {sinh, cosh}(sqrt(sr) psi) for m {even, odd}.
/// Spatial:  (sr)^(m/2) R_eff {cosh, sinh}(sqrt(sr) psi) for m {even, odd}.
template <typename Scalar>
Coords<Scalar> derivative_at(Scalar psi, const CurveSpec<Scalar>& spec, int order) {
  using std::cosh;
  using std::sinh;
  using std::sqrt;
  if (order < 0) {
    throw std::invalid_argument("derivative_at: order must be non-negative");
  }
  const Signature& sig = spec.sig();
  const Scalar s = Scalar(sig.s());
  const Scalar r = Scalar(sig.r());
  const Scalar amp = spec.effective_radius();
  const Scalar w = spec.frequency();
  const Scalar arg = w * psi;

  // (sr)^floor(m/2) is an exact integer power for desk-scale orders.
  Scalar even_power(1);
  for (int k = 0; k < order / 2; ++k) even_power *= s * r;

  Scalar t_value;
  Scalar x_value;
  if (order % 2 == 0) {
    t_value = even_power * (sqrt(r / s) * amp) * sinh(arg);
    x_value = even_power * amp * cosh(arg);
  } else {
    // sqrt(r/s) * sqrt(sr) = r
    t_value = even_power * (r * amp) * cosh(arg);
    x_value = even_power * (w * amp) * sinh(arg);
  }

  Coords<Scalar> c(sig.n());
  c.head(sig.s()).setConstant(t_value);
  c.tail(sig.r()).setConstant(x_value);
  return c;
}

template <typename Scalar>
PseudoPoint<Scalar> point_at(Scalar psi, const CurveSpec<Scalar>& spec) {
  return PseudoPoint<Scalar>(spec.sig(), derivative_at(psi, spec, 0));
}

template <typename Scalar>
TangentVector<Scalar> velocity_at(Scalar psi, const CurveSpec<Scalar>& spec) {
  return TangentVector<Scalar>(spec.sig(), derivative_at(psi, spec, 1));
}

/// The point at psi = 0: zeros in the temporal block, R_eff in the spatial block.
template <typename Scalar>
PseudoPoint<Scalar> initial_point(const CurveSpec<Scalar>& spec) {
  Coords<Scalar> c(spec.sig().n());
  c.head(spec.sig().s()).setZero();
  c.tail(spec.sig().r()).setConstant(spec.effective_radius());
  return PseudoPoint<Scalar>(spec.sig(), std::move(c));
}

template <typename Scalar>
bool is_on_hyperboloid(const PseudoPoint<Scalar>& p, Scalar radius, Scalar tol) {
  using std::abs;
  return abs(quadratic_form(p) - radius * radius) <= tol;
}

template <typename Scalar>
bool is_h_orthogonal(const PseudoPoint<Scalar>& p, const TangentVector<Scalar>& v, Scalar tol) {
  using std::abs;
  return abs(inner_product(p, v)) <= tol;
}

}  // namespace hypsr

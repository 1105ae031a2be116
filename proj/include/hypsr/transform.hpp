#pragma once

#include <cmath>
#include <stdexcept>
#include <string>

#include <Eigen/Core>

#include "hypsr/geometry.hpp"

namespace hypsr {

/// Linear map on R^{s,r} in the [t-block | x-block] basis. Construction does
/// not enforce M^T eta M = eta; use is_isometry for that.
template <typename Scalar = double>
class PseudoOrthogonalMap {
 public:
  PseudoOrthogonalMap(const Signature& sig, Matrix<Scalar> m) : sig_(sig), m_(std::move(m)) {
    if (m_.rows() != sig.n() || m_.cols() != sig.n()) {
      throw std::invalid_argument("map over " + to_string(sig) + " must be " +
                                  std::to_string(sig.n()) + "x" + std::to_string(sig.n()));
    }
  }

  static PseudoOrthogonalMap identity(const Signature& sig) {
    return PseudoOrthogonalMap(sig, Matrix<Scalar>::Identity(sig.n(), sig.n()));
  }

  const Signature& sig() const { return sig_; }
  const Matrix<Scalar>& matrix() const { return m_; }

  /// Composition: (a * b)(p) = a(b(p)).
  friend PseudoOrthogonalMap operator*(const PseudoOrthogonalMap& a,
                                       const PseudoOrthogonalMap& b) {
    if (!(a.sig_ == b.sig_)) throw std::invalid_argument("compose: signature mismatch");
    return PseudoOrthogonalMap(a.sig_, a.m_ * b.m_);
  }

 private:
  Signature sig_;
  Matrix<Scalar> m_;
};

/// Hyperbolic rotation by rapidity a in the plane of temporal axis ti and
/// spatial axis xj (absolute, zero-based coordinate indices).
template <typename Scalar>
PseudoOrthogonalMap<Scalar> boost(const Signature& sig, int ti, int xj, Scalar rapidity) {
  using std::cosh;
  using std::sinh;
  if (!sig.is_temporal(ti) || !sig.is_spatial(xj)) {
    throw std::out_of_range("boost: need temporal index in [0," + std::to_string(sig.s()) +
                            ") and spatial index in [" + std::to_string(sig.s()) + "," +
                            std::to_string(sig.n()) + "), got (" + std::to_string(ti) + ", " +
                            std::to_string(xj) + ")");
  }
  Matrix<Scalar> m = Matrix<Scalar>::Identity(sig.n(), sig.n());
  const Scalar c = cosh(rapidity);
  const Scalar sh = sinh(rapidity);
  m(ti, ti) = c;
  m(ti, xj) = sh;
  m(xj, ti) = sh;
  m(xj, xj) = c;
  return PseudoOrthogonalMap<Scalar>(sig, std::move(m));
}

/// Euclidean rotation by theta in the plane of two axes from the same block.
template <typename Scalar>
PseudoOrthogonalMap<Scalar> block_rotation(const Signature& sig, int i1, int i2, Scalar theta) {
  using std::cos;
  using std::sin;
  const bool both_temporal = sig.is_temporal(i1) && sig.is_temporal(i2);
  const bool both_spatial = sig.is_spatial(i1) && sig.is_spatial(i2);
  if (!both_temporal && !both_spatial) {
    throw std::out_of_range("block_rotation: indices (" + std::to_string(i1) + ", " +
                            std::to_string(i2) + ") are not both temporal or both spatial in " +
                            to_string(sig));
  }
  if (i1 == i2) throw std::invalid_argument("block_rotation: indices must differ");
  Matrix<Scalar> m = Matrix<Scalar>::Identity(sig.n(), sig.n());
  const Scalar c = cos(theta);
  const Scalar sn = sin(theta);
  m(i1, i1) = c;
  m(i1, i2) = -sn;
  m(i2, i1) = sn;
  m(i2, i2) = c;
  return PseudoOrthogonalMap<Scalar>(sig, std::move(m));
}

template <typename Scalar, typename Tag>
detail::BlockVector<Scalar, Tag> apply(const PseudoOrthogonalMap<Scalar>& map,
                                       const detail::BlockVector<Scalar, Tag>& v) {
  if (!(map.sig() == v.sig())) {
    throw std::invalid_argument("apply: map over " + to_string(map.sig()) +
                                " applied to vector over " + to_string(v.sig()));
  }
  return detail::BlockVector<Scalar, Tag>(v.sig(), map.matrix() * v.coords());
}

/// Max-norm defect of M^T eta M against eta.
template <typename Scalar>
Scalar isometry_defect(const PseudoOrthogonalMap<Scalar>& map) {
  const Matrix<Scalar> eta = metric_matrix<Scalar>(map.sig());
  return (map.matrix().transpose() * eta * map.matrix() - eta).cwiseAbs().maxCoeff();
}

template <typename Scalar>
bool is_isometry(const PseudoOrthogonalMap<Scalar>& map, Scalar tol) {
  return isometry_defect(map) <= tol;
}

}  // namespace hypsr

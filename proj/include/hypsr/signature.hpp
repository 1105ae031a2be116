#pragma once

#include <stdexcept>
#include <string>

#include <Eigen/Core>

namespace hypsr {

/// Metric signature (s, r): s time-like (minus) axes followed by r
/// space-like (plus) axes. Both counts must be at least one.
class Signature {
 public:
  Signature(int s, int r) : s_(s), r_(r) {
    if (s < 1 || r < 1) {
      throw std::invalid_argument("signature requires s >= 1 and r >= 1, got (" +
                                  std::to_string(s) + ", " + std::to_string(r) + ")");
    }
  }

  int s() const { return s_; }
  int r() const { return r_; }
  int n() const { return s_ + r_; }

  bool is_temporal(int index) const { return index >= 0 && index < s_; }
  bool is_spatial(int index) const { return index >= s_ && index < n(); }

  friend bool operator==(const Signature&, const Signature&) = default;

 private:
  int s_;
  int r_;
};

inline std::string to_string(const Signature& sig) {
  return "(" + std::to_string(sig.s()) + "," + std::to_string(sig.r()) + ")";
}

template <typename Scalar>
using Coords = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

template <typename Scalar>
using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

/// Diagonal of the metric: -1 on the temporal block, +1 on the spatial block.
template <typename Scalar>
Coords<Scalar> metric_diagonal(const Signature& sig) {
  Coords<Scalar> eta(sig.n());
  eta.head(sig.s()).setConstant(Scalar(-1));
  eta.tail(sig.r()).setConstant(Scalar(1));
  return eta;
}

template <typename Scalar>
Matrix<Scalar> metric_matrix(const Signature& sig) {
  return metric_diagonal<Scalar>(sig).asDiagonal();
}

}  // namespace hypsr

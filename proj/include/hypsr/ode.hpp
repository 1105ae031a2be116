#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "hypsr/geometry.hpp"

namespace hypsr {

template <typename Scalar = double>
struct SystemState {
  Scalar psi;
  PseudoPoint<Scalar> point;
};

template <typename Scalar = double>
struct IntegratorConfig {
  Scalar psi_start;
  Scalar psi_end;
  int steps;
  CurveSpec<Scalar> spec;
};

enum class Provenance { closed_form, integrated };

inline const char* to_string(Provenance p) {
  return p == Provenance::closed_form ? "closed_form" : "integrated";
}

template <typename Scalar = double>
struct Sample {
  Scalar psi;
  PseudoPoint<Scalar> point;
  TangentVector<Scalar> velocity;
};

template <typename Scalar = double>
struct Trajectory {
  CurveSpec<Scalar> spec;
  Provenance provenance;
  std::vector<Sample<Scalar>> samples;
};

/// Right-hand side on raw coordinates: every dt_i is Σ x_j and every dx_j is
/// Σ t_i. Each sum is formed once and broadcast over its block.
template <typename Derived>
Coords<typename Derived::Scalar> system_rhs(const Eigen::MatrixBase<Derived>& y,
                                            const Signature& sig) {
  using Scalar = typename Derived::Scalar;
  detail::require_size(y.size(), sig.n(), "system_rhs");
  const Scalar sum_t = y.head(sig.s()).sum();
  const Scalar sum_x = y.tail(sig.r()).sum();
  Coords<Scalar> dy(sig.n());
  dy.head(sig.s()).setConstant(sum_x);
  dy.tail(sig.r()).setConstant(sum_t);
  return dy;
}

template <typename Scalar>
TangentVector<Scalar> system_rhs(const SystemState<Scalar>& state) {
  return TangentVector<Scalar>(state.point.sig(),
                               system_rhs(state.point.coords(), state.point.sig()));
}

/// Sample locations psi_k = psi_start + (psi_end - psi_start) k / steps, with
/// both endpoints exact. A zero-length interval yields the single start value.
template <typename Scalar>
std::vector<Scalar> psi_grid(const IntegratorConfig<Scalar>& cfg) {
  if (cfg.steps < 1) {
    throw std::invalid_argument("integrator config: steps must be >= 1, got " +
                                std::to_string(cfg.steps));
  }
  if (cfg.psi_end == cfg.psi_start) return {cfg.psi_start};
  const Scalar span = cfg.psi_end - cfg.psi_start;
  std::vector<Scalar> grid(static_cast<std::size_t>(cfg.steps) + 1);
  for (int k = 0; k < cfg.steps; ++k) {
    grid[k] = cfg.psi_start + (span * Scalar(k)) / Scalar(cfg.steps);
  }
  grid.back() = cfg.psi_end;
  return grid;
}

/// Classic four-stage Runge-Kutta with fixed step h = (psi_end - psi_start) / steps.
template <typename Scalar>
Trajectory<Scalar> integrate(const IntegratorConfig<Scalar>& cfg,
                             const PseudoPoint<Scalar>& initial) {
  const Signature& sig = cfg.spec.sig();
  if (!(initial.sig() == sig)) {
    throw std::invalid_argument("integrate: initial point signature " + to_string(initial.sig()) +
                                " does not match spec " + to_string(sig));
  }
  const std::vector<Scalar> grid = psi_grid(cfg);

  Trajectory<Scalar> traj{cfg.spec, Provenance::integrated, {}};
  traj.samples.reserve(grid.size());

  Coords<Scalar> y = initial.coords();
  auto record = [&](Scalar psi) {
    traj.samples.push_back({psi, PseudoPoint<Scalar>(sig, y),
                            TangentVector<Scalar>(sig, system_rhs(y, sig))});
  };
  record(grid.front());
  if (grid.size() == 1) return traj;

  const Scalar h = (cfg.psi_end - cfg.psi_start) / Scalar(cfg.steps);
  const Scalar half_h = h / Scalar(2);
  const Scalar sixth_h = h / Scalar(6);
  for (std::size_t k = 1; k < grid.size(); ++k) {
    const Coords<Scalar> k1 = system_rhs(y, sig);
    const Coords<Scalar> k2 = system_rhs(y + half_h * k1, sig);
    const Coords<Scalar> k3 = system_rhs(y + half_h * k2, sig);
    const Coords<Scalar> k4 = system_rhs(y + h * k3, sig);
    y += sixth_h * (k1 + Scalar(2) * k2 + Scalar(2) * k3 + k4);
    record(grid[k]);
  }
  return traj;
}

template <typename Scalar>
Trajectory<Scalar> closed_form_trajectory(const IntegratorConfig<Scalar>& cfg) {
  const std::vector<Scalar> grid = psi_grid(cfg);
  Trajectory<Scalar> traj{cfg.spec, Provenance::closed_form, {}};
  traj.samples.reserve(grid.size());
  for (Scalar psi : grid) {
    traj.samples.push_back({psi, point_at(psi, cfg.spec), velocity_at(psi, cfg.spec)});
  }
  return traj;
}

/// Largest absolute coordinate difference over both the point and velocity channels.
template <typename Scalar>
Scalar max_deviation(const Trajectory<Scalar>& a, const Trajectory<Scalar>& b) {
  if (!(a.spec.sig() == b.spec.sig())) {
    throw std::invalid_argument("max_deviation: signature mismatch");
  }
  if (a.samples.size() != b.samples.size()) {
    throw std::invalid_argument("max_deviation: sample counts differ (" +
                                std::to_string(a.samples.size()) + " vs " +
                                std::to_string(b.samples.size()) + ")");
  }
  Scalar worst(0);
  for (std::size_t k = 0; k < a.samples.size(); ++k) {
    const auto& sa = a.samples[k];
    const auto& sb = b.samples[k];
    if (sa.psi != sb.psi) {
      throw std::invalid_argument("max_deviation: psi grids differ at sample " + std::to_string(k));
    }
    worst = std::max(worst, (sa.point.coords() - sb.point.coords()).cwiseAbs().maxCoeff());
    worst = std::max(worst, (sa.velocity.coords() - sb.velocity.coords()).cwiseAbs().maxCoeff());
  }
  return worst;
}

/// max |x''_j - s r x_j| with x'' from central second differences on the
/// spatial channel. Requires a uniform grid of at least three samples.
template <typename Scalar>
Scalar second_order_residual(const Trajectory<Scalar>& traj) {
  using std::abs;
  const auto& samples = traj.samples;
  if (samples.size() < 3) {
    throw std::invalid_argument("second_order_residual: need at least 3 samples, got " +
                                std::to_string(samples.size()));
  }
  const Scalar h = samples[1].psi - samples[0].psi;
  for (std::size_t k = 1; k < samples.size(); ++k) {
    const Scalar step = samples[k].psi - samples[k - 1].psi;
    if (!(abs(step - h) <= Scalar(1e-6) * abs(h)) || h == Scalar(0)) {
      throw std::invalid_argument("second_order_residual: non-uniform grid at sample " +
                                  std::to_string(k));
    }
  }
  const Signature& sig = traj.spec.sig();
  const Scalar sr = Scalar(sig.s()) * Scalar(sig.r());
  const Scalar h2 = h * h;
  Scalar worst(0);
  for (std::size_t k = 1; k + 1 < samples.size(); ++k) {
    const auto x_prev = samples[k - 1].point.x();
    const auto x_mid = samples[k].point.x();
    const auto x_next = samples[k + 1].point.x();
    const Coords<Scalar> accel = (x_next - Scalar(2) * x_mid + x_prev) / h2;
    worst = std::max(worst, (accel - sr * x_mid).cwiseAbs().maxCoeff());
  }
  return worst;
}

}  // namespace hypsr

#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "hypsr/ode.hpp"

namespace hypsr::io {

/// psi, t_1..t_s, x_{s+1}..x_n, dt_1..dt_s, dx_{s+1}..dx_n, form_residual, ortho_residual
std::vector<std::string> trajectory_columns(const Signature& sig);

/// Numbers are written with 17 significant digits so binary64 values round-trip.
std::string format_real(double value);

void write_trajectory_csv(std::ostream& out, const Trajectory<double>& traj);
void write_trajectory_json(std::ostream& out, const Trajectory<double>& traj);

/// The CSV carries no radius, so the caller supplies the spec it was written with.
/// Throws std::runtime_error on malformed input or a header that does not match spec.
Trajectory<double> read_trajectory_csv(std::istream& in, const CurveSpec<double>& spec,
                                       Provenance provenance);

Trajectory<double> read_trajectory_json(std::istream& in);

}  // namespace hypsr::io

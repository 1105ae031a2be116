#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "hypsr/signature.hpp"

namespace hypsr::verify {

struct VerifyConfig {
  int max_s = 4;
  int max_r = 4;
  std::vector<double> radii{1.0};
  double psi_start = -2.0;
  double psi_end = 2.0;
  int samples = 101;
  int ode_steps = 2000;
  double tol = 1e-9;
  // Builds every curve with R_eff = R instead of R / sqrt(r).
  bool fault_unscaled_amplitude = false;
  bool parallel = true;
};

/// One property evaluated on one grid cell. `worst` is the largest normalized
/// residual seen; the check passes iff worst <= bound.
struct PropertyCheck {
  std::string name;
  double worst = 0.0;
  double bound = 0.0;
  bool passed = false;
};

struct CellReport {
  Signature sig;
  double radius;
  std::vector<PropertyCheck> checks;

  bool passed() const;
  const PropertyCheck& check(const std::string& name) const;
};

struct VerifyReport {
  std::vector<CellReport> cells;

  bool passed() const;
  std::size_t failures() const;
};

/// Throws std::invalid_argument for an unusable config (tol <= 0, empty grid, ...).
void validate(const VerifyConfig& cfg);

CellReport verify_cell(const Signature& sig, double radius, const VerifyConfig& cfg);

/// Cells are ordered by (s, r, R) regardless of evaluation order.
VerifyReport run_verification(const VerifyConfig& cfg);

void write_report_text(std::ostream& out, const VerifyReport& report);
void write_report_json(std::ostream& out, const VerifyReport& report);

}  // namespace hypsr::verify

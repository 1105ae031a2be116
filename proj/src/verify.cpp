#include "hypsr/verify.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <future>
#include <ostream>
#include <stdexcept>

#include <json.hpp>

#include "hypsr/bundle.hpp"
#include "hypsr/geometry.hpp"
#include "hypsr/ode.hpp"
#include "hypsr/transform.hpp"

namespace hypsr::verify {

namespace {

constexpr double kFiniteDifferenceStep = 1e-5;
constexpr double kFiniteDifferenceBound = 1e-6;
constexpr double kOdeOracleScale = 1e-7;
constexpr double kOdeConservationBound = 1e-7;
constexpr double kReductionBound = 1e-10;
constexpr double kGeneratorDefectBound = 1e-12;
constexpr double kBoostRapidity = 0.5;
constexpr double kRotationAngle = 0.7;

PropertyCheck make_check(std::string name, double worst, double bound) {
  return {std::move(name), worst, bound, worst <= bound};
}

template <typename Derived>
double block_spread(const Eigen::MatrixBase<Derived>& block) {
  return block.maxCoeff() - block.minCoeff();
}

double uniformity_spread(const Coords<double>& c, const Signature& sig) {
  return std::max(block_spread(c.head(sig.s())), block_spread(c.tail(sig.r())));
}

std::vector<double> sample_grid(const VerifyConfig& cfg) {
  std::vector<double> grid(cfg.samples);
  for (int k = 0; k < cfg.samples; ++k) {
    grid[k] = cfg.psi_start + (cfg.psi_end - cfg.psi_start) * k / (cfg.samples - 1);
  }
  grid.back() = cfg.psi_end;
  return grid;
}

std::vector<PseudoOrthogonalMap<double>> generators(const Signature& sig) {
  std::vector<PseudoOrthogonalMap<double>> maps;
  for (int ti = 0; ti < sig.s(); ++ti) {
    for (int xj = sig.s(); xj < sig.n(); ++xj) maps.push_back(boost(sig, ti, xj, kBoostRapidity));
  }
  for (int a = 0; a < sig.n(); ++a) {
    for (int b = a + 1; b < sig.n(); ++b) {
      if (sig.is_temporal(a) == sig.is_temporal(b)) {
        maps.push_back(block_rotation(sig, a, b, kRotationAngle));
      }
    }
  }
  auto product = PseudoOrthogonalMap<double>::identity(sig);
  for (const auto& g : maps) product = g * product;
  maps.push_back(product);
  return maps;
}

}  // namespace

bool CellReport::passed() const {
  return std::all_of(checks.begin(), checks.end(), [](const auto& c) { return c.passed; });
}

const PropertyCheck& CellReport::check(const std::string& name) const {
  for (const auto& c : checks) {
    if (c.name == name) return c;
  }
  throw std::out_of_range("no check named '" + name + "'");
}

bool VerifyReport::passed() const { return failures() == 0; }

std::size_t VerifyReport::failures() const {
  return std::count_if(cells.begin(), cells.end(), [](const auto& c) { return !c.passed(); });
}

void validate(const VerifyConfig& cfg) {
  if (!(cfg.tol > 0.0)) throw std::invalid_argument("verify: tol must be > 0");
  if (cfg.max_s < 1 || cfg.max_r < 1) throw std::invalid_argument("verify: S_max must be >= 1");
  if (cfg.radii.empty()) throw std::invalid_argument("verify: radius list is empty");
  for (double R : cfg.radii) {
    if (!(R > 0.0) || !std::isfinite(R)) {
      throw std::invalid_argument("verify: radii must be positive and finite");
    }
  }
  if (cfg.samples < 3) throw std::invalid_argument("verify: need at least 3 psi samples");
  if (!(cfg.psi_end > cfg.psi_start)) throw std::invalid_argument("verify: empty psi range");
  if (cfg.ode_steps < 1) throw std::invalid_argument("verify: ode steps must be >= 1");
}

CellReport verify_cell(const Signature& sig, double radius, const VerifyConfig& cfg) {
  const CurveSpec<double> spec =
      cfg.fault_unscaled_amplitude ? CurveSpec<double>::with_amplitude(sig, radius, radius)
                                   : CurveSpec<double>(sig, radius);
  const double R2 = radius * radius;
  const double sr = double(sig.s()) * double(sig.r());
  const std::vector<double> grid = sample_grid(cfg);

  CellReport cell{sig, radius, {}};

  // Closed-form invariants.
  double quadric = 0, ortho = 0, vnorm = 0, spread = 0, fd = 0;
  for (double psi : grid) {
    const auto p = point_at(psi, spec);
    const auto v = velocity_at(psi, spec);
    quadric = std::max(quadric, std::abs(quadratic_form(p) - R2) / R2);
    ortho = std::max(ortho, std::abs(inner_product(p, v)) / R2);
    vnorm = std::max(vnorm, std::abs(quadratic_form(v) + sr * R2) / (sr * R2));
    spread = std::max({spread, uniformity_spread(p.coords(), sig),
                       uniformity_spread(v.coords(), sig)});
    const double h = kFiniteDifferenceStep;
    const Coords<double> diff =
        (point_at(psi + h, spec).coords() - point_at(psi - h, spec).coords()) / (2 * h);
    const double scale = std::max(1.0, v.coords().cwiseAbs().maxCoeff());
    fd = std::max(fd, (diff - v.coords()).cwiseAbs().maxCoeff() / scale);
  }
  cell.checks.push_back(make_check("quadric", quadric, cfg.tol));
  cell.checks.push_back(make_check("orthogonality", ortho, cfg.tol));
  cell.checks.push_back(make_check("velocity_norm", vnorm, cfg.tol));
  cell.checks.push_back(make_check("uniformity", spread, 0.0));
  cell.checks.push_back(make_check("fd_velocity", fd, kFiniteDifferenceBound));

  // Numeric flow from the initial condition, forwards and backwards from psi = 0.
  double deviation = 0, conservation = 0, flow_spread = 0;
  for (double end : {cfg.psi_start, cfg.psi_end}) {
    const IntegratorConfig<double> icfg{0.0, end, cfg.ode_steps, spec};
    const auto numeric = integrate(icfg, initial_point(spec));
    const auto exact = closed_form_trajectory(icfg);
    deviation = std::max(deviation, max_deviation(numeric, exact));
    for (const auto& sample : numeric.samples) {
      conservation = std::max({conservation, std::abs(quadratic_form(sample.point) - R2) / R2,
                               std::abs(inner_product(sample.point, sample.velocity)) / R2});
      flow_spread = std::max({flow_spread, uniformity_spread(sample.point.coords(), sig),
                              uniformity_spread(sample.velocity.coords(), sig)});
    }
  }
  const double reach = std::max(std::abs(cfg.psi_start), std::abs(cfg.psi_end));
  const double oracle_bound =
      kOdeOracleScale *
      (1.0 + sig.r() * spec.effective_radius() * std::cosh(reach * spec.frequency()));
  cell.checks.push_back(make_check("ode_oracle", deviation, oracle_bound));
  cell.checks.push_back(make_check("ode_conservation", conservation, kOdeConservationBound));
  cell.checks.push_back(make_check("ode_uniformity", flow_spread, 0.0));

  // Bundle layout and the reduced second-order equation on the lift.
  double layout_errors = 0, reduction = 0;
  for (double psi : grid) {
    for (int p = 0; p <= kDefaultMaxLiftOrder; ++p) {
      const auto lift = curve_lift(spec, psi, p);
      if (static_cast<std::size_t>(lift.coords().size()) !=
          bundle_dim(static_cast<std::size_t>(sig.n()), p)) {
        layout_errors += 1;
      }
      if (p >= 1 && !(project(lift) == curve_lift(spec, psi, p - 1))) layout_errors += 1;
    }
    const auto lift2 = curve_lift(spec, psi, 2);
    const Coords<double> base = lift2.block(0);
    const Coords<double> accel = lift2.block(3);
    const double scale = std::max(1e-300, sr * base.cwiseAbs().maxCoeff());
    reduction = std::max(reduction, (accel - sr * base).cwiseAbs().maxCoeff() / scale);
  }
  cell.checks.push_back(make_check("bundle_layout", layout_errors, 0.0));
  cell.checks.push_back(make_check("bundle_reduction", reduction, kReductionBound));

  // Isometries keep curve points on the quadric. Residuals are measured
  // against the Euclidean size of the image, which sets the rounding floor.
  double defect = 0, image = 0;
  for (const auto& g : generators(sig)) {
    defect = std::max(defect, isometry_defect(g));
    for (double psi : grid) {
      const auto q = apply(g, point_at(psi, spec));
      const double scale = std::max(R2, q.coords().squaredNorm());
      image = std::max(image, std::abs(quadratic_form(q) - R2) / scale);
    }
  }
  cell.checks.push_back(make_check("generator_isometry", defect, kGeneratorDefectBound));
  cell.checks.push_back(make_check("transform_quadric", image, cfg.tol));
  return cell;
}

VerifyReport run_verification(const VerifyConfig& cfg) {
  validate(cfg);
  std::vector<std::pair<Signature, double>> cells;
  for (int s = 1; s <= cfg.max_s; ++s) {
    for (int r = 1; r <= cfg.max_r; ++r) {
      for (double R : cfg.radii) cells.emplace_back(Signature(s, r), R);
    }
  }
  VerifyReport report;
  report.cells.reserve(cells.size());
  if (cfg.parallel) {
    std::vector<std::future<CellReport>> pending;
    pending.reserve(cells.size());
    for (const auto& [sig, R] : cells) {
      pending.push_back(std::async(std::launch::async, [&cfg, sig = sig, R = R] {
        return verify_cell(sig, R, cfg);
      }));
    }
    for (auto& f : pending) report.cells.push_back(f.get());
  } else {
    for (const auto& [sig, R] : cells) report.cells.push_back(verify_cell(sig, R, cfg));
  }
  return report;
}

void write_report_text(std::ostream& out, const VerifyReport& report) {
  if (report.cells.empty()) return;
  char buf[64];
  out << "  s  r  radius   ";
  for (const auto& c : report.cells.front().checks) {
    std::snprintf(buf, sizeof buf, "%-19s", c.name.c_str());
    out << buf;
  }
  out << "status\n";
  for (const auto& cell : report.cells) {
    std::snprintf(buf, sizeof buf, "%3d%3d  %-8.4g ", cell.sig.s(), cell.sig.r(), cell.radius);
    out << buf;
    for (const auto& c : cell.checks) {
      std::snprintf(buf, sizeof buf, "%-10.3e %-4s    ", c.worst, c.passed ? "ok" : "FAIL");
      out << buf;
    }
    out << (cell.passed() ? "PASS" : "FAIL") << '\n';
  }
  out << report.cells.size() - report.failures() << "/" << report.cells.size()
      << " cells passed\n";
}

void write_report_json(std::ostream& out, const VerifyReport& report) {
  nlohmann::json doc;
  doc["passed"] = report.passed();
  nlohmann::json cells = nlohmann::json::array();
  for (const auto& cell : report.cells) {
    nlohmann::json checks = nlohmann::json::array();
    for (const auto& c : cell.checks) {
      checks.push_back({{"name", c.name}, {"worst", c.worst}, {"bound", c.bound},
                        {"passed", c.passed}});
    }
    cells.push_back({{"s", cell.sig.s()},
                     {"r", cell.sig.r()},
                     {"radius", cell.radius},
                     {"passed", cell.passed()},
                     {"checks", std::move(checks)}});
  }
  doc["cells"] = std::move(cells);
  out << doc.dump(2) << '\n';
}

}  // namespace hypsr::verify

// Command-line front end: trajectory generation, invariant sweeps, bundle dimensions.
//
// Exit codes: 0 success, 1 configuration error, 2 I/O error, 3 verification failure.

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "hypsr/bundle.hpp"
#include "hypsr/io.hpp"
#include "hypsr/ode.hpp"
#include "hypsr/verify.hpp"

namespace {

enum ExitCode : int { kOk = 0, kConfigError = 1, kIoError = 2, kVerifyFailed = 3 };

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct RunConfig {
  std::string sig = "1,1";
  double radius = 1.0;
  double psi_start = -3.0;
  double psi_end = 3.0;
  int steps = 600;
  double tol = 1e-9;
  std::string mode = "closed_form";
  std::string format = "csv";
  std::string out = "-";
};

hypsr::Signature parse_signature(const std::string& text) {
  const auto comma = text.find(',');
  if (comma == std::string::npos) throw ConfigError("--sig expects 's,r', got '" + text + "'");
  try {
    std::size_t used_s = 0, used_r = 0;
    const std::string s_text = text.substr(0, comma);
    const std::string r_text = text.substr(comma + 1);
    const int s = std::stoi(s_text, &used_s);
    const int r = std::stoi(r_text, &used_r);
    if (used_s != s_text.size() || used_r != r_text.size()) throw std::invalid_argument(text);
    return hypsr::Signature(s, r);
  } catch (const std::out_of_range&) {
    throw ConfigError("--sig out of range: '" + text + "'");
  } catch (const std::invalid_argument& e) {
    throw ConfigError("--sig '" + text + "': " + e.what());
  }
}

/// Runs `body` with a stream bound to `path` ("-" is stdout).
template <typename Body>
void with_output(const std::string& path, Body&& body) {
  if (path == "-") {
    body(std::cout);
    std::cout.flush();
    return;
  }
  std::ofstream file(path);
  if (!file) throw IoError("cannot open '" + path + "' for writing");
  body(file);
  file.flush();
  if (!file) throw IoError("write to '" + path + "' failed");
}

int cmd_generate(const RunConfig& cfg) {
  const hypsr::Signature sig = parse_signature(cfg.sig);
  if (!(cfg.tol > 0.0)) throw ConfigError("--tol must be > 0");
  if (cfg.steps < 1) throw ConfigError("--steps must be >= 1");
  if (cfg.mode != "closed_form" && cfg.mode != "integrated") {
    throw ConfigError("--mode must be closed_form or integrated");
  }
  if (cfg.format != "csv" && cfg.format != "json") throw ConfigError("--format must be csv or json");

  hypsr::Trajectory<double> traj = [&] {
    try {
      const hypsr::CurveSpec<double> spec(sig, cfg.radius);
      const hypsr::IntegratorConfig<double> icfg{cfg.psi_start, cfg.psi_end, cfg.steps, spec};
      if (cfg.mode == "closed_form") return hypsr::closed_form_trajectory(icfg);
      return hypsr::integrate(icfg, hypsr::point_at(cfg.psi_start, spec));
    } catch (const std::logic_error& e) {
      throw ConfigError(e.what());
    }
  }();

  with_output(cfg.out, [&](std::ostream& os) {
    if (cfg.format == "csv") {
      hypsr::io::write_trajectory_csv(os, traj);
    } else {
      hypsr::io::write_trajectory_json(os, traj);
    }
  });

  const double r2 = cfg.radius * cfg.radius;
  std::size_t flagged = 0;
  for (const auto& sample : traj.samples) {
    const double scale = cfg.tol * std::max(r2, sample.point.coords().squaredNorm());
    if (std::abs(hypsr::quadratic_form(sample.point) - r2) > scale ||
        std::abs(hypsr::inner_product(sample.point, sample.velocity)) > scale) {
      ++flagged;
    }
  }
  if (flagged > 0) {
    std::cerr << "warning: " << flagged << " of " << traj.samples.size()
              << " samples exceed --tol on form or orthogonality residual\n";
  }
  return kOk;
}

int cmd_verify(hypsr::verify::VerifyConfig cfg, int max_sig, const std::string& format,
               const std::string& out) {
  if (format != "text" && format != "json") throw ConfigError("--format must be text or json");
  cfg.max_s = max_sig;
  cfg.max_r = max_sig;
  try {
    hypsr::verify::validate(cfg);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  const auto report = hypsr::verify::run_verification(cfg);
  with_output(out, [&](std::ostream& os) {
    if (format == "json") {
      hypsr::verify::write_report_json(os, report);
    } else {
      hypsr::verify::write_report_text(os, report);
    }
  });
  return report.passed() ? kOk : kVerifyFailed;
}

int cmd_dims(long long n, int p) {
  if (n < 1) throw ConfigError("n must be >= 1");
  if (p < 0) throw ConfigError("p must be >= 0");
  try {
    std::cout << hypsr::bundle_dim(static_cast<std::size_t>(n), p) << '\n';
  } catch (const std::overflow_error& e) {
    throw ConfigError(e.what());
  }
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Uniform hyperbolic parametrization of H^{s,r}: curves, invariants, bundles"};
  app.require_subcommand(1);

  RunConfig gen;
  auto* generate = app.add_subcommand("generate", "Write a trajectory of the uniform curve");
  generate->add_option("--sig", gen.sig, "Signature as s,r")->capture_default_str();
  generate->add_option("--radius", gen.radius, "Quadric radius R")->capture_default_str();
  generate->add_option("--psi-start", gen.psi_start)->capture_default_str();
  generate->add_option("--psi-end", gen.psi_end)->capture_default_str();
  generate->add_option("--steps", gen.steps, "Number of intervals")->capture_default_str();
  generate->add_option("--tol", gen.tol, "Relative residual tolerance for the stderr warning")
      ->capture_default_str();
  generate->add_option("--mode", gen.mode, "closed_form | integrated")->capture_default_str();
  generate->add_option("--format", gen.format, "csv | json")->capture_default_str();
  generate->add_option("--out", gen.out, "Output path, '-' for stdout")->capture_default_str();

  hypsr::verify::VerifyConfig vcfg;
  int max_sig = 4;
  std::string vformat = "text";
  std::string vout = "-";
  auto* verify = app.add_subcommand("verify", "Sweep every invariant over a signature grid");
  verify->add_option("--max-sig", max_sig, "Largest s and r in the grid")->capture_default_str();
  verify->add_option("--radius", vcfg.radii, "Radii (comma separated)")
      ->delimiter(',')
      ->capture_default_str();
  verify->add_option("--psi-start", vcfg.psi_start)->capture_default_str();
  verify->add_option("--psi-end", vcfg.psi_end)->capture_default_str();
  verify->add_option("--samples", vcfg.samples, "psi samples per cell")->capture_default_str();
  verify->add_option("--steps", vcfg.ode_steps, "Integrator steps per direction")
      ->capture_default_str();
  verify->add_option("--tol", vcfg.tol, "Relative tolerance for closed-form invariants")
      ->capture_default_str();
  verify->add_option("--format", vformat, "text | json")->capture_default_str();
  verify->add_option("--out", vout, "Report path, '-' for stdout")->capture_default_str();
  verify->add_flag("--inject-fault", vcfg.fault_unscaled_amplitude,
                   "Use R_eff = R instead of R/sqrt(r) (self-test of the sweep)");
  bool serial = false;
  verify->add_flag("--serial", serial, "Evaluate cells on one thread");

  long long dims_n = 0;
  int dims_p = 0;
  auto* dims = app.add_subcommand("dims", "Print the dimension 2^p n of T^p(M)");
  dims->add_option("n", dims_n, "Manifold dimension")->required();
  dims->add_option("p", dims_p, "Bundle order")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kConfigError;
  }

  try {
    if (*generate) return cmd_generate(gen);
    if (*verify) {
      vcfg.parallel = !serial;
      return cmd_verify(vcfg, max_sig, vformat, vout);
    }
    if (*dims) return cmd_dims(dims_n, dims_p);
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kConfigError;
  } catch (const IoError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kIoError;
  }
  return kConfigError;
}

#include "hypsr/io.hpp"

#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace hypsr::io {

namespace {

using nlohmann::json;

double parse_real(const std::string& field) {
  std::size_t used = 0;
  double value = 0.0;
  try {
    value = std::stod(field, &used);
  } catch (const std::exception&) {
    throw std::runtime_error("not a number: '" + field + "'");
  }
  if (used != field.size()) throw std::runtime_error("trailing characters in '" + field + "'");
  return value;
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::stringstream ss(line);
  std::string field;
  while (std::getline(ss, field, ',')) fields.push_back(field);
  if (!line.empty() && line.back() == ',') fields.emplace_back();
  return fields;
}

struct Residuals {
  double form;
  double ortho;
};

Residuals residuals(const Sample<double>& sample, double radius) {
  return {quadratic_form(sample.point) - radius * radius,
          inner_product(sample.point, sample.velocity)};
}

std::vector<double> to_vector(const Coords<double>& c) { return {c.data(), c.data() + c.size()}; }

Coords<double> to_coords(const json& array, int expected, const char* what) {
  if (!array.is_array() || static_cast<int>(array.size()) != expected) {
    throw std::runtime_error(std::string("json sample field '") + what + "' must have " +
                             std::to_string(expected) + " entries");
  }
  Coords<double> c(expected);
  for (int i = 0; i < expected; ++i) c[i] = array[i].get<double>();
  return c;
}

}  // namespace

std::vector<std::string> trajectory_columns(const Signature& sig) {
  std::vector<std::string> cols{"psi"};
  for (int i = 1; i <= sig.s(); ++i) cols.push_back("t_" + std::to_string(i));
  for (int j = sig.s() + 1; j <= sig.n(); ++j) cols.push_back("x_" + std::to_string(j));
  for (int i = 1; i <= sig.s(); ++i) cols.push_back("dt_" + std::to_string(i));
  for (int j = sig.s() + 1; j <= sig.n(); ++j) cols.push_back("dx_" + std::to_string(j));
  cols.emplace_back("form_residual");
  cols.emplace_back("ortho_residual");
  return cols;
}

std::string format_real(double value) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", value);
  return buf;
}

void write_trajectory_csv(std::ostream& out, const Trajectory<double>& traj) {
  const auto cols = trajectory_columns(traj.spec.sig());
  for (std::size_t c = 0; c < cols.size(); ++c) out << (c ? "," : "") << cols[c];
  out << '\n';
  for (const auto& sample : traj.samples) {
    const Residuals res = residuals(sample, traj.spec.radius());
    out << format_real(sample.psi);
    for (Eigen::Index i = 0; i < sample.point.coords().size(); ++i) {
      out << ',' << format_real(sample.point.coords()[i]);
    }
    for (Eigen::Index i = 0; i < sample.velocity.coords().size(); ++i) {
      out << ',' << format_real(sample.velocity.coords()[i]);
    }
    out << ',' << format_real(res.form) << ',' << format_real(res.ortho) << '\n';
  }
}

void write_trajectory_json(std::ostream& out, const Trajectory<double>& traj) {
  const Signature& sig = traj.spec.sig();
  json doc;
  doc["signature"] = {{"s", sig.s()}, {"r", sig.r()}};
  doc["radius"] = traj.spec.radius();
  doc["effective_radius"] = traj.spec.effective_radius();
  doc["provenance"] = to_string(traj.provenance);
  doc["columns"] = trajectory_columns(sig);
  json samples = json::array();
  for (const auto& sample : traj.samples) {
    const Residuals res = residuals(sample, traj.spec.radius());
    samples.push_back({{"psi", sample.psi},
                       {"t", to_vector(sample.point.t())},
                       {"x", to_vector(sample.point.x())},
                       {"dt", to_vector(sample.velocity.t())},
                       {"dx", to_vector(sample.velocity.x())},
                       {"form_residual", res.form},
                       {"ortho_residual", res.ortho}});
  }
  doc["samples"] = std::move(samples);
  out << doc.dump(2) << '\n';
}

Trajectory<double> read_trajectory_csv(std::istream& in, const CurveSpec<double>& spec,
                                       Provenance provenance) {
  const Signature& sig = spec.sig();
  const auto expected = trajectory_columns(sig);
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error("csv: missing header");
  if (split_csv_line(line) != expected) {
    throw std::runtime_error("csv: header does not match signature " + to_string(sig));
  }
  Trajectory<double> traj{spec, provenance, {}};
  const int n = sig.n();
  std::size_t row = 0;
  while (std::getline(in, line)) {
    ++row;
    if (line.empty()) continue;
    const auto fields = split_csv_line(line);
    if (fields.size() != expected.size()) {
      throw std::runtime_error("csv: row " + std::to_string(row) + " has " +
                               std::to_string(fields.size()) + " fields, expected " +
                               std::to_string(expected.size()));
    }
    Coords<double> p(n);
    Coords<double> v(n);
    for (int i = 0; i < n; ++i) {
      p[i] = parse_real(fields[1 + i]);
      v[i] = parse_real(fields[1 + n + i]);
    }
    traj.samples.push_back({parse_real(fields[0]), PseudoPoint<double>(sig, std::move(p)),
                            TangentVector<double>(sig, std::move(v))});
  }
  return traj;
}

Trajectory<double> read_trajectory_json(std::istream& in) {
  json doc;
  try {
    doc = json::parse(in);
    const Signature sig(doc.at("signature").at("s").get<int>(),
                        doc.at("signature").at("r").get<int>());
    const double radius = doc.at("radius").get<double>();
    const double amplitude = doc.at("effective_radius").get<double>();
    const std::string prov = doc.at("provenance").get<std::string>();
    if (prov != "closed_form" && prov != "integrated") {
      throw std::runtime_error("json: unknown provenance '" + prov + "'");
    }
    Trajectory<double> traj{CurveSpec<double>::with_amplitude(sig, radius, amplitude),
                            prov == "closed_form" ? Provenance::closed_form
                                                  : Provenance::integrated,
                            {}};
    for (const auto& s : doc.at("samples")) {
      traj.samples.push_back(
          {s.at("psi").get<double>(),
           PseudoPoint<double>::from_blocks(sig, to_coords(s.at("t"), sig.s(), "t"),
                                            to_coords(s.at("x"), sig.r(), "x")),
           TangentVector<double>::from_blocks(sig, to_coords(s.at("dt"), sig.s(), "dt"),
                                              to_coords(s.at("dx"), sig.r(), "dx"))});
    }
    return traj;
  } catch (const json::exception& e) {
    throw std::runtime_error(std::string("json: ") + e.what());
  }
}

}  // namespace hypsr::io

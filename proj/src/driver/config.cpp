#include "sinhlab/driver.hpp"

#include "sinhlab/errors.hpp"

#include <fstream>
#include <set>

namespace sinhlab {

using nlohmann::json;

namespace {

void allow_only(const json& j, const std::set<std::string>& keys, const std::string& where) {
  if (!j.is_object()) throw Error(Errc::ConfigInvalid, where + " must be an object");
  for (const auto& [k, v] : j.items())
    if (!keys.count(k)) throw Error(Errc::ConfigInvalid, "unknown key '" + k + "' in " + where);
}

Vec2 vec2_from(const json& j, const std::string& where) {
  if (!j.is_array() || j.size() != 2) throw Error(Errc::ConfigInvalid, where + " must be a pair of numbers");
  return Vec2(j[0].get<double>(), j[1].get<double>());
}

std::string scheme_name(BoundaryScheme s) {
  switch (s) {
    case BoundaryScheme::CutCell: return "cut_cell";
    case BoundaryScheme::ShortleyWeller: return "shortley_weller";
    case BoundaryScheme::Natural: return "natural";
  }
  return "cut_cell";
}

}  // namespace

SignedConfig ExperimentConfig::signed_config() const {
  SignedConfig c;
  c.domain = domain;
  c.points = seeds;
  c.signs = signs;
  return c;
}

void ExperimentConfig::validate() const {
  auto bad = [](const std::string& msg) { throw Error(Errc::ConfigInvalid, msg); };
  if (seeds.empty()) bad("at least one peak is required");
  if (signs.size() != seeds.size()) bad("one sign per peak is required");
  for (int s : signs)
    if (s != 1 && s != -1) bad("signs must be +1 or -1");
  if (rho_schedule.empty()) bad("rho schedule is empty");
  for (size_t i = 0; i < rho_schedule.size(); ++i) {
    if (!(rho_schedule[i] > 0.0)) bad("rho values must be positive");
    if (i > 0 && !(rho_schedule[i] < rho_schedule[i - 1])) bad("rho schedule must be strictly descending");
  }
  if (eigen_count < 4 * m() + 1) bad("eigen_count must be at least 4m + 1 = " + std::to_string(4 * m() + 1));
  if (!(h > 0.0)) bad("mesh spacing must be positive");
  if (!(newton_tol > 0.0) || !(critical_tol > 0.0) || !(eigen_tol > 0.0)) bad("tolerances must be positive");
  if (scheme == BoundaryScheme::Natural) bad("the natural closure is not a Dirichlet scheme");
  if (!(fit.window > 0.0) || fit.min_samples < 1) bad("fit window and sample floor must be positive");
  if (!(rescale.radius >= fit.window) || !(rescale.spacing > 0.0)) bad("rescale radius must cover the fit window");
  try {
    signed_config().validate();
  } catch (const Error& e) {
    bad(std::string("peaks: ") + e.what());
  }
}

json to_json(const Domain& d) {
  switch (d.kind()) {
    case DomainKind::UnitDisc: return {{"kind", "unit_disc"}};
    case DomainKind::Disc:
      return {{"kind", "disc"},
              {"radius", d.disc_shape().radius},
              {"center", {d.disc_shape().center.x(), d.disc_shape().center.y()}}};
    case DomainKind::Rectangle:
      return {{"kind", "rectangle"}, {"width", d.rectangle_shape().width}, {"height", d.rectangle_shape().height}};
  }
  return {};
}

Domain domain_from_json(const json& j) {
  if (!j.is_object() || !j.contains("kind")) throw Error(Errc::ConfigInvalid, "domain needs a kind");
  const std::string kind = j.at("kind").get<std::string>();
  if (kind == "unit_disc") {
    allow_only(j, {"kind"}, "domain");
    return Domain::unit_disc();
  }
  if (kind == "disc") {
    allow_only(j, {"kind", "radius", "center"}, "domain");
    const double r = j.value("radius", 1.0);
    const Vec2 c = j.contains("center") ? vec2_from(j.at("center"), "domain.center") : Vec2::Zero();
    if (r == 1.0 && c.isZero()) return Domain::unit_disc();
    return Domain::disc(r, c);
  }
  if (kind == "rectangle") {
    allow_only(j, {"kind", "width", "height"}, "domain");
    return Domain::rectangle(j.at("width").get<double>(), j.at("height").get<double>());
  }
  throw Error(Errc::ConfigInvalid, "unknown domain kind '" + kind + "'");
}

ExperimentConfig parse_config(const json& j) {
  ExperimentConfig c;
  try {
    allow_only(j,
               {"domain", "peaks", "rho_schedule", "h", "eigen_count", "tolerances", "boundary_scheme", "fit", "rescale",
                "probes", "output_dir", "write_fields"},
               "config");
    for (const char* key : {"domain", "peaks", "rho_schedule", "h"})
      if (!j.contains(key)) throw Error(Errc::ConfigInvalid, std::string("missing required key '") + key + "'");
    c.domain = domain_from_json(j.at("domain"));
    if (!j.at("peaks").is_array()) throw Error(Errc::ConfigInvalid, "peaks must be an array");
    for (const json& p : j.at("peaks")) {
      allow_only(p, {"seed", "sign"}, "peak");
      c.seeds.push_back(vec2_from(p.at("seed"), "peak.seed"));
      c.signs.push_back(p.at("sign").get<int>());
    }
    c.rho_schedule = j.at("rho_schedule").get<std::vector<double>>();
    c.h = j.at("h").get<double>();
    c.eigen_count = j.value("eigen_count", 4 * c.m() + 1);
    if (j.contains("tolerances")) {
      const json& t = j.at("tolerances");
      allow_only(t, {"newton", "critical_point", "eigen"}, "tolerances");
      c.newton_tol = t.value("newton", c.newton_tol);
      c.critical_tol = t.value("critical_point", c.critical_tol);
      c.eigen_tol = t.value("eigen", c.eigen_tol);
    }
    if (j.contains("boundary_scheme")) {
      const std::string s = j.at("boundary_scheme").get<std::string>();
      if (s == "cut_cell") c.scheme = BoundaryScheme::CutCell;
      else if (s == "shortley_weller") c.scheme = BoundaryScheme::ShortleyWeller;
      else throw Error(Errc::ConfigInvalid, "unknown boundary scheme '" + s + "'");
    }
    if (j.contains("fit")) {
      allow_only(j.at("fit"), {"window", "min_samples"}, "fit");
      c.fit.window = j.at("fit").value("window", c.fit.window);
      c.fit.min_samples = j.at("fit").value("min_samples", c.fit.min_samples);
    }
    if (j.contains("rescale")) {
      allow_only(j.at("rescale"), {"radius", "spacing"}, "rescale");
      c.rescale.radius = j.at("rescale").value("radius", c.rescale.radius);
      c.rescale.spacing = j.at("rescale").value("spacing", c.rescale.spacing);
    }
    if (j.contains("probes")) {
      allow_only(j.at("probes"), {"peak_gap", "boundary_gap"}, "probes");
      c.probes.peak_gap = j.at("probes").value("peak_gap", c.probes.peak_gap);
      c.probes.boundary_gap = j.at("probes").value("boundary_gap", c.probes.boundary_gap);
    }
    c.output_dir = j.value("output_dir", c.output_dir);
    c.write_fields = j.value("write_fields", c.write_fields);
  } catch (const json::exception& e) {
    throw Error(Errc::ConfigInvalid, e.what());
  }
  c.validate();
  return c;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(Errc::Io, "cannot open " + path.string());
  json j;
  try {
    j = json::parse(in);
  } catch (const json::exception& e) {
    throw Error(Errc::ConfigInvalid, path.string() + ": " + e.what());
  }
  return parse_config(j);
}

json to_json(const ExperimentConfig& c) {
  json peaks = json::array();
  for (int k = 0; k < c.m(); ++k) peaks.push_back({{"seed", {c.seeds[k].x(), c.seeds[k].y()}}, {"sign", c.signs[k]}});
  return {{"domain", to_json(c.domain)},
          {"peaks", peaks},
          {"rho_schedule", c.rho_schedule},
          {"h", c.h},
          {"eigen_count", c.eigen_count},
          {"tolerances", {{"newton", c.newton_tol}, {"critical_point", c.critical_tol}, {"eigen", c.eigen_tol}}},
          {"boundary_scheme", scheme_name(c.scheme)},
          {"fit", {{"window", c.fit.window}, {"min_samples", c.fit.min_samples}}},
          {"rescale", {{"radius", c.rescale.radius}, {"spacing", c.rescale.spacing}}},
          {"probes", {{"peak_gap", c.probes.peak_gap}, {"boundary_gap", c.probes.boundary_gap}}},
          {"output_dir", c.output_dir},
          {"write_fields", c.write_fields}};
}

}  // namespace sinhlab

#include "sinhlab/driver.hpp"

#include "sinhlab/errors.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>

namespace sinhlab {

using nlohmann::json;

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

/// null stands for NaN in both directions.
json num(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }
double num(const json& j) { return j.is_null() ? kNaN : j.get<double>(); }

json nums(const std::vector<double>& v) {
  json a = json::array();
  for (double x : v) a.push_back(num(x));
  return a;
}
json nums(const Eigen::VectorXd& v) {
  json a = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(num(v[i]));
  return a;
}
std::vector<double> nums_from(const json& j) {
  std::vector<double> v;
  for (const json& x : j) v.push_back(num(x));
  return v;
}
Eigen::VectorXd vec_from(const json& j) {
  const std::vector<double> v = nums_from(j);
  return Eigen::Map<const Eigen::VectorXd>(v.data(), static_cast<Eigen::Index>(v.size()));
}

json point(const Vec2& p) { return {p.x(), p.y()}; }
Vec2 point_from(const json& j) { return Vec2(j.at(0).get<double>(), j.at(1).get<double>()); }

json matrix_rows(const Eigen::MatrixXd& m) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) rows.push_back(nums(Eigen::VectorXd(m.row(i).transpose())));
  return rows;
}
Eigen::MatrixXd matrix_from(const json& j) {
  if (j.empty()) return {};
  Eigen::MatrixXd m(static_cast<Eigen::Index>(j.size()), static_cast<Eigen::Index>(j.at(0).size()));
  for (Eigen::Index i = 0; i < m.rows(); ++i) m.row(i) = vec_from(j.at(static_cast<size_t>(i))).transpose();
  return m;
}

json fit_json(const ProfileFit& f) {
  return {{"model", to_string(f.model)},
          {"parameters", nums(f.parameters)},
          {"relative_residual", num(f.relative_residual)},
          {"profile_norm", num(f.profile_norm)},
          {"samples", f.samples}};
}

ProfileModel model_from(const std::string& s) {
  for (ProfileModel m : {ProfileModel::Constant, ProfileModel::Dipole, ProfileModel::Radial})
    if (to_string(m) == s) return m;
  throw Error(Errc::ConfigInvalid, "unknown profile model '" + s + "'");
}

Regime regime_from(const std::string& s) {
  for (Regime r : {Regime::Unresolved, Regime::Small, Regime::Translation, Regime::Dilation})
    if (to_string(r) == s) return r;
  throw Error(Errc::ConfigInvalid, "unknown regime '" + s + "'");
}

ProfileFit fit_from(const json& j) {
  ProfileFit f;
  f.model = model_from(j.at("model").get<std::string>());
  f.parameters = vec_from(j.at("parameters"));
  f.relative_residual = num(j.at("relative_residual"));
  f.profile_norm = num(j.at("profile_norm"));
  f.samples = j.at("samples").get<int>();
  return f;
}

json morse_json(const MorseCount& m) {
  return {{"index", m.index}, {"band", num(m.band)}, {"ambiguous", m.ambiguous}, {"certified", m.certified()}};
}

MorseCount morse_from(const json& j) {
  MorseCount m;
  m.index = j.at("index").get<int>();
  m.band = num(j.at("band"));
  m.ambiguous = j.at("ambiguous").get<std::vector<int>>();
  return m;
}

std::string g10(double v) {
  if (!std::isfinite(v)) return "";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

double own_model_residual(const ModeRecord& mode, Regime regime) {
  const int model = regime == Regime::Translation ? 1 : (regime == Regime::Dilation ? 2 : 0);
  double num2 = 0.0, den = 0.0;
  for (const auto& per_peak : mode.fits) {
    const ProfileFit& f = per_peak[model];
    num2 += std::pow(f.relative_residual * f.profile_norm, 2);
    den += f.profile_norm * f.profile_norm;
  }
  return den > 0.0 ? std::sqrt(num2 / den) : kNaN;
}

void write_text(const std::filesystem::path& p, const std::string& text) {
  std::ofstream out(p, std::ios::binary);
  if (!out) throw Error(Errc::Io, "cannot write " + p.string());
  out << text;
  if (!out) throw Error(Errc::Io, "write failed for " + p.string());
}

}  // namespace

json to_json(const CriticalPointResult& r) {
  json pts = json::array();
  for (const Vec2& p : r.config.points) pts.push_back(point(p));
  return {{"domain", to_json(r.config.domain)},
          {"points", pts},
          {"signs", r.config.signs},
          {"grad_norm", num(r.grad_norm)},
          {"hessian", matrix_rows(r.hess)},
          {"hessian_eigenvalues", nums(r.hess_eigenvalues)},
          {"classification", to_string(r.classification)},
          {"negative_count", r.negative_count},
          {"iterations", r.iterations}};
}

json to_json(const SpectrumResult& r, const MorseCount& morse) {
  json clusters = json::array();
  for (const auto& c : r.clusters) clusters.push_back(c);
  return {{"rho", num(r.rho)},
          {"eigenvalues", nums(r.eigenvalues)},
          {"clusters", clusters},
          {"morse", morse_json(morse)}};
}

json to_json(const AsymptoticReport& r) {
  json runs = json::array();
  for (const RunRecord& run : r.runs) {
    json peaks = json::array();
    for (const Vec2& p : run.peaks) peaks.push_back(point(p));
    json modes = json::array();
    for (const ModeRecord& mode : run.modes) {
      json fits = json::array();
      for (const auto& per_peak : mode.fits) {
        json three = json::array();
        for (const ProfileFit& f : per_peak) three.push_back(fit_json(f));
        fits.push_back(three);
      }
      modes.push_back({{"j", mode.j},
                       {"mu", num(mode.mu)},
                       {"regime", to_string(mode.regime)},
                       {"fits", fits},
                       {"far_field", num(mode.far_field)}});
    }
    runs.push_back({{"rho", num(run.rho)},
                    {"newton_iterations", run.newton_iterations},
                    {"newton_residual", num(run.newton_residual)},
                    {"correction_h1", num(run.correction_h1)},
                    {"peaks", peaks},
                    {"morse", morse_json(run.morse)},
                    {"modes", modes}});
  }
  json regimes = json::array();
  for (const RegimeSummary& s : r.regimes)
    regimes.push_back({{"j", s.j},
                       {"regime", to_string(s.regime)},
                       {"rates", nums(s.rates)},
                       {"extrapolated", num(s.extrapolated)},
                       {"target", num(s.target)},
                       {"slope_consistent", s.slope_consistent},
                       {"mismatch", s.mismatch},
                       {"best_model", to_string(s.best_model)},
                       {"residuals", {num(s.residuals[0]), num(s.residuals[1]), num(s.residuals[2])}}});
  json checks = json::array();
  for (const ReportCheck& c : r.checks)
    checks.push_back({{"name", c.name}, {"passed", c.passed}, {"detail", c.detail}, {"asserted", c.asserted}});
  return {{"m", r.m},
          {"rho_schedule", nums(r.rho_schedule)},
          {"etas", nums(r.etas)},
          {"mu_pred", matrix_rows(r.mu_pred)},
          {"hessian_negative", r.hessian_negative},
          {"predicted_morse", r.predicted_morse},
          {"all_passed", r.all_passed()},
          {"checks", checks},
          {"regimes", regimes},
          {"runs", runs}};
}

AsymptoticReport report_from_json(const json& j) {
  AsymptoticReport r;
  try {
    r.m = j.at("m").get<int>();
    r.rho_schedule = nums_from(j.at("rho_schedule"));
    r.etas = vec_from(j.at("etas"));
    r.mu_pred = matrix_from(j.at("mu_pred"));
    r.hessian_negative = j.at("hessian_negative").get<int>();
    r.predicted_morse = j.at("predicted_morse").get<int>();
    for (const json& c : j.at("checks"))
      r.checks.push_back({c.at("name").get<std::string>(), c.at("passed").get<bool>(), c.at("detail").get<std::string>(),
                          c.at("asserted").get<bool>()});
    for (const json& s : j.at("regimes")) {
      RegimeSummary t;
      t.j = s.at("j").get<int>();
      t.regime = regime_from(s.at("regime").get<std::string>());
      t.rates = nums_from(s.at("rates"));
      t.extrapolated = num(s.at("extrapolated"));
      t.target = num(s.at("target"));
      t.slope_consistent = s.at("slope_consistent").get<bool>();
      t.mismatch = s.at("mismatch").get<std::string>();
      t.best_model = model_from(s.at("best_model").get<std::string>());
      for (int k = 0; k < 3; ++k) t.residuals[k] = num(s.at("residuals").at(k));
      r.regimes.push_back(std::move(t));
    }
    for (const json& rj : j.at("runs")) {
      RunRecord run;
      run.rho = num(rj.at("rho"));
      run.newton_iterations = rj.at("newton_iterations").get<int>();
      run.newton_residual = num(rj.at("newton_residual"));
      run.correction_h1 = num(rj.at("correction_h1"));
      for (const json& p : rj.at("peaks")) run.peaks.push_back(point_from(p));
      run.morse = morse_from(rj.at("morse"));
      for (const json& mj : rj.at("modes")) {
        ModeRecord mode;
        mode.j = mj.at("j").get<int>();
        mode.mu = num(mj.at("mu"));
        mode.regime = regime_from(mj.at("regime").get<std::string>());
        mode.far_field = num(mj.at("far_field"));
        for (const json& per_peak : mj.at("fits")) {
          std::array<ProfileFit, 3> three;
          for (int k = 0; k < 3; ++k) three[k] = fit_from(per_peak.at(k));
          mode.fits.push_back(std::move(three));
        }
        run.modes.push_back(std::move(mode));
      }
      r.runs.push_back(std::move(run));
    }
  } catch (const json::exception& e) {
    throw Error(Errc::ConfigInvalid, std::string("malformed report: ") + e.what());
  }
  return r;
}

std::string report_json_text(const AsymptoticReport& r) { return to_json(r).dump(2) + "\n"; }

std::string report_csv(const AsymptoticReport& r) {
  std::string out = "rho,j,mu,regime,rate,residual\n";
  for (size_t i = 0; i < r.runs.size(); ++i) {
    const RunRecord& run = r.runs[i];
    for (const ModeRecord& mode : run.modes) {
      double rate = kNaN;
      if (mode.j >= 1 && mode.j <= static_cast<int>(r.regimes.size())) {
        const RegimeSummary& s = r.regimes[mode.j - 1];
        if (i < s.rates.size()) rate = s.rates[i];
      }
      const Regime regime = mode.j <= 4 * r.m ? regime_for_index(mode.j, r.m) : Regime::Unresolved;
      const double residual = mode.fits.empty() ? kNaN : own_model_residual(mode, regime);
      out += g10(run.rho) + "," + std::to_string(mode.j) + "," + g10(mode.mu) + "," + to_string(regime) + "," +
             g10(rate) + "," + g10(residual) + "\n";
    }
  }
  return out;
}

void export_report(const AsymptoticReport& r, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  write_text(dir / "report.json", report_json_text(r));
  write_text(dir / "report.csv", report_csv(r));
}

}  // namespace sinhlab

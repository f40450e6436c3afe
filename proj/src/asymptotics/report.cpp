#include "sinhlab/asymptotics.hpp"

#include "sinhlab/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <sstream>

namespace sinhlab {

bool AsymptoticReport::all_passed() const {
  return std::all_of(checks.begin(), checks.end(), [](const ReportCheck& c) { return c.passed || !c.asserted; });
}

namespace {

ProfileModel model_for(Regime r) {
  return r == Regime::Translation ? ProfileModel::Dipole
                                  : (r == Regime::Dilation ? ProfileModel::Radial : ProfileModel::Constant);
}

/// Residual of one model over all peaks, weighting each peak by its profile norm.
double aggregate_residual(const ModeRecord& mode, int model) {
  double num = 0.0, den = 0.0;
  for (const auto& per_peak : mode.fits) {
    const ProfileFit& f = per_peak[model];
    num += std::pow(f.relative_residual * f.profile_norm, 2);
    den += f.profile_norm * f.profile_norm;
  }
  return den > 0.0 ? std::sqrt(num / den) : 1.0;
}

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(6);
  os << v;
  return os.str();
}

}  // namespace

AsymptoticReport build_report(const SignedConfig& config, const CriticalPointResult& crit,
                              const std::vector<RunRecord>& runs) {
  const int m = config.size();
  if (runs.empty()) throw Error(Errc::IncompleteRuns, "no runs");
  for (const RunRecord& r : runs) {
    if (static_cast<int>(r.modes.size()) < 4 * m)
      throw Error(Errc::IncompleteRuns, "run at rho = " + fmt(r.rho) + " has fewer than 4m eigenpairs");
    for (int j = 0; j < 4 * m; ++j)
      if (static_cast<int>(r.modes[j].fits.size()) != m)
        throw Error(Errc::IncompleteRuns, "run at rho = " + fmt(r.rho) + " lacks profile fits");
  }

  AsymptoticReport rep;
  rep.m = m;
  rep.runs = runs;
  for (const RunRecord& r : runs) rep.rho_schedule.push_back(r.rho);
  const ScaledHessian sh = scaled_hessian_spectrum(crit.config, runs.front().rho);
  rep.etas = sh.etas;
  rep.mu_pred.resize(static_cast<Eigen::Index>(runs.size()), sh.etas.size());
  for (size_t i = 0; i < runs.size(); ++i)
    for (Eigen::Index e = 0; e < sh.etas.size(); ++e)
      rep.mu_pred(static_cast<Eigen::Index>(i), e) = 1.0 - 3.0 * std::numbers::pi * runs[i].rho * runs[i].rho * sh.etas[e];
  rep.hessian_negative = crit.negative_count;
  rep.predicted_morse = 3 * m - crit.negative_count;

  const bool enough = runs.size() >= 3;
  const RunRecord& last = runs.back();
  for (int j = 1; j <= 4 * m; ++j) {
    RegimeSummary s;
    s.j = j;
    s.regime = regime_for_index(j, m);
    std::vector<RateSample> series;
    for (const RunRecord& r : runs) series.push_back({r.rho, r.modes[j - 1].mu});
    if (enough) {
      const RateCheck rc = rate_series(series, s.regime);
      s.rates = rc.rates;
      s.extrapolated = rc.extrapolated;
      s.slope_consistent = rc.slope_consistent;
    } else {
      s.regime = Regime::Unresolved;
    }
    s.mismatch = regime_violation(series, regime_for_index(j, m));
    for (int model = 0; model < 3; ++model) s.residuals[model] = aggregate_residual(last.modes[j - 1], model);
    s.best_model = static_cast<ProfileModel>(std::min_element(s.residuals.begin(), s.residuals.end()) - s.residuals.begin());
    if (s.regime == Regime::Small) s.target = 1.0;
    if (s.regime == Regime::Dilation) s.target = 1.5;
    rep.regimes.push_back(s);
  }
  // Regime-2 targets 3 pi eta, matched by sorted order.
  if (enough) {
    std::vector<int> block;
    for (int j = m + 1; j <= 3 * m; ++j) block.push_back(j - 1);
    std::sort(block.begin(), block.end(),
              [&](int a, int b) { return rep.regimes[a].extrapolated < rep.regimes[b].extrapolated; });
    for (size_t r = 0; r < block.size() && static_cast<Eigen::Index>(r) < sh.etas.size(); ++r)
      rep.regimes[block[r]].target = 3.0 * std::numbers::pi * sh.etas[static_cast<Eigen::Index>(r)];
  }

  auto add = [&rep](std::string name, bool ok, std::string detail, bool asserted = true) {
    rep.checks.push_back({std::move(name), ok, std::move(detail), asserted});
  };

  for (Regime r : {Regime::Small, Regime::Dilation}) {
    std::string detail;
    for (const RegimeSummary& s : rep.regimes)
      if (regime_for_index(s.j, m) == r && !s.mismatch.empty()) detail += "j=" + std::to_string(s.j) + ": " + s.mismatch + "; ";
    add(std::string("regime ") + to_string(r) + " inequality", detail.empty(), detail.empty() ? "holds at every rho" : detail);
  }

  std::vector<const RunRecord*> small;
  for (const RunRecord& r : runs)
    if (r.rho <= 0.1) small.push_back(&r);
  if (small.empty()) small.push_back(&last);
  std::string formula, bounds, band;
  for (const RunRecord* r : small) {
    const int M = r->morse.index;
    if (M != rep.predicted_morse) formula += "rho=" + fmt(r->rho) + ": M=" + std::to_string(M) + "; ";
    if (M < m || M > 3 * m) bounds += "rho=" + fmt(r->rho) + ": M=" + std::to_string(M) + "; ";
    if (!r->morse.certified())
      band += "rho=" + fmt(r->rho) + ": " + std::to_string(r->morse.ambiguous.size()) + " eigenvalue(s) within " +
              fmt(r->morse.band) + " of 1; ";
  }
  if (!formula.empty()) {
    formula += "predicted " + std::to_string(rep.predicted_morse);
    const Eigen::VectorXd& ev = crit.hess_eigenvalues;
    const double cut = kDegeneracyBand * (ev.size() ? ev.cwiseAbs().maxCoeff() : 0.0);
    const int zero = static_cast<int>((ev.array().abs() <= cut).count());
    // A zero eigenvalue of Hess F leaves mu = 1 to higher order, so either side of 1 is possible.
    if (zero > 0)
      formula += "; Hess F has " + std::to_string(zero) + " zero eigenvalue(s), expected range [" +
                 std::to_string(rep.predicted_morse - zero) + ", " + std::to_string(rep.predicted_morse) + "]";
  }
  add("morse index equals 3m - M(Hess F)", formula.empty(),
      formula.empty() ? "M = " + std::to_string(rep.predicted_morse) : formula);
  add("morse index within [m, 3m]", bounds.empty(), bounds.empty() ? "holds" : bounds);
  // The guard band max(5 rho^2, ...) also covers the translation cluster whenever 3 pi |eta| < 5.
  add("morse count certified", band.empty(), band.empty() ? "guard band empty" : band, false);

  std::string sel;
  for (const RegimeSummary& s : rep.regimes) {
    const ProfileModel want = model_for(regime_for_index(s.j, m));
    if (s.best_model != want)
      sel += "j=" + std::to_string(s.j) + " prefers " + to_string(s.best_model) + " over " + to_string(want) + "; ";
  }
  add("profile model selection", sel.empty(), sel.empty() ? "each block prefers its own model" : sel);

  if (m >= 2) {
    double worst = 0.0;
    for (int a = 0; a < m; ++a)
      for (int b = a + 1; b < m; ++b) {
        Eigen::VectorXd ca(m), cb(m);
        for (int k = 0; k < m; ++k) {
          ca[k] = last.modes[a].fits[k][0].parameters[0];
          cb[k] = last.modes[b].fits[k][0].parameters[0];
        }
        const double d = ca.norm() * cb.norm();
        if (d > 0.0) worst = std::max(worst, std::abs(ca.dot(cb)) / d);
      }
    add("constant profiles orthogonal", worst <= 0.1, "largest normalised inner product " + fmt(worst));
  }
  return rep;
}

}  // namespace sinhlab

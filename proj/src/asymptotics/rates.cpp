#include "sinhlab/asymptotics.hpp"

#include "sinhlab/errors.hpp"

#include <cmath>
#include <sstream>

namespace sinhlab {

std::string to_string(Regime r) {
  switch (r) {
    case Regime::Small: return "small";
    case Regime::Translation: return "translation";
    case Regime::Dilation: return "dilation";
    case Regime::Unresolved: return "unresolved";
  }
  return "unknown";
}

Regime regime_for_index(int j, int m) {
  if (j < 1 || m < 1) return Regime::Unresolved;
  if (j <= m) return Regime::Small;
  if (j <= 3 * m) return Regime::Translation;
  if (j <= 4 * m) return Regime::Dilation;
  return Regime::Unresolved;
}

namespace {

/// Small parameter of the regime's expansion.
double small_parameter(Regime r, double rho) { return r == Regime::Translation ? rho * rho : -1.0 / std::log(rho); }

double rate_of(Regime r, double rho, double mu) {
  switch (r) {
    case Regime::Small: return mu * (-4.0 * std::log(rho));
    case Regime::Translation: return (1.0 - mu) / (rho * rho);
    case Regime::Dilation: return (mu - 1.0) * (-std::log(rho));
    case Regime::Unresolved: break;
  }
  throw Error(Errc::InvalidArgument, "rate needs a resolved regime");
}

}  // namespace

RateCheck rate_series(const std::vector<RateSample>& series, Regime regime) {
  if (regime == Regime::Unresolved) throw Error(Errc::InvalidArgument, "rate needs a resolved regime");
  if (series.size() < 3) throw Error(Errc::InsufficientData, "at least three rho values are required");
  for (size_t i = 0; i < series.size(); ++i) {
    if (!(series[i].rho > 0.0 && series[i].rho < 1.0) || !std::isfinite(series[i].mu))
      throw Error(Errc::InsufficientData, "samples need 0 < rho < 1 and finite mu");
    if (i > 0 && !(series[i].rho < series[i - 1].rho))
      throw Error(Errc::InsufficientData, "rho values must be strictly descending");
  }
  RateCheck c;
  c.regime = regime;
  std::vector<double> s;
  for (const RateSample& p : series) {
    c.rho.push_back(p.rho);
    c.rates.push_back(rate_of(regime, p.rho, p.mu));
    s.push_back(small_parameter(regime, p.rho));
  }
  const size_t n = s.size();
  // rate = limit + slope * s, fitted through the two smallest rho.
  c.extrapolated = (c.rates[n - 1] * s[n - 2] - c.rates[n - 2] * s[n - 1]) / (s[n - 2] - s[n - 1]);
  double first = 0.0;
  for (size_t i = 1; i < n; ++i) {
    const double slope = (c.rates[i] - c.rates[i - 1]) / (s[i] - s[i - 1]);
    if (i == 1) first = slope;
    else if (slope * first < 0.0) c.slope_consistent = false;
  }
  return c;
}

std::string regime_violation(const std::vector<RateSample>& series, Regime regime) {
  for (const RateSample& p : series) {
    std::ostringstream os;
    os.precision(6);
    if (regime == Regime::Small) {
      const double bound = -1.0 / (2.0 * std::log(p.rho));
      if (!(p.mu > 0.0 && p.mu < bound)) {
        os << "mu = " << p.mu << " outside (0, " << bound << ") at rho = " << p.rho;
        return os.str();
      }
    } else if (regime == Regime::Dilation && !(p.mu > 1.0)) {
      os << "mu = " << p.mu << " is not above 1 at rho = " << p.rho;
      return os.str();
    }
  }
  return {};
}

RateCheck regime_rate_check(const std::vector<RateSample>& series, Regime regime) {
  RateCheck c = rate_series(series, regime);
  const std::string v = regime_violation(series, regime);
  if (!v.empty()) throw Error(Errc::RegimeMismatch, to_string(regime) + " regime: " + v);
  return c;
}

}  // namespace sinhlab

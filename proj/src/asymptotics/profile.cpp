#include "sinhlab/asymptotics.hpp"

#include "sinhlab/errors.hpp"
#include "sinhlab/greens.hpp"

#include <Eigen/QR>

#include <cmath>
#include <numbers>

namespace sinhlab {

std::string to_string(ProfileModel m) {
  switch (m) {
    case ProfileModel::Constant: return "constant";
    case ProfileModel::Dipole: return "dipole";
    case ProfileModel::Radial: return "radial";
  }
  return "unknown";
}

namespace {

int basis_size(ProfileModel m) { return m == ProfileModel::Dipole ? 2 : 1; }

void basis_row(ProfileModel m, const Vec2& y, double* row) {
  const double s = y.squaredNorm();
  switch (m) {
    case ProfileModel::Constant: row[0] = 1.0; break;
    case ProfileModel::Dipole:
      row[0] = y.x() / (8.0 + s);
      row[1] = y.y() / (8.0 + s);
      break;
    case ProfileModel::Radial: row[0] = (8.0 - s) / (8.0 + s); break;
  }
}

/// Samples inside the window, already multiplied by the square root of the fit density.
struct WeightedSamples {
  std::vector<Vec2> points;
  Eigen::VectorXd sqrt_w;
  Eigen::VectorXd values;
};

WeightedSamples window_samples(const RescaledProfile& profile, const FitOptions& opts) {
  if (profile.points.size() != static_cast<size_t>(profile.values.size()))
    throw Error(Errc::InvalidArgument, "profile points and values differ in length");
  WeightedSamples ws;
  std::vector<double> w, v;
  for (size_t s = 0; s < profile.points.size(); ++s) {
    const Vec2& y = profile.points[s];
    if (y.norm() > opts.window) continue;
    ws.points.push_back(y);
    w.push_back(1.0 / (1.0 + y.squaredNorm() / 8.0));
    v.push_back(profile.values[static_cast<Eigen::Index>(s)]);
  }
  if (static_cast<int>(ws.points.size()) < opts.min_samples)
    throw Error(Errc::InsufficientSamples, std::to_string(ws.points.size()) + " samples inside the fit window, need " +
                                               std::to_string(opts.min_samples));
  ws.sqrt_w = Eigen::Map<Eigen::VectorXd>(w.data(), static_cast<Eigen::Index>(w.size()));
  ws.values = Eigen::Map<Eigen::VectorXd>(v.data(), static_cast<Eigen::Index>(v.size()));
  if (!ws.values.allFinite()) throw Error(Errc::InvalidArgument, "profile values are not finite");
  return ws;
}

ProfileFit fit_samples(const WeightedSamples& ws, ProfileModel model) {
  const int n = static_cast<int>(ws.points.size()), p = basis_size(model);
  Eigen::MatrixXd B(n, p);
  for (int s = 0; s < n; ++s) {
    double row[2];
    basis_row(model, ws.points[s], row);
    for (int c = 0; c < p; ++c) B(s, c) = ws.sqrt_w[s] * row[c];
  }
  const Eigen::VectorXd b = ws.sqrt_w.cwiseProduct(ws.values);
  ProfileFit fit;
  fit.model = model;
  fit.samples = n;
  fit.profile_norm = b.norm();
  fit.parameters = B.colPivHouseholderQr().solve(b);
  if (fit.profile_norm == 0.0) {
    fit.parameters.setZero();
    fit.relative_residual = 0.0;
    return fit;
  }
  fit.relative_residual = std::min(1.0, (B * fit.parameters - b).norm() / fit.profile_norm);
  return fit;
}

}  // namespace

ProfileFit fit_profile(const RescaledProfile& profile, ProfileModel model, const FitOptions& opts) {
  return fit_samples(window_samples(profile, opts), model);
}

std::array<ProfileFit, 3> fit_all_models(const RescaledProfile& profile, const FitOptions& opts) {
  const WeightedSamples ws = window_samples(profile, opts);
  return {fit_samples(ws, ProfileModel::Constant), fit_samples(ws, ProfileModel::Dipole),
          fit_samples(ws, ProfileModel::Radial)};
}

double far_field_check(const GridField& v, double mu, double rho, const std::vector<ProfileFit>& fits,
                       const SignedConfig& config, const std::vector<double>& taus, Regime regime,
                       const ProbeOptions& probes) {
  constexpr double kPi = std::numbers::pi;
  const int m = config.size();
  ProfileModel want = ProfileModel::Constant;
  switch (regime) {
    case Regime::Small: want = ProfileModel::Constant; break;
    case Regime::Translation: want = ProfileModel::Dipole; break;
    case Regime::Dilation: want = ProfileModel::Radial; break;
    case Regime::Unresolved: throw Error(Errc::InvalidArgument, "far field needs a resolved regime");
  }
  if (static_cast<int>(fits.size()) != m) throw Error(Errc::MissingFits, "one fit per peak is required");
  for (const ProfileFit& f : fits)
    if (f.model != want || f.parameters.size() != basis_size(want))
      throw Error(Errc::MissingFits, "fit model does not match the regime (" + to_string(want) + " expected)");
  if (static_cast<int>(taus.size()) != m) throw Error(Errc::InvalidArgument, "one tau per peak is required");
  if (!v.mesh) throw Error(Errc::InvalidArgument, "field has no mesh");

  const GreenKernel kernel(config.domain);
  const Mesh& mesh = *v.mesh;
  double worst = 0.0, scale = 0.0;
  int count = 0;
  for (int n = 0; n < mesh.size(); ++n) {
    const Vec2& x = mesh.node(n);
    if (config.domain.boundary_distance(x) < probes.boundary_gap) continue;
    bool near = false;
    for (const Vec2& xi : config.points) near = near || (x - xi).norm() < probes.peak_gap;
    if (near) continue;
    double pred = 0.0, meas = 0.0;
    for (int k = 0; k < m; ++k) {
      const Eigen::VectorXd& c = fits[k].parameters;
      if (regime == Regime::Translation) {
        const Vec2 gy = kernel.green_derivatives(x, config.points[k]).grad_y;
        pred += 2.0 * kPi * taus[k] / std::sqrt(8.0) * (c[0] * gy.x() + c[1] * gy.y());
      } else {
        const double G = kernel.green(x, config.points[k]);
        pred += (regime == Regime::Small ? 8.0 * kPi : 2.0 * kPi) * c[0] * G;
      }
    }
    switch (regime) {
      case Regime::Small: meas = v.values[n] / mu; break;
      case Regime::Translation: meas = v.values[n] / rho; break;
      default: meas = std::log(rho) * v.values[n]; break;
    }
    worst = std::max(worst, std::abs(meas - pred));
    scale = std::max(scale, std::abs(pred));
    ++count;
  }
  if (count == 0) throw Error(Errc::InvalidArgument, "probe set is empty");
  if (!(scale > 0.0)) throw Error(Errc::ZeroField, "limit field vanishes on the probe set");
  return worst / scale;
}

}  // namespace sinhlab

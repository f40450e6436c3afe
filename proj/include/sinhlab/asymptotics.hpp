#pragma once

#include "sinhlab/ansatz.hpp"
#include "sinhlab/hamiltonian.hpp"
#include "sinhlab/laplacian.hpp"
#include "sinhlab/pde.hpp"
#include "sinhlab/spectrum.hpp"

#include <array>
#include <functional>
#include <limits>
#include <string>
#include <vector>

namespace sinhlab {

enum class ProfileModel { Constant, Dipole, Radial };
std::string to_string(ProfileModel m);

/// Basis {1}, {y1/(8+|y|^2), y2/(8+|y|^2)} or {(8-|y|^2)/(8+|y|^2)}.
struct ProfileFit {
  ProfileModel model = ProfileModel::Constant;
  /// (C), (s1, s2) or (t).
  Eigen::VectorXd parameters;
  /// |profile - fit| / |profile| in L2 with density (1 + |y|^2/8)^-2 over the fit window.
  double relative_residual = 1.0;
  /// Weighted L2 norm of the profile itself.
  double profile_norm = 0.0;
  int samples = 0;
};

struct FitOptions {
  double window = 20.0;
  int min_samples = 500;
};

ProfileFit fit_profile(const RescaledProfile& profile, ProfileModel model, const FitOptions& opts = {});
/// All three models on the same samples, in enum order.
std::array<ProfileFit, 3> fit_all_models(const RescaledProfile& profile, const FitOptions& opts = {});

/// 1: mu -> 0 like -1/(4 log rho); 2: mu = 1 - 3 pi rho^2 eta (1 + o(1)); 3: mu > 1, (mu - 1) |log rho| bounded.
enum class Regime { Unresolved = 0, Small = 1, Translation = 2, Dilation = 3 };
std::string to_string(Regime r);

/// Regime assigned by index block: j <= m, m < j <= 3m, 3m < j <= 4m (1-based).
Regime regime_for_index(int j, int m);

struct RateSample {
  double rho = 0.0;
  double mu = 0.0;
};

struct RateCheck {
  Regime regime = Regime::Unresolved;
  /// Descending rho.
  std::vector<double> rho;
  /// mu (-4 log rho), (1 - mu) / rho^2 or (mu - 1)(-log rho) per sample.
  std::vector<double> rates;
  /// Two-point Richardson limit from the two smallest rho.
  double extrapolated = 0.0;
  /// Richardson limits of consecutive pairs agree in the sign of their slope.
  bool slope_consistent = true;
};

/// Throws InsufficientData (fewer than 3 samples or rho not descending) and RegimeMismatch
/// when regime 1 violates 0 < mu < -1/(2 log rho) or regime 3 violates mu > 1.
RateCheck regime_rate_check(const std::vector<RateSample>& series, Regime regime);
/// Same rates and extrapolation without asserting the regime inequality.
RateCheck rate_series(const std::vector<RateSample>& series, Regime regime);
/// Empty when every sample satisfies the regime inequality, otherwise a description of the first violation.
std::string regime_violation(const std::vector<RateSample>& series, Regime regime);

/// Probe nodes: at least `peak_gap` from every limit point and `boundary_gap` from the boundary.
struct ProbeOptions {
  double peak_gap = 0.3;
  double boundary_gap = 0.1;
};

/// Largest deviation of the scaled eigenfunction from its limit on the probe set, relative to
/// the largest limit value:
///   regime 1: v/mu vs 8 pi sum C_k G(x, xi_k)
///   regime 2: v/rho vs 2 pi sum (tau_k/sqrt 8)(s_1k d_y1 G + s_2k d_y2 G)(x, xi_k)
///   regime 3: (log rho) v vs 2 pi sum t_k G(x, xi_k)
/// `fits` holds one fit of the regime's model per peak. Throws MissingFits.
double far_field_check(const GridField& v, double mu, double rho, const std::vector<ProfileFit>& fits,
                       const SignedConfig& config, const std::vector<double>& taus, Regime regime,
                       const ProbeOptions& probes = {});

enum class Truncation { Natural, Dirichlet };

struct LimitSpectrum {
  Eigen::VectorXd eigenvalues;
  int nodes = 0;
  /// Indices of eigenvalues inside the near-one window.
  std::vector<int> near_one;
  /// Cosine of the largest principal angle between the near-one eigenspace and
  /// span{y1/(8+|y|^2), y2/(8+|y|^2), (8-|y|^2)/(8+|y|^2)} in the weighted inner product.
  double overlap = 0.0;
};

struct LimitOptions {
  Truncation truncation = Truncation::Natural;
  /// Spectral shift; the natural truncation has a zero eigenvalue.
  double sigma = -0.3;
  double window_lo = 0.97;
  double window_hi = 1.03;
};

/// -Laplace v = mu (1 + |y|^2/8)^-2 v on B_R(0). Throws InvalidArgument for R < 50.
LimitSpectrum limit_eigenproblem(double radius, double h, int count, const LimitOptions& opts = {});

/// Value, gradient and Laplacian of a field at a point.
struct FieldJet {
  double value = 0.0;
  Vec2 grad = Vec2::Zero();
  double laplacian = 0.0;
};
using FieldFunction = std::function<FieldJet(const Vec2&)>;

struct PohozaevResult {
  /// int_B [(x-xi).grad f] Lap g + [(x-xi).grad g] Lap f
  double lhs = 0.0;
  /// R int_dB 2 d_nu f d_nu g - grad f . grad g
  double rhs = 0.0;
  /// |lhs - rhs| / max(1, |lhs|)
  double gap = 0.0;
};

PohozaevResult pohozaev_check(const FieldFunction& f, const FieldFunction& g, const Vec2& xi, double R);
/// Grid fields: centred-difference gradients and the mesh Laplacian, interpolated bilinearly.
PohozaevResult pohozaev_check(const GridField& f, const GridField& g, const Vec2& xi, double R);

enum class BoundaryFlux { Gradient, Normal };

/// R int_{dB_R(xi_k)} grad G(x, xi_i) . grad G(x, xi_j) dsigma (or the product of normal
/// derivatives). The R prefactor is dropped when k differs from both i and j.
/// Throws BallNotAdmissible when the ball touches the boundary or another peak.
double green_boundary_integral_check(const SignedConfig& config, int k, int i, int j, double R,
                                     BoundaryFlux flux = BoundaryFlux::Gradient);

/// int_{dB_R(z1)} d_nu d_xi G(x,z2) d_yj G(x,z3) - d_xi G(x,z2) d_nu d_yj G(x,z3) dsigma.
double hessian_boundary_integral_check(const Domain& domain, const Vec2& z1, const Vec2& z2, const Vec2& z3,
                                       double R, int i, int j);
/// Small-R limit of the integral above: 0, d^2G/dx_i dy_j (z1, z3), d^2G/dx_i dx_j (z1, z2), or
/// -1/2 d^2R/dx_i dx_j (z1) when all three points coincide.
double hessian_boundary_integral_limit(const Domain& domain, const Vec2& z1, const Vec2& z2, const Vec2& z3,
                                       int i, int j);

/// One eigenpair of one run, with its profile fits around every peak.
struct ModeRecord {
  int j = 0;
  double mu = 0.0;
  Regime regime = Regime::Unresolved;
  /// fits[k] holds all three models around peak k.
  std::vector<std::array<ProfileFit, 3>> fits;
  double far_field = std::numeric_limits<double>::quiet_NaN();
};

struct RunRecord {
  double rho = 0.0;
  int newton_iterations = 0;
  double newton_residual = 0.0;
  double correction_h1 = 0.0;
  std::vector<Vec2> peaks;
  MorseCount morse;
  std::vector<ModeRecord> modes;
};

struct RegimeSummary {
  int j = 0;
  Regime regime = Regime::Unresolved;
  std::vector<double> rates;
  double extrapolated = std::numeric_limits<double>::quiet_NaN();
  /// 1, 3 pi eta_j or 3/2.
  double target = std::numeric_limits<double>::quiet_NaN();
  bool slope_consistent = false;
  /// Empty when the regime inequality holds, otherwise the violation.
  std::string mismatch;
  /// Model with the smallest peak-aggregated residual at the smallest rho.
  ProfileModel best_model = ProfileModel::Constant;
  std::array<double, 3> residuals{1.0, 1.0, 1.0};
};

struct ReportCheck {
  std::string name;
  bool passed = false;
  std::string detail;
  /// Informational checks are reported but do not decide all_passed().
  bool asserted = true;
};

struct AsymptoticReport {
  int m = 0;
  std::vector<double> rho_schedule;
  std::vector<RunRecord> runs;
  std::vector<RegimeSummary> regimes;
  /// Scaled Hessian eigenvalues, ascending.
  Eigen::VectorXd etas;
  /// 1 - 3 pi rho^2 eta per rho (rows) and eta (columns).
  Eigen::MatrixXd mu_pred;
  int hessian_negative = 0;
  /// 3m - M(Hess F).
  int predicted_morse = 0;
  std::vector<ReportCheck> checks;
  bool all_passed() const;
};

/// Assigns regimes by index block, validates each block's law, and checks the Morse index
/// against 3m - M(Hess F) and [m, 3m]. Throws IncompleteRuns when a run lacks modes.
AsymptoticReport build_report(const SignedConfig& config, const CriticalPointResult& crit,
                              const std::vector<RunRecord>& runs);

}  // namespace sinhlab

#include "sinhlab/driver.hpp"
#include "sinhlab/errors.hpp"
#include "sinhlab/greens.hpp"
#include "support/fd.hpp"

#include <spdlog/spdlog.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <numbers>
#include <sstream>
#include <string>

using namespace sinhlab;
using sinhlab::testing::fd_gradient;
using sinhlab::testing::fd_jacobian;
using sinhlab::testing::rel_err;
using sinhlab::testing::stack;

namespace {

constexpr double kPi = std::numbers::pi;

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4g", v);
  return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

ExperimentConfig disc_m1(double h) {
  ExperimentConfig c;
  c.seeds = {Vec2(0.05, -0.03)};
  c.signs = {1};
  c.rho_schedule = {0.2, 0.1, 0.05};
  c.h = h;
  c.eigen_count = 6;
  c.newton_tol = 1e-9;
  c.write_fields = false;
  return c;
}

/// Shared m = 1 runs; the fine one serves criteria 3 to 8.
struct Runs {
  PipelineResult coarse, fine;
  double fine_seconds = 0.0;
};

Runs& runs() {
  static Runs r = [] {
    Runs out;
    const auto tmp = std::filesystem::temp_directory_path() / "sinhlab_acceptance";
    out.coarse = run_pipeline(disc_m1(1.0 / 128), tmp / "h128");
    const auto t0 = std::chrono::steady_clock::now();
    out.fine = run_pipeline(disc_m1(1.0 / 256), tmp / "h256");
    out.fine_seconds = seconds_since(t0);
    return out;
  }();
  return r;
}

Outcome limit_spectrum() {
  const auto t0 = std::chrono::steady_clock::now();
  const LimitSpectrum s = limit_eigenproblem(60.0, 0.5, 6);
  const double secs = seconds_since(t0);
  const int next = s.near_one.empty() ? 0 : s.near_one.back() + 1;
  const double after = next < s.eigenvalues.size() ? s.eigenvalues[next] : 0.0;
  const bool ok = s.nodes >= 20000 && s.near_one.size() == 3 && after >= 1.2 && s.overlap >= 0.99 && secs <= 120;
  return {ok, "nodes " + std::to_string(s.nodes) + ", " + std::to_string(s.near_one.size()) +
                  " eigenvalues near 1, next " + fmt(after) + ", overlap " + fmt(s.overlap) + ", " + fmt(secs) + " s"};
}

Outcome disc_pipeline() {
  const AsymptoticReport& r = runs().coarse.report;
  bool ok = true;
  std::string d;
  for (const RunRecord& run : r.runs) {
    const double mu = run.modes[0].mu, cap = -1.0 / (2.0 * std::log(run.rho));
    ok = ok && run.newton_residual <= 1e-8 && mu > 0.0 && mu < cap;
    d += "rho " + fmt(run.rho) + ": residual " + fmt(run.newton_residual) + ", mu1 " + fmt(mu) + " < " + fmt(cap) + "; ";
  }
  const double rate = r.runs.back().modes[0].mu * (-4.0 * std::log(r.runs.back().rho));
  ok = ok && rate >= 0.7 && rate <= 1.3;
  return {ok, d + "mu1 (-4 log rho) = " + fmt(rate)};
}

Outcome translation_constant() {
  const AsymptoticReport& r = runs().fine.report;
  const double target = 3.0 / 16.0;
  bool ok = runs().fine_seconds <= 600;
  std::string d;
  for (int j : {2, 3}) {
    const double x = r.regimes[j - 1].extrapolated;
    ok = ok && std::abs(x - target) <= 0.15 * target;
    d += "j=" + std::to_string(j) + " extrapolated (1 - mu)/rho^2 = " + fmt(x) + "; ";
  }
  return {ok, d + "target " + fmt(target) + ", computed 3 pi eta = " + fmt(r.regimes[1].target) + ", " +
                  fmt(runs().fine_seconds) + " s"};
}

Outcome dilation_mode() {
  const AsymptoticReport& r = runs().fine.report;
  bool ok = true;
  std::string d;
  for (const RunRecord& run : r.runs) {
    ok = ok && run.modes[3].mu > 1.0;
    d += "mu4(" + fmt(run.rho) + ") = " + fmt(run.modes[3].mu) + "; ";
  }
  const RunRecord& last = r.runs.back();
  const double rate = (last.modes[3].mu - 1.0) * (-std::log(last.rho));
  ok = ok && std::abs(rate - 1.5) <= 0.25 * 1.5;
  return {ok, d + "(mu4 - 1)(-log rho) = " + fmt(rate) + " vs 1.5"};
}

Outcome morse_m1() {
  const AsymptoticReport& r = runs().fine.report;
  const int m = 1;
  const int formula = 3 * m - r.hessian_negative;
  bool ok = true;
  std::string d;
  for (const RunRecord& run : r.runs) {
    if (run.rho > 0.1) continue;
    const int M = run.morse.index;
    ok = ok && M == 3 && M == formula && M >= m && M <= 3 * m;
    d += "rho " + fmt(run.rho) + ": M = " + std::to_string(M) + "; ";
  }
  return {ok, d + "expected 3, 3m - M(Hess F) = " + std::to_string(formula) + " with M(Hess F) = " +
                  std::to_string(r.hessian_negative)};
}

Outcome dipole_morse() {
  ExperimentConfig c;
  c.seeds = {Vec2(0.49, 0.0), Vec2(-0.49, 0.0)};
  c.signs = {1, -1};
  c.rho_schedule = {0.1, 0.07, 0.05};
  c.h = 1.0 / 512;
  c.eigen_count = 10;
  c.validate();
  const CriticalPointResult crit = find_critical_point(c.signed_config(), c.critical_tol);
  const Vec2 p = crit.config.points[0], q = crit.config.points[1];
  const double cross = std::abs(p.x() * q.y() - p.y() * q.x());
  const bool diameter = cross <= 1e-8 && (p + q).norm() <= 1e-8;

  const MeshPtr mesh = build_mesh(c.domain, c.h);
  const auto steps = continuation_solve(crit.config, c.rho_schedule, mesh, c.newton_tol);
  const SparseMatrix A = assemble_laplacian(*mesh);
  SpectrumResult s = eigenpairs(A, assemble_weight(steps.back().u, steps.back().rho), c.eigen_count, mesh);
  s.rho = steps.back().rho;
  const MorseCount mc = morse_index(s);
  const int expected = 6 - crit.negative_count;
  const bool ok = diameter && mc.index == expected && mc.certified();
  std::string mus;
  for (int j = 0; j < 6; ++j) mus += fmt(s.eigenvalues[j]) + (j < 5 ? "," : "");
  return {ok, "xi = (" + fmt(p.x()) + ", " + fmt(p.y()) + "), on diameter " + (diameter ? "yes" : "no") +
                  "; M = " + std::to_string(mc.index) + " vs 6 - " + std::to_string(crit.negative_count) + " = " +
                  std::to_string(expected) + "; " + std::to_string(mc.ambiguous.size()) + " eigenvalue(s) within " +
                  fmt(mc.band) + " of 1; mu1..6 = " + mus};
}

Outcome profile_fits() {
  const RunRecord& last = runs().fine.report.runs.back();
  bool ok = true;
  std::string d;
  const int own[4] = {0, 1, 1, 2};
  for (int j = 1; j <= 4; ++j) {
    const auto& fits = last.modes[j - 1].fits[0];
    const double r = fits[own[j - 1]].relative_residual;
    bool best = true;
    for (int k = 0; k < 3; ++k)
      if (k != own[j - 1]) best = best && r < fits[k].relative_residual;
    ok = ok && r <= 0.15 && best;
    d += "j=" + std::to_string(j) + " " + to_string(fits[own[j - 1]].model) + " " + fmt(r) + (best ? "" : " (not best)") + "; ";
  }
  return {ok, d};
}

Outcome far_field() {
  const AsymptoticReport& r = runs().fine.report;
  bool ok = true;
  std::string d;
  for (int j = 1; j <= 4; ++j) {
    d += "j=" + std::to_string(j) + ":";
    for (size_t i = 0; i < r.runs.size(); ++i) {
      const double e = r.runs[i].modes[j - 1].far_field;
      d += " " + fmt(e);
      ok = ok && std::isfinite(e);
      if (i > 0) ok = ok && e < r.runs[i - 1].modes[j - 1].far_field;
    }
    ok = ok && r.runs.back().modes[j - 1].far_field <= 0.2;
    d += "; ";
  }
  return {ok, d};
}

Outcome identities() {
  const FieldFunction quad = [](const Vec2& x) { return FieldJet{x.squaredNorm(), 2.0 * x, 4.0}; };
  const FieldFunction wave = [](const Vec2& x) {
    const double s = std::sin(x.x()), c = std::cos(x.x()), e = std::exp(0.5 * x.y());
    return FieldJet{s * e, Vec2(c * e, 0.5 * s * e), -0.75 * s * e};
  };
  const FieldFunction harmonic = [](const Vec2& x) {
    return FieldJet{x.x() * x.x() - x.y() * x.y(), Vec2(2 * x.x(), -2 * x.y()), 0.0};
  };
  double gap = 0.0;
  const double R = 0.7;
  const PohozaevResult q = pohozaev_check(quad, quad, Vec2::Zero(), R);
  const double want = 8 * kPi * std::pow(R, 4);
  gap = std::max({q.gap, std::abs(q.lhs - want) / want, std::abs(q.rhs - want) / want});
  gap = std::max(gap, pohozaev_check(wave, quad, Vec2(0.1, -0.2), 0.5).gap);
  gap = std::max(gap, pohozaev_check(harmonic, wave, Vec2(-0.3, 0.2), 0.4).gap);

  SignedConfig one;
  one.points = {Vec2::Zero()};
  one.signs = {1};
  const double g = green_boundary_integral_check(one, 0, 0, 0, 0.05);
  const double gt = 1.0 / (2 * kPi);

  const Domain disc = Domain::unit_disc();
  double herr = 0.0;
  for (const Vec2& z : {Vec2(0, 0), Vec2(0.3, -0.2)}) {
    const Mat2 half = -0.5 * robin_eval(disc, z).hess;
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j)
        herr = std::max(herr, std::abs(hessian_boundary_integral_check(disc, z, z, z, 0.05, i, j) - half(i, j)) /
                                  half.cwiseAbs().maxCoeff());
  }
  const bool ok = gap <= 1e-6 && std::abs(g - gt) <= 0.1 * gt && herr <= 0.02;
  return {ok, "Pohozaev gap " + fmt(gap) + " (|x|^2 sides " + fmt(q.lhs) + ", " + fmt(q.rhs) + " vs " + fmt(want) +
                  "); Green flux " + fmt(g) + " vs " + fmt(gt) + "; Hessian case relative error " + fmt(herr)};
}

Outcome kernel_suite() {
  double worst = 0.0;
  const double step = 1e-5;
  auto track = [&](double e) { worst = std::max(worst, e); };
  for (const Domain& d : {Domain::unit_disc(), Domain::disc(1.5, Vec2(0.3, 0.2)), Domain::rectangle(1.4, 1.0)}) {
    const GreenKernel k(d);
    const Vec2 base = d.is_disc() ? d.disc_shape().center : Vec2(0.7, 0.5);
    const double s = d.is_disc() ? d.disc_shape().radius : 0.4;
    const Vec2 x = base + s * Vec2(0.3, 0.1), y = base + s * Vec2(-0.2, 0.35);
    const Eigen::VectorXd z = stack(x, y);
    using Eval = KernelEval (GreenKernel::*)(const Vec2&, const Vec2&) const;
    using Val = double (GreenKernel::*)(const Vec2&, const Vec2&) const;
    for (auto [val, der] : {std::pair<Val, Eval>{&GreenKernel::green, &GreenKernel::green_derivatives},
                            std::pair<Val, Eval>{&GreenKernel::regular, &GreenKernel::regular_derivatives}}) {
      const KernelEval e = (k.*der)(x, y);
      auto f = [&](const Eigen::VectorXd& w) { return (k.*val)(w.head<2>(), w.tail<2>()); };
      auto g = [&](const Eigen::VectorXd& w) {
        const KernelEval a = (k.*der)(w.head<2>(), w.tail<2>());
        return stack(a.grad_x, a.grad_y);
      };
      Eigen::Matrix4d H;
      H << e.hess_xx, e.hess_xy, e.hess_xy.transpose(), e.hess_yy;
      track(rel_err(stack(e.grad_x, e.grad_y), fd_gradient(f, z, step)));
      track(rel_err(H, fd_jacobian(g, z, step)));
    }
    const RobinEval r = k.robin(x);
    track(rel_err(r.grad, fd_gradient([&](const Eigen::VectorXd& w) { return k.robin(w).value; }, x, step)));
    track(rel_err(r.hess, fd_jacobian([&](const Eigen::VectorXd& w) { return Eigen::VectorXd(k.robin(w).grad); }, x, step)));

    SignedConfig c;
    c.domain = d;
    c.points = {x, y};
    c.signs = {1, -1};
    const HamiltonianDerivatives hd = hamiltonian_derivatives(c);
    const Eigen::VectorXd zc = c.coordinates();
    track(rel_err(hd.gradient, fd_gradient([&](const Eigen::VectorXd& w) { return hamiltonian_value(c.with_coordinates(w)); }, zc, step)));
    track(rel_err(hd.hessian, fd_jacobian([&](const Eigen::VectorXd& w) {
                    return hamiltonian_derivatives(c.with_coordinates(w)).gradient;
                  }, zc, step)));
  }

  const Domain disc = Domain::unit_disc();
  double green_err = 0.0;
  for (const auto& [x, y] : {std::pair<Vec2, Vec2>{Vec2(0, 0), Vec2(0.5, 0)}, {Vec2(0.2, 0.3), Vec2(-0.4, 0.1)}}) {
    const double exact = green_value(disc, x, y);
    green_err = std::max(green_err, std::abs(discrete_green_crosscheck(disc, 1.0 / 128, x, y) - exact) / exact);
  }
  const MeshPtr mesh = build_mesh(disc, 1.0 / 128);
  const double lambda = eigenpairs(assemble_laplacian(*mesh), Eigen::VectorXd::Ones(mesh->size()), 1, mesh).eigenvalues[0];
  const double j01 = 2.404825557695773 * 2.404825557695773;
  const double lerr = std::abs(lambda - j01) / j01;
  const bool ok = worst <= 1e-5 && green_err <= 1e-3 && lerr <= 0.005;
  return {ok, "derivative error " + fmt(worst) + "; discrete Green error " + fmt(green_err) + "; lambda1 " + fmt(lambda) +
                  " (error " + fmt(lerr) + ")"};
}

}  // namespace

int main() {
  spdlog::set_level(spdlog::level::warn);
  const std::pair<const char*, std::function<Outcome()>> criteria[] = {
      {"limit problem spectrum", limit_spectrum},
      {"m=1 disc pipeline, regime 1", disc_pipeline},
      {"regime 2 constant", translation_constant},
      {"regime 3 dilation mode", dilation_mode},
      {"Morse index m=1", morse_m1},
      {"m=2 dipole Morse index", dipole_morse},
      {"profile fits", profile_fits},
      {"far-field laws", far_field},
      {"identity checkers", identities},
      {"kernel and derivative suite", kernel_suite},
  };
  int failed = 0, n = 0;
  for (const auto& [name, check] : criteria) {
    ++n;
    Outcome o;
    try {
      o = check();
    } catch (const std::exception& e) {
      o = {false, std::string("error: ") + e.what()};
    }
    failed += !o.pass;
    std::printf("%s %d %s: %s\n", o.pass ? "PASS" : "FAIL", n, name, o.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d of %d criteria passed\n", n - failed, n);
  return failed == 0 ? 0 : 1;
}

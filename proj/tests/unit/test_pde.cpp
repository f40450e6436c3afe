#include <doctest.h>

#include "sinhlab/ansatz.hpp"
#include "sinhlab/errors.hpp"
#include "sinhlab/laplacian.hpp"
#include "sinhlab/pde.hpp"
#include "sinhlab/spectrum.hpp"

#include <cmath>
#include <numbers>
#include <random>
#include <vector>

using namespace sinhlab;

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kJ0 = 2.404825557695773;

SignedConfig centred() {
  SignedConfig c;
  c.points = {Vec2(0, 0)};
  c.signs = {1};
  return c;
}

double lowest_eigenvalue(const MeshPtr& mesh) {
  const SparseMatrix A = assemble_laplacian(*mesh);
  return eigenpairs(A, Eigen::VectorXd::Ones(mesh->size()), 1, mesh).eigenvalues[0];
}

}  // namespace

TEST_SUITE("pde") {
  TEST_CASE("mesh construction") {
    try {
      build_mesh(Domain::unit_disc(), 0.5);
      FAIL("expected ResolutionInvalid");
    } catch (const Error& e) {
      CHECK(e.code() == Errc::ResolutionInvalid);
    }
    CHECK(build_mesh(Domain::rectangle(1, 1), 1.0 / 64)->size() == 63 * 63);
    CHECK(build_mesh(Domain::rectangle(2, 1), 1.0 / 16)->size() == 31 * 15);
    CHECK_THROWS_AS(build_mesh(Domain::rectangle(1, 1), 0.07), Error);

    // Lattice points inside a disc number pi/h^2 up to an O(1/h) boundary deviation.
    for (double h : {1.0 / 64, 1.0 / 128}) {
      const MeshPtr m = build_mesh(Domain::unit_disc(), h);
      CHECK(std::abs(m->size() - kPi / (h * h)) <= 2.0 / h);
      for (int k = 0; k < m->size(); ++k) {
        REQUIRE(m->node(k).norm() < 1.0);
        for (int d = 0; d < 4; ++d) {
          CHECK(m->arm(k, d) > 0.0);
          CHECK(m->arm(k, d) <= 1.0 + 1e-3);
        }
      }
    }
    const MeshPtr shifted = build_mesh(Domain::disc(0.5, Vec2(0.3, -0.2)), 1.0 / 32);
    CHECK(shifted->nearest(Vec2(0.3, -0.2)) >= 0);
    CHECK((shifted->node(shifted->nearest(Vec2(0.3, -0.2))) - Vec2(0.3, -0.2)).norm() <= 1e-14);
  }

  TEST_CASE("bilinear interpolation reproduces bilinear data") {
    const MeshPtr m = build_mesh(Domain::rectangle(1, 1), 1.0 / 16);
    Eigen::VectorXd f(m->size());
    for (int k = 0; k < m->size(); ++k) f[k] = 1 + 2 * m->node(k).x() - m->node(k).y() + 3 * m->node(k).x() * m->node(k).y();
    const Vec2 p(0.437, 0.291);
    CHECK(m->interpolate(f, p) == doctest::Approx(1 + 2 * p.x() - p.y() + 3 * p.x() * p.y()).epsilon(1e-13));
  }

  TEST_CASE("Laplacian consistency") {
    const MeshPtr m = build_mesh(Domain::unit_disc(), 1.0 / 32);
    Eigen::VectorXd q(m->size());
    for (int k = 0; k < m->size(); ++k) q[k] = 1 - m->node(k).squaredNorm();
    // Shortley-Weller is exact on quadratics with homogeneous data on the circle.
    const Eigen::VectorXd sw = assemble_laplacian(*m, BoundaryScheme::ShortleyWeller) * q;
    CHECK((sw.array() - 4.0).abs().maxCoeff() <= 1e-8);
    const Eigen::VectorXd cc = assemble_laplacian(*m) * q;
    for (int k = 0; k < m->size(); ++k)
      if (!m->near_boundary(k)) CHECK(cc[k] == doctest::Approx(4.0).epsilon(1e-9));
    for (BoundaryScheme s : {BoundaryScheme::CutCell, BoundaryScheme::ShortleyWeller, BoundaryScheme::Natural})
      CHECK((apply_laplacian(*m, q, s) - assemble_laplacian(*m, s) * q).norm() <= 1e-9);
  }

  TEST_CASE("Laplacian symmetry") {
    const MeshPtr m = build_mesh(Domain::unit_disc(), 1.0 / 48);
    const SparseMatrix A = assemble_laplacian(*m);
    std::mt19937 gen(7);
    std::normal_distribution<double> nd;
    Eigen::VectorXd u(m->size()), w(m->size());
    for (int k = 0; k < m->size(); ++k) {
      u[k] = nd(gen);
      w[k] = nd(gen);
    }
    const double a = u.dot(A * w), b = w.dot(A * u);
    CHECK(std::abs(a - b) <= 1e-12 * std::abs(a));
    CHECK((SparseMatrix(A.transpose()) - A).norm() == 0.0);
  }

  TEST_CASE("lowest Dirichlet eigenvalues") {
    CHECK(std::cyl_bessel_j(0.0, kJ0) == doctest::Approx(0.0).epsilon(1e-14));
    const double l64 = lowest_eigenvalue(build_mesh(Domain::unit_disc(), 1.0 / 64));
    CHECK(std::abs(l64 - kJ0 * kJ0) / (kJ0 * kJ0) <= 5e-3);
    const double l128 = lowest_eigenvalue(build_mesh(Domain::unit_disc(), 1.0 / 128));
    CHECK(std::abs(l128 - kJ0 * kJ0) / (kJ0 * kJ0) <= 1e-4);
    const double sq = lowest_eigenvalue(build_mesh(Domain::rectangle(1, 1), 1.0 / 64));
    CHECK(std::abs(sq - 2 * kPi * kPi) / (2 * kPi * kPi) <= 5e-3);
  }

  TEST_CASE("Newton solve of the centred peak") {
    const MeshPtr mesh = build_mesh(Domain::unit_disc(), 1.0 / 128);
    const SignedConfig c = centred();
    const double rho = 0.1;
    const GridField seed = approximate_solution(c, rho, mesh);
    const SolveResult r = solve_sinh_poisson(seed, rho, 1e-9);
    CHECK(r.report.converged);
    CHECK(r.report.iterations <= 15);
    CHECK(r.report.final_residual <= 1e-9);
    CHECK(residual_norm(r.u, rho) <= 1e-9);
    CHECK(residual_norm(seed, rho) > 1e-3);

    SUBCASE("odd symmetry") {
      GridField neg = seed;
      neg.values = -seed.values;
      const SolveResult rn = solve_sinh_poisson(neg, rho, 1e-9);
      CHECK((rn.u.values + r.u.values).cwiseAbs().maxCoeff() <= 1e-10);
    }
  }

  TEST_CASE("trivial branch and failure modes") {
    const MeshPtr mesh = build_mesh(Domain::unit_disc(), 1.0 / 32);
    const SolveResult z = solve_sinh_poisson(GridField::zeros(mesh), 0.1, 1e-12);
    CHECK(z.report.iterations == 0);
    CHECK(z.u.values.norm() == 0.0);
    CHECK(residual_norm(GridField::zeros(mesh), 0.1) == 0.0);

    const GridField bubble = approximate_solution(centred(), 0.2, mesh);
    try {
      solve_sinh_poisson(bubble, 10.0, 1e-9);
      FAIL("expected divergence");
    } catch (const Error& e) {
      CHECK((e.code() == Errc::NewtonDiverged || e.code() == Errc::ExponentOverflow));
    }
  }

  TEST_CASE("continuation along a rho schedule") {
    const MeshPtr mesh = build_mesh(Domain::unit_disc(), 1.0 / 128);
    const SignedConfig c = centred();
    CHECK(continuation_solve(c, {}, mesh, 1e-9).empty());
    CHECK_THROWS_AS(continuation_solve(c, {0.1, 0.2}, mesh, 1e-9), Error);
    CHECK_THROWS_AS(continuation_solve(c, {0.1, 0.1}, mesh, 1e-9), Error);

    const auto steps = continuation_solve(c, {0.2, 0.1, 0.05}, mesh, 1e-9);
    REQUIRE(steps.size() == 3);
    double prev_ansatz = 1e300;
    std::vector<double> far_err;
    for (const auto& s : steps) {
      CHECK(s.report.converged);
      CHECK(residual_norm(s.u, s.rho) <= 1e-9);
      CHECK(s.report.peak_locations[0].norm() <= 1e-12);
      double far = 0;
      for (int k = 0; k < mesh->size(); ++k) {
        const Vec2& x = mesh->node(k);
        if (x.norm() < 0.4) continue;
        far = std::max(far, std::abs(s.u.values[k] - far_field_limit(c, x)));
      }
      far_err.push_back(far);
      CHECK(far < 0.15);
      const double ra = residual_norm(approximate_solution(c, s.rho, mesh), s.rho);
      CHECK(ra > 0.0);
      CHECK(ra < prev_ansatz);
      prev_ansatz = ra;
    }
    // Strict decay of the far-field error holds while the mesh resolves the bubble (tau rho >~ 4h).
    CHECK(far_err[1] < far_err[0]);
    CHECK(steps[1].report.correction_h1 < 0.5);
    CHECK(steps[1].report.iterations <= 8);
  }

  TEST_CASE("peak location with sub-cell refinement") {
    const MeshPtr mesh = build_mesh(Domain::unit_disc(), 1.0 / 64);
    SignedConfig c;
    c.points = {Vec2(0.2031, -0.1107)};
    c.signs = {-1};
    Eigen::VectorXd u(mesh->size());
    for (int k = 0; k < mesh->size(); ++k) u[k] = (mesh->node(k) - c.points[0]).squaredNorm() - 3.0;
    const auto p = locate_peaks(GridField(mesh, u), c);
    CHECK((p[0] - c.points[0]).norm() <= 1e-12);
  }
}

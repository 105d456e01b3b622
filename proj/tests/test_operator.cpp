#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "error.hpp"
#include "problem.hpp"
#include "random_fields.hpp"
#include "test_support.hpp"

using namespace degwave;

namespace {

Problem problem_for(double K, std::size_t n, double p, double h = 0.0, double c = 0.0) {
  return Problem::build(CoefficientProfile::power_law(K, h, c), n, p);
}

/// Gaussian elimination with partial pivoting on a dense copy.
std::vector<double> dense_solve(std::vector<std::vector<double>> A, std::vector<double> b) {
  const std::size_t n = b.size();
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t piv = k;
    for (std::size_t i = k + 1; i < n; ++i)
      if (std::abs(A[i][k]) > std::abs(A[piv][k])) piv = i;
    std::swap(A[k], A[piv]);
    std::swap(b[k], b[piv]);
    for (std::size_t i = k + 1; i < n; ++i) {
      const double f = A[i][k] / A[k][k];
      for (std::size_t j = k; j < n; ++j) A[i][j] -= f * A[k][j];
      b[i] -= f * b[k];
    }
  }
  std::vector<double> x(n);
  for (std::size_t k = n; k-- > 0;) {
    double s = b[k];
    for (std::size_t j = k + 1; j < n; ++j) s -= A[k][j] * x[j];
    x[k] = s / A[k][k];
  }
  return x;
}

}  // namespace

TEST(Generator, SummationByPartsGivesMinusSeminorm) {
  for (double K : {0.5, 1.0, 1.5}) {
    const auto P = problem_for(K, 120, 2.0, K, 0.3);
    for (std::uint64_t s = 1; s <= 5; ++s) {
      const auto u = random_h0_pair(P.ips, s).first;
      const double lhs = ip_L2_sigma(P.gen.apply(u), u, P.ips);
      const double rhs = -seminorm_eta(u, u, P.ips);
      // The lumped form differs from ip_L2_sigma only at the boundary nodes,
      // where (A u) vanishes.
      double lumped = 0.0;
      const auto Au = P.gen.apply(u);
      for (std::size_t i = 0; i < u.size(); ++i) lumped += P.ips.node_mass[i] * Au[i] * u[i];
      EXPECT_NEAR(lumped / rhs, 1.0, 1e-12);
      EXPECT_LE(lhs, 0.0);
    }
  }
}

TEST(Generator, SelfAdjointInLumpedMass) {
  const auto P = problem_for(1.2, 90, 2.0, 1.2, -0.2);
  const auto u = random_h0_pair(P.ips, 1).first, v = random_h0_pair(P.ips, 2).first;
  const auto Au = P.gen.apply(u), Av = P.gen.apply(v);
  double uAv = 0.0, vAu = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    uAv += P.ips.node_mass[i] * u[i] * Av[i];
    vAu += P.ips.node_mass[i] * v[i] * Au[i];
  }
  EXPECT_NEAR(uAv, vAu, 1e-12 * std::abs(uAv));
}

TEST(Generator, SineEigenfunctionWithoutDegeneracy) {
  double prev = 1.0;
  for (std::size_t n : {50, 100, 200}) {
    const auto P = problem_for(0.0, n, 1.0);
    const auto u = degwave::testing::sine_field(P.mesh);
    const auto Au = P.gen.apply(u);
    double err = 0.0;
    for (std::size_t i = 1; i < n; ++i)
      err = std::max(err, std::abs(Au[i] + std::numbers::pi * std::numbers::pi * u[i]));
    EXPECT_LT(err, 0.3 * prev);
    prev = err;
  }
  EXPECT_LT(prev, 1e-3);
}

TEST(Generator, BoundaryAndLengthChecks) {
  const auto P = problem_for(0.5, 20, 2.0);
  WeightedVector u(21);
  u[20] = 1.0;
  try {
    P.gen.apply(u);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::boundary_violation);
  }
  try {
    P.gen.apply(WeightedVector(10));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::mesh_mismatch);
  }
}

TEST(Generator, LiftMatchesOpenRightBoundary) {
  const auto P = problem_for(0.5, 40, 2.0, 0.5, 0.1);
  const DiscreteGenerator open(P.ips, true, false);
  auto u = random_h0_pair(P.ips, 4).first;
  const double f = 0.37;
  const auto base = P.gen.apply(u);
  const auto lift = P.gen.lift_dirichlet(f);
  u[u.size() - 1] = f;
  const auto full = open.apply(u);
  for (std::size_t i = 0; i < u.size(); ++i) EXPECT_NEAR(full[i], base[i] + lift[i], 1e-10);
  EXPECT_NEAR(P.gen.boundary_flux(u), P.gen.boundary_coupling() * (f - u[u.size() - 2]), 1e-15);
}

TEST(Generator, StiffnessMatchesSeminorm) {
  const auto P = problem_for(1.5, 60, 2.0);
  const auto u = random_h0_pair(P.ips, 8).first;
  const auto d = P.gen.stiffness_diag();
  const auto o = P.gen.stiffness_off();
  double quad = 0.0;
  for (std::size_t i = 0; i < d.size(); ++i) {
    quad += d[i] * u[i + 1] * u[i + 1];
    if (i + 1 < d.size()) quad += 2.0 * o[i] * u[i + 1] * u[i + 2];
  }
  EXPECT_NEAR(quad / seminorm_eta(u, u, P.ips), 1.0, 1e-12);
}

TEST(Generator, SolveStiffnessInvertsS) {
  const auto P = problem_for(0.5, 50, 2.0);
  const auto rhs = random_h0_pair(P.ips, 3).first;
  const auto p = P.gen.solve_stiffness(rhs);
  const auto d = P.gen.stiffness_diag();
  const auto o = P.gen.stiffness_off();
  for (std::size_t i = 0; i < d.size(); ++i) {
    double s = d[i] * p[i + 1];
    if (i > 0) s += o[i - 1] * p[i];
    if (i + 1 < d.size()) s += o[i] * p[i + 2];
    EXPECT_NEAR(s, rhs[i + 1], 1e-9 * degwave::testing::max_abs(rhs));
  }
  EXPECT_EQ(p.left(), 0.0);
  EXPECT_EQ(p.right(), 0.0);
}

TEST(Trace, ExactForQuadraticsOnGradedMesh) {
  for (double p : {1.0, 2.0, 3.5}) {
    const auto mesh = GradedMesh::graded(17, p);
    const TraceExtractor tr(mesh);
    const auto q = WeightedVector::sample(mesh, [](double x) { return 3 * x * x - 2 * x + 0.5; });
    EXPECT_NEAR(tr(q), 4.0, 1e-9);
    const auto& c = tr.coefficients();
    EXPECT_NEAR(c[0] + c[1] + c[2], 0.0, 1e-9);
  }
}

TEST(Tridiagonal, MatchesDenseElimination) {
  const std::size_t n = 30;
  LinearRng rng(17);
  std::vector<double> diag(n), off(n - 1), b(n);
  for (auto& o : off) o = rng.uniform() - 0.5;
  for (std::size_t i = 0; i < n; ++i) {
    diag[i] = 2.0 + rng.uniform();
    b[i] = rng.normal();
  }
  std::vector<std::vector<double>> A(n, std::vector<double>(n, 0.0));
  for (std::size_t i = 0; i < n; ++i) {
    A[i][i] = diag[i];
    if (i + 1 < n) A[i][i + 1] = A[i + 1][i] = off[i];
  }
  const auto expected = dense_solve(A, b);
  const TridiagonalSolver solver(diag, off);
  std::vector<double> x = b;
  solver.solve(x, 1e-12);
  for (std::size_t i = 0; i < n; ++i) EXPECT_NEAR(x[i], expected[i], 1e-12);
  std::vector<double> back(n);
  solver.multiply(x, back);
  for (std::size_t i = 0; i < n; ++i) EXPECT_NEAR(back[i], b[i], 1e-12);
}

TEST(Tridiagonal, NonPositivePivotIsABreakdown) {
  try {
    TridiagonalSolver solver({1.0, 1.0}, {2.0});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::solver_breakdown);
  }
  EXPECT_THROW(TridiagonalSolver({1.0, 1.0}, {1.0, 1.0}), Error);
}

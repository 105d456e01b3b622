#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "diagnostics.hpp"
#include "error.hpp"
#include "random_fields.hpp"
#include "test_support.hpp"

using namespace degwave;
using degwave::testing::sine_field;

namespace {

Problem problem_for(double K, std::size_t n, double p, double h = 0.0, double c = 0.0) {
  return Problem::build(CoefficientProfile::power_law(K, h, c), n, p);
}

Trajectory sine_run(const Problem& P, double T, double dt) {
  SolveSettings st;
  st.dt = dt;
  st.store_every = 1;
  const State s0{sine_field(P.mesh), WeightedVector(P.n_nodes()), 0.0};
  return solve_homogeneous(s0, T, Direction::forward, P, st);
}

double rel_residual(const Problem& P, Identity which, double T, double dt) {
  return multiplier_residual(sine_run(P, T, dt), which, P).relative_residual;
}

}  // namespace

TEST(Energy, ZeroTrajectoryHasZeroEnergy) {
  const auto P = problem_for(0.5, 20, 2.0);
  const State zero{WeightedVector(P.n_nodes()), WeightedVector(P.n_nodes()), 0.0};
  const auto traj = solve_homogeneous(zero, 1.0, Direction::forward, P, {});
  const auto e = energy(traj, P.ips);
  EXPECT_EQ(e.E0, 0.0);
  EXPECT_EQ(e.max_rel_drift, 0.0);
  for (double v : e.E) EXPECT_EQ(v, 0.0);
}

TEST(Energy, DriftIsAtRoundoffLevel) {
  const auto P = problem_for(1.0, 100, 2.0, 1.0, 0.1);
  const FieldPair U = random_h0_pair(P.ips, 4);
  const auto traj = solve_homogeneous({U.first, U.second, 0.0}, 4.0, Direction::forward, P, {});
  const auto e = energy(traj, P.ips);
  EXPECT_NEAR(e.E0, 0.5, 1e-13);
  EXPECT_EQ(e.times.size(), traj.states.size());
  EXPECT_LT(e.max_rel_drift, 1e-10);
}

TEST(TraceIntegral, TrapezoidOfConstant) {
  EXPECT_NEAR(trace_integral({2.0, 2.0, 2.0}, 0.5, 1.5), 1.5 * 4.0 * 1.0, 1e-15);
  EXPECT_EQ(trace_integral({}, 0.5, 1.0), 0.0);
}

TEST(Observability, WaveEquationRatioIsFour) {
  const auto P = problem_for(0.0, 400, 1.0);
  const auto report = classify_degeneracy(P.profile, 256);
  const auto check = observability_check(sine_run(P, 2.0, 2.0 / 4096), report, P, 2.0);
  EXPECT_NEAR(check.ratio, 4.0, 1e-2);
  EXPECT_NEAR(check.upper_const, 12.0, 1e-12);
  EXPECT_TRUE(check.passes_upper);
  EXPECT_TRUE(check.passes_lower);
}

TEST(Observability, LowerConstantForWeakDegeneracy) {
  const auto P = problem_for(0.5, 100, 1.5);
  const auto report = classify_degeneracy(P.profile, 256);
  const FieldPair U = random_h0_pair(P.ips, 2);
  SolveSettings st;
  const auto traj = solve_homogeneous({U.first, U.second, 0.0}, 8.0, Direction::forward, P, st);
  const auto check = observability_check(traj, report, P, 8.0);
  EXPECT_NEAR(check.lower_const, 4.0, 1e-12);
  EXPECT_NEAR(check.E0, 0.5, 1e-13);
  EXPECT_NEAR(check.ratio, check.trace_integral / check.E0, 1e-15);
}

TEST(Observability, ZeroEnergyIsRejected) {
  const auto P = problem_for(0.5, 20, 2.0);
  const State zero{WeightedVector(P.n_nodes()), WeightedVector(P.n_nodes()), 0.0};
  const auto traj = solve_homogeneous(zero, 1.0, Direction::forward, P, {});
  EXPECT_THROW(observability_check(traj, classify_degeneracy(P.profile, 64), P, 1.0), Error);
}

TEST(Observability, EnsembleIsDeterministic) {
  const auto P = problem_for(0.5, 60, 1.5);
  const auto report = classify_degeneracy(P.profile, 256);
  const auto a = observability_ensemble(P, report, 2.0, 6, 7, {});
  const auto b = observability_ensemble(P, report, 2.0, 6, 7, {});
  ASSERT_EQ(a.size(), 6u);
  for (std::size_t k = 0; k < a.size(); ++k) {
    EXPECT_EQ(a[k].ratio, b[k].ratio);
    EXPECT_TRUE(a[k].passes_upper);
  }
}

TEST(Identities, ResidualsAreSmallAndShrinkUnderRefinement) {
  for (Identity which : {Identity::x2_multiplier, Identity::x_multiplier}) {
    const double coarse = rel_residual(problem_for(0.5, 100, 2.0), which, 2.0, 2.0 / 1024);
    const double fine = rel_residual(problem_for(0.5, 200, 2.0), which, 2.0, 2.0 / 2048);
    EXPECT_LT(fine, 0.02) << to_string(which);
    EXPECT_LT(fine, 0.5 * coarse) << to_string(which);
  }
}

TEST(Identities, TermsAddUp) {
  const auto P = problem_for(1.5, 100, 2.0, 1.2, 0.1);
  const auto r = multiplier_residual(sine_run(P, 1.0, 1.0 / 1024), Identity::x2_multiplier, P);
  ASSERT_EQ(r.rhs_terms.size(), 4u);
  double sum = 0.0;
  for (const auto& [name, value] : r.rhs_terms) {
    EXPECT_FALSE(name.empty());
    sum += value;
  }
  EXPECT_NEAR(r.residual, std::abs(r.lhs - sum), 1e-12 * std::abs(r.lhs));
  EXPECT_GT(r.lhs, 0.0);
  EXPECT_STREQ(to_string(Identity::x_multiplier), "x_multiplier");
}

TEST(Identities, NeedStoredStates) {
  const auto P = problem_for(0.5, 20, 2.0);
  SolveSettings st;
  st.store_every = 0;
  const State s0{sine_field(P.mesh), WeightedVector(P.n_nodes()), 0.0};
  const auto traj = solve_homogeneous(s0, 1.0, Direction::forward, P, st);
  EXPECT_THROW(multiplier_residual(traj, Identity::x_multiplier, P), Error);
}

TEST(LimitProbe, QuantitiesVanishTowardZero) {
  const auto P = problem_for(0.5, 400, 2.0);
  const auto u = WeightedVector::sample(P.mesh, [](double x) { return x * (1 - x); });
  const auto probe = boundary_limit_probe(u, P.profile, P.mesh);
  ASSERT_EQ(probe.samples.size(), 10u);
  for (double r : probe.first_to_fifth) {
    EXPECT_GT(r, 0.0);
    EXPECT_LT(r, 0.1);
  }
  for (std::size_t i = 1; i < probe.samples.size(); ++i) {
    EXPECT_GT(probe.samples[i].x, probe.samples[i - 1].x);
    EXPECT_GT(probe.samples[i].x2_du2, probe.samples[i - 1].x2_du2);
  }
  EXPECT_THROW(boundary_limit_probe(WeightedVector(3), P.profile, P.mesh), Error);
}

TEST(Sweep, DeterministicAndPositive) {
  SweepBase base;
  base.n_cells = 60;
  base.grading_p = 1.5;
  base.h = 1.2;
  base.c = 0.1;
  const auto a = sweep_observability({0.5, 1.5}, 4.0, 3, base);
  const auto b = sweep_observability({0.5, 1.5}, 4.0, 3, base);
  ASSERT_EQ(a.size(), 2u);
  for (std::size_t i = 0; i < a.size(); ++i) {
    EXPECT_EQ(a[i].C_est, b[i].C_est);
    EXPECT_GT(a[i].C_est, 0.0);
    EXPECT_EQ(a[i].n, 60u);
    EXPECT_DOUBLE_EQ(a[i].T, 4.0);
  }
  EXPECT_DOUBLE_EQ(a[1].K, 1.5);
}

TEST(Sweep, InvalidArguments) {
  SweepBase base;
  base.n_cells = 20;
  EXPECT_THROW(sweep_observability({3.0}, 1.0, 2, base), Error);
  EXPECT_THROW(sweep_observability({0.0}, 1.0, 2, base), Error);
  EXPECT_THROW(sweep_observability({0.5}, 1.0, 0, base), Error);
}

TEST(Rng, UniformRangeAndMean) {
  LinearRng rng(99);
  double sum = 0.0;
  for (int k = 0; k < 100000; ++k) {
    const double u = rng.uniform();
    ASSERT_GT(u, 0.0);
    ASSERT_LT(u, 1.0);
    sum += u;
  }
  EXPECT_NEAR(sum / 100000, 0.5, 5e-3);
  EXPECT_NE(member_seed(1, 0), member_seed(1, 1));
  EXPECT_EQ(member_seed(1, 0), 1u);
}

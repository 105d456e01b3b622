#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>

#include "coefficients.hpp"
#include "error.hpp"
#include "quadrature.hpp"

using namespace degwave;

namespace {

ControlTimeBound bound_for(const CoefficientProfile& p) {
  const WeightPair w = build_weights(p, 1024);
  return observability_time(classify_degeneracy(p, 256), w, p.a(1.0));
}

std::filesystem::path temp_file(const std::string& name, const std::string& text) {
  const auto path = std::filesystem::temp_directory_path() / name;
  std::ofstream(path) << text;
  return path;
}

}  // namespace

TEST(Quadrature, GaussLegendreIsExactForPolynomialsOfDegree19) {
  const double v = quadrature::gauss_legendre([](double x) { return std::pow(x, 19); }, 0.0, 1.0);
  EXPECT_NEAR(v, 1.0 / 20.0, 1e-15);
}

TEST(Quadrature, SingularIntegralMatchesClosedForm) {
  // int_0^1 x^-0.7 dx = 1 / 0.3
  const auto r = quadrature::integrate_from_zero([](double x) { return std::pow(x, -0.7); }, 1.0);
  EXPECT_TRUE(r.converged);
  EXPECT_NEAR(r.value, 1.0 / 0.3, 1e-10);
}

TEST(Quadrature, SingularIntegralReportsDivergence) {
  const auto r = quadrature::integrate_from_zero([](double x) { return std::pow(x, -1.1); }, 1.0);
  EXPECT_FALSE(r.converged);
}

TEST(Weights, ZeroDriftGivesUnitEta) {
  const auto p = CoefficientProfile::power_law(0.5, 0.0, 0.0);
  const WeightPair w = build_weights(p, 256);
  EXPECT_DOUBLE_EQ(w.eta_at_1(), 1.0);
  for (double x : {0.0, 0.01, 0.3, 1.0}) EXPECT_DOUBLE_EQ(w.eta(x), 1.0);
  for (double x : {0.01, 0.3, 1.0}) EXPECT_NEAR(w.sigma(x), std::sqrt(x), 1e-15);
}

TEST(Weights, ConstantDriftRatioHasClosedFormEta) {
  // b / a = 0.1, so eta = exp(0.1 (x - 1/2)).
  const auto p = CoefficientProfile::power_law(0.5, 0.5, 0.1);
  const WeightPair w = build_weights(p, 1024);
  EXPECT_EQ(w.eta(0.5), 1.0);
  EXPECT_NEAR(w.eta_at_1(), std::exp(0.05), 1e-12);
  EXPECT_NEAR(w.eta_at_1(), 1.051271, 1e-6);
  for (double x : {0.001, 0.2, 0.77}) EXPECT_NEAR(w.eta(x), std::exp(0.1 * (x - 0.5)), 1e-12);
  EXPECT_NEAR(w.eta_min(), std::exp(-0.05), 1e-12);
  EXPECT_NEAR(w.eta_max(), std::exp(0.05), 1e-12);
}

TEST(Weights, SingularDriftRatioMatchesAntiderivative) {
  // b / a = x^-0.6, int_{1/2}^x = (x^0.4 - 0.5^0.4) / 0.4
  const auto p = CoefficientProfile::power_law(1.0, 0.4, 1.0);
  const WeightPair w = build_weights(p, 1024);
  for (double x : {1e-6, 0.01, 0.3, 1.0}) {
    const double exact = std::exp((std::pow(x, 0.4) - std::pow(0.5, 0.4)) / 0.4);
    EXPECT_NEAR(w.eta(x) / exact, 1.0, 1e-10) << "x = " << x;
  }
}

TEST(Weights, SigmaTimesEtaIsA) {
  for (auto p : {CoefficientProfile::power_law(0.5, 0.5, 0.1),
                 CoefficientProfile::power_law(1.5, 1.2, -0.4),
                 CoefficientProfile::power_law(1.0, 0.3, 0.7)}) {
    const WeightPair w = build_weights(p, 512);
    for (std::size_t i = 1; i < w.nodes().size(); ++i) {
      const double x = w.nodes()[i];
      EXPECT_NEAR(w.sigma_nodes()[i] * w.eta_nodes()[i] / p.a(x), 1.0, 1e-12);
    }
    EXPECT_GT(w.eta_min(), 0.0);
    for (double e : w.eta_nodes()) {
      EXPECT_GE(e, w.eta_min());
      EXPECT_LE(e, w.eta_max());
    }
  }
}

TEST(Weights, QuadratureRefinementChangesEtaAtOneBelow1e10) {
  for (auto p : {CoefficientProfile::power_law(0.5, 0.5, 0.1),
                 CoefficientProfile::power_law(1.8, 1.0, 0.3),
                 CoefficientProfile::power_law(1.2, 0.3, 1.0)}) {
    const double coarse = build_weights(p, 512).eta_at_1();
    const double fine = build_weights(p, 1024).eta_at_1();
    EXPECT_LT(std::abs(coarse - fine), 1e-10) << p.describe();
  }
}

TEST(Weights, NonIntegrableDriftRatioIsRejected) {
  const auto p = CoefficientProfile::power_law(1.5, 0.4, 1.0);
  try {
    build_weights(p, 1024);
    FAIL() << "expected hypothesis_violation";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::hypothesis_violation);
  }
}

TEST(Weights, TooFewQuadratureNodesIsRejected) {
  EXPECT_THROW(build_weights(CoefficientProfile::power_law(0.5, 0, 0), 32), Error);
}

TEST(Classify, PowerLawExponentIsMeasuredExactly) {
  for (double K : {0.25, 0.5, 1.0, 1.5, 1.99, 2.5}) {
    const auto r = classify_degeneracy(CoefficientProfile::power_law(K, 0, 0), 200);
    EXPECT_NEAR(r.K_measured, K, 1e-12);
  }
}

TEST(Classify, Classes) {
  EXPECT_EQ(classify_degeneracy(CoefficientProfile::power_law(0.5, 0, 0), 128).classification,
            Degeneracy::WD);
  EXPECT_EQ(classify_degeneracy(CoefficientProfile::power_law(1.0, 0, 0), 128).classification,
            Degeneracy::SD);
  EXPECT_EQ(classify_degeneracy(CoefficientProfile::power_law(1.5, 0, 0), 128).classification,
            Degeneracy::SD);
  EXPECT_EQ(classify_degeneracy(CoefficientProfile::power_law(2.5, 0, 0), 128).classification,
            Degeneracy::supercritical);
  EXPECT_EQ(classify_degeneracy(CoefficientProfile::power_law(0.0, 0, 0), 128).classification,
            Degeneracy::none);
}

TEST(Classify, DriftConstants) {
  const auto r = classify_degeneracy(CoefficientProfile::power_law(0.5, 0, 0), 128);
  EXPECT_EQ(r.M, 0.0);
  EXPECT_TRUE(r.hyp_b_over_a_L1);
  EXPECT_TRUE(r.hyp_xK_over_a_monotone);

  // x b / a = x^0.7 has sup 1 at x = 1.
  const auto sd = classify_degeneracy(CoefficientProfile::power_law(1.5, 1.2, 1.0), 256);
  EXPECT_NEAR(sd.M_inf, 1.0, 1e-12);
  EXPECT_TRUE(sd.hyp_xb_over_a_Linf);

  // M = |c| for h >= 0 and a(1) = 1.
  for (double c : {-0.3, 0.1, 0.45}) {
    const auto rc = classify_degeneracy(CoefficientProfile::power_law(0.7, 0.8, c), 128);
    EXPECT_NEAR(rc.M, std::abs(c), 1e-12);
  }

  // x b / a = x^-0.2 is unbounded near 0.
  const auto unbounded = classify_degeneracy(CoefficientProfile::power_law(1.5, 0.3, 1.0), 256);
  EXPECT_FALSE(unbounded.hyp_xb_over_a_Linf);
}

TEST(ControlTime, NoDriftWeakDegeneracy) {
  const auto b = bound_for(CoefficientProfile::power_law(0.5, 0, 0));
  EXPECT_NEAR(b.gap, 1.5, 1e-12);
  EXPECT_NEAR(b.T0, 8.0 / 1.5, 1e-12);
  EXPECT_NEAR(b.T0, 5.3333, 1e-4);
  EXPECT_EQ(b.regime, TimeRegime::WD_or_K1);
}

TEST(ControlTime, WeakDegeneracyWithDrift) {
  const auto b = bound_for(CoefficientProfile::power_law(0.5, 0.5, 0.1));
  const double inner = std::max({1.0, 1.0, 0.5 * std::exp(0.1)});
  EXPECT_NEAR(b.gap, 1.3, 1e-12);
  EXPECT_NEAR(b.inner_max, inner, 1e-12);
  EXPECT_NEAR(b.T0, 8.0 * inner / 1.3, 1e-10);
  EXPECT_NEAR(b.T0, 6.1538, 1e-4);
}

TEST(ControlTime, StrongDegeneracyUsesMInf) {
  // a = x^1.9, b = 0.2 x^1.9: M_inf = 0.2, gap = 2 - 1.9 - 0.4 < 0.
  const auto b = bound_for(CoefficientProfile::power_law(1.9, 1.9, 0.2));
  EXPECT_EQ(b.regime, TimeRegime::SD_Kgt1);
  EXPECT_NEAR(b.gap, -0.3, 1e-12);
  EXPECT_FALSE(b.finite());
  EXPECT_TRUE(std::isinf(b.T0));

  // K = 1.5 with M_inf = 0.1: gap 0.3, inner max = K eta_max / eta_min.
  const auto p = CoefficientProfile::power_law(1.5, 1.5, 0.1);
  const auto w = build_weights(p, 1024);
  const auto b2 = bound_for(p);
  const double inner = std::max(1.0, 1.5 * w.eta_max() / w.eta_min());
  EXPECT_NEAR(b2.gap, 0.3, 1e-12);
  EXPECT_NEAR(b2.T0, 8.0 * inner / 0.3, 1e-9);
  EXPECT_GT(b2.T0, 0.0);
}

TEST(ControlTime, SmallDriftAlwaysLeavesPositiveGapInWeakCase) {
  // ||b||_inf < a(1)/2 and K < 1 give 2 - K - 2M > 0.
  for (double K : {0.1, 0.5, 0.9}) {
    for (double c : {0.0, 0.1, 0.25, 0.49}) {
      const auto b = bound_for(CoefficientProfile::power_law(K, 0.5, c));
      EXPECT_GT(b.gap, 0.0) << "K=" << K << " c=" << c;
      EXPECT_TRUE(std::isfinite(b.T0));
    }
  }
}

TEST(ControlTime, InequalityConstants) {
  // a == 1, b == 0, T = 2: 2 (2 + 0 + 0) 2 + 4 = 12.
  const auto flat = CoefficientProfile::power_law(0.0, 0, 0);
  EXPECT_NEAR(direct_inequality_constant(classify_degeneracy(flat, 128), 1.0, 2.0), 12.0, 1e-12);
  // K = 0.5, b == 0, T = 8: 8 * 1.5 - 8 = 4.
  EXPECT_NEAR(observability_lower_constant(bound_for(CoefficientProfile::power_law(0.5, 0, 0)), 8.0),
              4.0, 1e-12);
}

TEST(Tabulated, ReproducesPowerLawConstants) {
  std::vector<TableRow> rows;
  for (int i = 160; i >= 0; --i) {
    const double x = std::pow(2.0, -i / 8.0);
    rows.push_back({x, std::sqrt(x), 0.1 * std::sqrt(x), 0.5 / std::sqrt(x)});
  }
  const auto p = CoefficientProfile::tabulated(rows);
  EXPECT_EQ(p.kind(), ProfileKind::tabulated);
  const auto w = build_weights(p, 1024);
  EXPECT_NEAR(w.eta_at_1(), std::exp(0.05), 1e-6);
  const auto r = classify_degeneracy(p, 256);
  EXPECT_NEAR(r.K_measured, 0.5, 1e-3);
  EXPECT_EQ(r.classification, Degeneracy::WD);
  // Below the first sample the tail continues the local power law.
  EXPECT_NEAR(p.a(1e-8) / std::sqrt(1e-8), 1.0, 1e-9);
}

TEST(Tabulated, CsvColumnsInAnyOrder) {
  const auto path = temp_file("degwave_profile.csv",
                              "b,x,aprime,a\n0,0.25,1,0.25\n0,0.5,1,0.5\n0,1,1,1\n");
  const auto p = CoefficientProfile::from_csv(path);
  EXPECT_NEAR(p.a(0.75), 0.75, 1e-15);
  EXPECT_NEAR(p.a_prime(0.75), 1.0, 1e-15);
  EXPECT_EQ(p.b(0.75), 0.0);
}

TEST(Tabulated, InvalidInputsAreRejected) {
  EXPECT_THROW(CoefficientProfile::from_csv(temp_file("degwave_bad1.csv", "x,a,b\n1,1,0\n")),
               Error);
  EXPECT_THROW(CoefficientProfile::from_csv("/nonexistent/profile.csv"), Error);
  EXPECT_THROW(CoefficientProfile::tabulated({{0.5, 1, 0, 0}, {0.4, 1, 0, 0}}), Error);
  EXPECT_THROW(CoefficientProfile::tabulated({{0.5, -1, 0, 0}, {1.0, 1, 0, 0}}), Error);
  EXPECT_THROW(CoefficientProfile::tabulated({{0.5, 1, 0, 0}, {0.9, 1, 0, 0}}), Error);
}

TEST(Profile, PowerLawValues) {
  const auto p = CoefficientProfile::power_law(1.5, 1.2, 0.3);
  EXPECT_EQ(p.a(0.0), 0.0);
  EXPECT_NEAR(p.a(0.49), std::pow(0.49, 1.5), 1e-15);
  EXPECT_NEAR(p.a_prime(0.49), 1.5 * std::pow(0.49, 0.5), 1e-15);
  EXPECT_NEAR(p.b(0.49), 0.3 * std::pow(0.49, 1.2), 1e-15);
  EXPECT_THROW(CoefficientProfile::power_law(-1.0, 0, 0), Error);
}

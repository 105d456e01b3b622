#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "evolution.hpp"

namespace degwave {

struct EnergySeries {
  std::vector<double> times;
  std::vector<double> E;
  double E0 = 0.0;
  double max_rel_drift = 0.0;
};

/// E(t) = 1/2 (ip_L2_sigma(v, v) + seminorm_eta(y, y)) on the stored states.
EnergySeries energy(const Trajectory& traj, const InnerProductSet& ips);

/// eta(1) times the trapezoid rule on trace^2 over the full time grid.
double trace_integral(const std::vector<double>& trace, double dt, double eta_at_1);

struct ObservabilityCheck {
  double trace_integral = 0.0;
  double E0 = 0.0;
  double ratio = 0.0;
  double upper_const = 0.0;
  double lower_const = 0.0;
  bool passes_upper = false;
  bool passes_lower = false;
};

/// Default relative allowance on the lower bound for discretization error.
inline constexpr double kLowerBoundAllowance = 0.05;

/// Compares trace_integral / E0 with the direct and observability constants.
/// passes_lower holds when ratio >= (1 - allowance) lower_const, and trivially
/// when lower_const <= 0.
ObservabilityCheck observability_check(const Trajectory& traj, const DegeneracyReport& report,
                                       const Problem& problem, double T,
                                       double allowance = kLowerBoundAllowance);

enum class Identity { x2_multiplier, x_multiplier };

const char* to_string(Identity which);

struct IdentityResidual {
  Identity which = Identity::x2_multiplier;
  double lhs = 0.0;
  std::vector<std::pair<std::string, double>> rhs_terms;
  double residual = 0.0;
  double relative_residual = 0.0;
};

/// Balance of the multiplier identity for a homogeneous solution. With
/// m(x) = x^2 (x2_multiplier) or m(x) = x (x_multiplier):
///   1/2 eta(1) int y_x(t,1)^2 dt
///     = int [m y_x y_t / sigma]_0^T dx - 1/2 iint m eta (b/a) y_x^2
///       + iint (m'/2) eta y_x^2 + 1/2 iint (m' - m (a'-b)/a) y_t^2 / sigma
/// Space integrals use cell midpoints, time integrals the trapezoid rule on
/// the stored states; the lhs uses the three-node trace at every step.
IdentityResidual multiplier_residual(const Trajectory& traj, Identity which,
                                     const Problem& problem);

struct LimitSample {
  double x = 0.0;
  double x2_du2 = 0.0;  // x^2 u'^2
  double x_du2 = 0.0;   // x u'^2
  double x_over_a_u2 = 0.0;
};

struct LimitProbe {
  std::vector<LimitSample> samples;
  /// first / fifth sample of each quantity (0 when the fifth is 0).
  std::array<double, 3> first_to_fifth{};
};

/// Samples at the first 10 cell midpoints next to x = 0.
LimitProbe boundary_limit_probe(const WeightedVector& u, const CoefficientProfile& profile,
                                const GradedMesh& mesh);

/// Observability checks for `members` random unit-H0 data from
/// member_seed(seed, k); solves run in parallel.
std::vector<ObservabilityCheck> observability_ensemble(const Problem& problem,
                                                       const DegeneracyReport& report,
                                                       double T, std::size_t members,
                                                       std::uint64_t seed,
                                                       const SolveSettings& settings);

struct SweepBase {
  double h = 0.0;  // drift b = c x^h
  double c = 0.0;
  std::size_t n_cells = 200;
  double grading_p = 2.0;
  std::uint64_t seed = 1;
  SolveSettings settings;
};

struct SweepRow {
  double K = 0.0;
  double C_est = 0.0;  // min over the ensemble of trace_integral / E0
  double T = 0.0;
  std::size_t n = 0;
  double dt = 0.0;
};

/// C_est(K) for a = x^K with the same ensemble seeds at every K.
std::vector<SweepRow> sweep_observability(const std::vector<double>& K_grid, double T,
                                          std::size_t ensemble, const SweepBase& base);

}  // namespace degwave

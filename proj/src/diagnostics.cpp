#include "diagnostics.hpp"

#include <algorithm>
#include <cmath>

#include "error.hpp"
#include "parallel.hpp"
#include "random_fields.hpp"

namespace degwave {

EnergySeries energy(const Trajectory& traj, const InnerProductSet& ips) {
  EnergySeries out;
  out.times.reserve(traj.states.size());
  out.E.reserve(traj.states.size());
  for (const State& s : traj.states) {
    out.times.push_back(s.t);
    out.E.push_back(discrete_energy(s, ips));
  }
  if (out.E.empty()) return out;
  out.E0 = out.E.front();
  if (out.E0 > 0.0) {
    for (double e : out.E) {
      out.max_rel_drift = std::max(out.max_rel_drift, std::abs(e - out.E0) / out.E0);
    }
  }
  return out;
}

double trace_integral(const std::vector<double>& trace, double dt, double eta_at_1) {
  if (trace.size() < 2) return 0.0;
  double sum = 0.5 * (trace.front() * trace.front() + trace.back() * trace.back());
  for (std::size_t k = 1; k + 1 < trace.size(); ++k) sum += trace[k] * trace[k];
  return eta_at_1 * dt * sum;
}

ObservabilityCheck observability_check(const Trajectory& traj, const DegeneracyReport& report,
                                       const Problem& problem, double T, double allowance) {
  require(!traj.states.empty(), ErrorCode::invalid_argument,
          "observability_check: trajectory has no stored states");
  ObservabilityCheck out;
  out.E0 = discrete_energy(traj.initial(), problem.ips);
  require(out.E0 > 0.0, ErrorCode::invalid_argument,
          "observability_check: initial energy is zero");
  out.trace_integral = trace_integral(traj.trace_series, traj.dt, problem.eta_at_1());
  out.ratio = out.trace_integral / out.E0;

  const double a1 = problem.a_at_1();
  out.upper_const = direct_inequality_constant(report, a1, T);
  const ControlTimeBound bound = observability_time(report, problem.weights, a1);
  out.lower_const = observability_lower_constant(bound, T);
  out.passes_upper = out.ratio <= out.upper_const;
  out.passes_lower = out.lower_const <= 0.0 || out.ratio >= (1.0 - allowance) * out.lower_const;
  return out;
}

const char* to_string(Identity which) {
  switch (which) {
    case Identity::x2_multiplier: return "x2_multiplier";
    case Identity::x_multiplier: return "x_multiplier";
  }
  return "?";
}

namespace {

struct IdentityTerms {
  double boundary = 0.0;  // int m y_x y_t / sigma dx
  double drift = 0.0;
  double gradient = 0.0;
  double velocity = 0.0;
};

IdentityTerms space_terms(const State& s, Identity which, const Problem& problem) {
  const auto& mesh = problem.mesh;
  const auto& ips = problem.ips;
  const auto& profile = problem.profile;
  IdentityTerms out;
  for (std::size_t i = 0; i < mesh.n_cells(); ++i) {
    const double x = mesh.midpoints()[i];
    const double h = mesh.widths()[i];
    const double m = which == Identity::x2_multiplier ? x * x : x;
    const double dm = which == Identity::x2_multiplier ? 2.0 * x : 1.0;
    const double yx = (s.y[i + 1] - s.y[i]) / h;
    const double yt = 0.5 * (s.v[i] + s.v[i + 1]);
    const double a = profile.a(x);
    const double aprime_minus_b_over_a = (profile.a_prime(x) - profile.b(x)) / a;

    out.boundary += ips.w_sigma_mid[i] * m * yx * yt;
    out.drift += -0.5 * ips.w_eta_mid[i] * m * profile.b_over_a(x) * yx * yx;
    out.gradient += 0.5 * dm * ips.w_eta_mid[i] * yx * yx;
    out.velocity += 0.5 * ips.w_sigma_mid[i] * (dm - m * aprime_minus_b_over_a) * yt * yt;
  }
  return out;
}

}  // namespace

IdentityResidual multiplier_residual(const Trajectory& traj, Identity which,
                                     const Problem& problem) {
  require(traj.states.size() >= 3, ErrorCode::invalid_argument,
          "multiplier_residual: needs stored interior states (lower store_every)");
  IdentityResidual out;
  out.which = which;
  out.lhs = 0.5 * trace_integral(traj.trace_series, traj.dt, problem.eta_at_1());

  IdentityTerms bulk;
  IdentityTerms prev = space_terms(traj.states.front(), which, problem);
  const IdentityTerms first = prev;
  for (std::size_t k = 1; k < traj.states.size(); ++k) {
    const IdentityTerms cur = space_terms(traj.states[k], which, problem);
    const double w = 0.5 * (traj.states[k].t - traj.states[k - 1].t);
    bulk.drift += w * (prev.drift + cur.drift);
    bulk.gradient += w * (prev.gradient + cur.gradient);
    bulk.velocity += w * (prev.velocity + cur.velocity);
    prev = cur;
  }
  const double boundary = prev.boundary - first.boundary;

  out.rhs_terms = {{"boundary_time", boundary},
                   {"drift_bulk", bulk.drift},
                   {"gradient_bulk", bulk.gradient},
                   {"velocity_bulk", bulk.velocity}};
  double sum = 0.0;
  double scale = std::abs(out.lhs);
  for (const auto& [name, value] : out.rhs_terms) {
    sum += value;
    scale = std::max(scale, std::abs(value));
  }
  out.residual = out.lhs - sum;
  out.relative_residual = scale > 0.0 ? std::abs(out.residual) / scale : 0.0;
  return out;
}

LimitProbe boundary_limit_probe(const WeightedVector& u, const CoefficientProfile& profile,
                                const GradedMesh& mesh) {
  require(u.size() == mesh.n_nodes(), ErrorCode::mesh_mismatch,
          "boundary_limit_probe: field length does not match the mesh");
  LimitProbe out;
  const std::size_t count = std::min<std::size_t>(10, mesh.n_cells());
  for (std::size_t i = 0; i < count; ++i) {
    const double x = mesh.midpoints()[i];
    const double du = (u[i + 1] - u[i]) / mesh.widths()[i];
    const double um = 0.5 * (u[i] + u[i + 1]);
    out.samples.push_back({x, x * x * du * du, x * du * du, x / profile.a(x) * um * um});
  }
  if (out.samples.size() >= 5) {
    const LimitSample& s0 = out.samples[0];
    const LimitSample& s4 = out.samples[4];
    auto ratio = [](double p, double q) { return q != 0.0 ? p / q : 0.0; };
    out.first_to_fifth = {ratio(s0.x2_du2, s4.x2_du2), ratio(s0.x_du2, s4.x_du2),
                          ratio(s0.x_over_a_u2, s4.x_over_a_u2)};
  }
  return out;
}

std::vector<ObservabilityCheck> observability_ensemble(const Problem& problem,
                                                       const DegeneracyReport& report,
                                                       double T, std::size_t members,
                                                       std::uint64_t seed,
                                                       const SolveSettings& settings) {
  std::vector<ObservabilityCheck> out(members);
  SolveSettings local = settings;
  local.store_every = 0;
  parallel_for(members, [&](std::size_t k) {
    const FieldPair data = random_h0_pair(problem.ips, member_seed(seed, k));
    const Trajectory traj =
        solve_homogeneous({data.first, data.second, 0.0}, T, Direction::forward, problem, local);
    out[k] = observability_check(traj, report, problem, T);
  });
  return out;
}

std::vector<SweepRow> sweep_observability(const std::vector<double>& K_grid, double T,
                                          std::size_t ensemble, const SweepBase& base) {
  require(ensemble >= 1, ErrorCode::invalid_argument, "sweep needs a nonempty ensemble");
  std::vector<SweepRow> rows;
  for (double K : K_grid) {
    require(K > 0.0 && K <= 2.5, ErrorCode::invalid_argument,
            "sweep K values must lie in (0, 2.5]");
    const CoefficientProfile profile = CoefficientProfile::power_law(K, base.h, base.c);
    const Problem problem = Problem::build(profile, base.n_cells, base.grading_p);
    const DegeneracyReport report = classify_degeneracy(profile, 256);
    const auto checks =
        observability_ensemble(problem, report, T, ensemble, base.seed, base.settings);
    double c_est = checks.front().ratio;
    for (const auto& c : checks) c_est = std::min(c_est, c.ratio);
    rows.push_back({K, c_est, T, base.n_cells, make_time_grid(T, base.settings.dt).dt});
  }
  return rows;
}

}  // namespace degwave

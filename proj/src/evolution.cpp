#include "evolution.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "error.hpp"

namespace degwave {

Problem Problem::build(const CoefficientProfile& profile, std::size_t n_cells,
                       double grading_p, std::size_t n_quad) {
  WeightPair weights = build_weights(profile, n_quad);
  GradedMesh mesh = GradedMesh::graded(n_cells, grading_p);
  InnerProductSet ips = build_inner_products(mesh, weights);
  DiscreteGenerator gen(ips);
  TraceExtractor trace(mesh);
  return Problem{profile, std::move(weights), std::move(mesh), std::move(ips),
                 std::move(gen), trace};
}

TimeGrid make_time_grid(double T, double dt) {
  require(std::isfinite(T) && T > 0.0, ErrorCode::invalid_argument,
          "time horizon T must be positive");
  if (dt <= 0.0) dt = T / 2048.0;
  const double ratio = T / dt;
  const auto steps = static_cast<std::size_t>(std::llround(ratio));
  require(steps >= 1 && std::abs(static_cast<double>(steps) - ratio) <= 1e-9 * ratio,
          ErrorCode::invalid_argument,
          "dt = " + std::to_string(dt) + " does not divide T = " + std::to_string(T));
  return {steps, T / static_cast<double>(steps)};
}

namespace {

TridiagonalSolver make_system(const DiscreteGenerator& gen, double dt) {
  const double s = 0.25 * dt * dt;
  std::vector<double> diag = gen.stiffness_diag();
  std::vector<double> off = gen.stiffness_off();
  const std::vector<double> mass = gen.interior_mass();
  for (std::size_t i = 0; i < diag.size(); ++i) diag[i] = mass[i] + s * diag[i];
  for (double& o : off) o *= s;
  return TridiagonalSolver(std::move(diag), std::move(off));
}

std::size_t resolve_store_every(std::size_t requested, std::size_t steps) {
  if (requested != SolveSettings::kAutoStore) return requested;
  return std::max<std::size_t>(1, (steps + 255) / 256);
}

bool should_store(std::size_t k, std::size_t steps, std::size_t every) {
  if (k == 0 || k == steps) return true;
  return every != 0 && k % every == 0;
}

void check_field(const WeightedVector& u, const Problem& p, const char* what) {
  require(u.size() == p.n_nodes(), ErrorCode::mesh_mismatch,
          std::string(what) + ": field length does not match the mesh");
}

}  // namespace

MidpointStepper::MidpointStepper(const DiscreteGenerator& gen, double dt, double linear_tol)
    : dt_(dt),
      linear_tol_(linear_tol),
      mass_(gen.interior_mass()),
      coupling_last_(gen.boundary_coupling()),
      system_(make_system(gen, dt)) {
  require(dt > 0.0, ErrorCode::invalid_argument, "dt must be positive");
}

void MidpointStepper::step(WeightedVector& y, WeightedVector& v, double f_half) const {
  const std::size_t m = mass_.size();
  std::vector<double> ybar(m);
  for (std::size_t i = 0; i < m; ++i) {
    ybar[i] = mass_[i] * (y[i + 1] + 0.5 * dt_ * v[i + 1]);
  }
  ybar[m - 1] += 0.25 * dt_ * dt_ * coupling_last_ * f_half;
  system_.solve(ybar, linear_tol_);
  for (std::size_t i = 0; i < m; ++i) {
    const double y_old = y[i + 1];
    y[i + 1] = 2.0 * ybar[i] - y_old;
    v[i + 1] = 4.0 * (ybar[i] - y_old) / dt_ - v[i + 1];
  }
}

State step_midpoint(const State& state, const Problem& problem, const SolveSettings& settings) {
  check_field(state.y, problem, "step_midpoint");
  check_field(state.v, problem, "step_midpoint");
  require(state.y.left() == 0.0 && state.y.right() == 0.0, ErrorCode::boundary_violation,
          "step_midpoint: state violates the Dirichlet conditions");
  require(settings.dt > 0.0, ErrorCode::invalid_argument, "step_midpoint needs dt > 0");
  MidpointStepper stepper(problem.gen, settings.dt, settings.linear_tol);
  State out = state;
  stepper.step(out.y, out.v);
  out.t = state.t + settings.dt;
  return out;
}

double discrete_energy(const State& s, const InnerProductSet& ips) {
  return 0.5 * (ip_L2_sigma(s.v, s.v, ips) + seminorm_eta(s.y, s.y, ips));
}

Trajectory solve_homogeneous(const State& Y0, double T, Direction direction,
                             const Problem& problem, const SolveSettings& settings) {
  check_field(Y0.y, problem, "solve_homogeneous");
  check_field(Y0.v, problem, "solve_homogeneous");
  require(Y0.y.left() == 0.0 && Y0.y.right() == 0.0, ErrorCode::boundary_violation,
          "solve_homogeneous: initial position must vanish at both ends");

  const TimeGrid grid = make_time_grid(T, settings.dt);
  const std::size_t every = resolve_store_every(settings.store_every, grid.steps);
  const MidpointStepper stepper(problem.gen, grid.dt, settings.linear_tol);
  const bool backward = direction == Direction::backward;
  const double eta1 = problem.eta_at_1();

  Trajectory traj;
  traj.dt = grid.dt;
  traj.steps = grid.steps;
  traj.store_every = every;
  traj.times.resize(grid.steps + 1);
  traj.trace_series.resize(grid.steps + 1);
  traj.flux_trace_series.resize(grid.steps + 1);

  WeightedVector y = Y0.y;
  WeightedVector v = Y0.v;
  v[0] = 0.0;
  v[v.size() - 1] = 0.0;
  // Backward in time: tau = T - t, so the velocity changes sign.
  if (backward) v = -1.0 * v;

  auto record = [&](std::size_t k) {
    // k counts steps in the integration direction; j is the time index.
    const std::size_t j = backward ? grid.steps - k : k;
    traj.trace_series[j] = problem.trace(y);
    traj.flux_trace_series[j] = problem.gen.boundary_flux(y) / eta1;
    if (should_store(k, grid.steps, every)) {
      traj.states.push_back({y, backward ? -1.0 * v : v, 0.0});
      traj.states.back().t = static_cast<double>(j) * grid.dt;
    }
  };

  record(0);
  for (std::size_t k = 1; k <= grid.steps; ++k) {
    stepper.step(y, v);
    record(k);
  }
  for (std::size_t j = 0; j <= grid.steps; ++j) {
    traj.times[j] = static_cast<double>(j) * grid.dt;
  }
  if (backward) std::reverse(traj.states.begin(), traj.states.end());
  return traj;
}

Trajectory solve_controlled(const WeightedVector& u0, const WeightedVector& u1,
                            std::span<const double> f, double T, const Problem& problem,
                            const SolveSettings& settings) {
  check_field(u0, problem, "solve_controlled");
  check_field(u1, problem, "solve_controlled");
  require(u0.left() == 0.0, ErrorCode::boundary_violation,
          "solve_controlled: u0 must vanish at x = 0");

  const TimeGrid grid = make_time_grid(T, settings.dt);
  require(f.size() == grid.steps + 1, ErrorCode::invalid_argument,
          "control has " + std::to_string(f.size()) + " samples, time grid needs " +
              std::to_string(grid.steps + 1));
  const std::size_t every = resolve_store_every(settings.store_every, grid.steps);
  const MidpointStepper stepper(problem.gen, grid.dt, settings.linear_tol);
  const double eta1 = problem.eta_at_1();
  const std::size_t n = problem.mesh.n_cells();

  Trajectory traj;
  traj.dt = grid.dt;
  traj.steps = grid.steps;
  traj.store_every = every;
  traj.times.resize(grid.steps + 1);
  traj.trace_series.resize(grid.steps + 1);
  traj.flux_trace_series.resize(grid.steps + 1);

  WeightedVector y = u0;
  WeightedVector v = u1;
  y[n] = f[0];
  v[0] = 0.0;
  v[n] = 0.0;

  auto record = [&](std::size_t k) {
    traj.times[k] = static_cast<double>(k) * grid.dt;
    traj.trace_series[k] = problem.trace(y);
    traj.flux_trace_series[k] = problem.gen.boundary_flux(y) / eta1;
    if (should_store(k, grid.steps, every)) {
      traj.states.push_back({y, v, traj.times[k]});
    }
  };

  record(0);
  for (std::size_t k = 1; k <= grid.steps; ++k) {
    stepper.step(y, v, 0.5 * (f[k - 1] + f[k]));
    y[n] = f[k];
    v[n] = (f[k] - f[k - 1]) / grid.dt;
    record(k);
  }
  return traj;
}

}  // namespace degwave

#include "hum.hpp"

#include <cmath>
#include <cstdio>

#include "error.hpp"

namespace degwave {

namespace {

SolveSettings endpoints_only(const SolveSettings& settings) {
  SolveSettings out = settings;
  out.store_every = 0;
  return out;
}

/// (M w) on interior nodes, zero at the boundary.
WeightedVector mass_times(const WeightedVector& w, const Problem& problem) {
  const auto& m = problem.gen.mass();
  WeightedVector out(w.size());
  for (std::size_t i = 1; i + 1 < w.size(); ++i) out[i] = m[i] * w[i];
  return out;
}

double interior_mass_dot(const WeightedVector& u, const WeightedVector& v,
                         const Problem& problem) {
  const auto& m = problem.gen.mass();
  double sum = 0.0;
  for (std::size_t i = 1; i + 1 < u.size(); ++i) sum += m[i] * u[i] * v[i];
  return sum;
}

WeightedVector interior_part(WeightedVector w) {
  w[0] = 0.0;
  w[w.size() - 1] = 0.0;
  return w;
}

void check_final_data(const FinalData& V, const Problem& problem) {
  require(V.first.size() == problem.n_nodes() && V.second.size() == problem.n_nodes(),
          ErrorCode::mesh_mismatch, "final data length does not match the mesh");
  require(V.first.left() == 0.0 && V.first.right() == 0.0, ErrorCode::boundary_violation,
          "final position must vanish at both boundary nodes");
}

void axpy_pair(double s, const FieldPair& x, FieldPair& y) {
  axpy(s, x.first, y.first);
  axpy(s, x.second, y.second);
}

FieldPair zero_pair(std::size_t n) { return {WeightedVector(n), WeightedVector(n)}; }

}  // namespace

double negative_norm(const WeightedVector& w, const Problem& problem) {
  const WeightedVector p = problem.gen.solve_stiffness(mass_times(w, problem));
  return std::sqrt(std::max(0.0, seminorm_eta(p, p, problem.ips)));
}

std::vector<double> observe_adjoint(const FinalData& V, double T, const Problem& problem,
                                    const SolveSettings& settings) {
  check_final_data(V, problem);
  const Trajectory traj = solve_homogeneous({V.first, V.second, T}, T, Direction::backward,
                                            problem, endpoints_only(settings));
  return traj.flux_trace_series;
}

double time_inner_product(const std::vector<double>& f, const std::vector<double>& g,
                          double dt, double eta_at_1) {
  require(f.size() == g.size(), ErrorCode::invalid_argument,
          "time_inner_product: series lengths differ");
  double sum = 0.0;
  for (std::size_t k = 0; k + 1 < f.size(); ++k) {
    sum += 0.25 * (f[k] + f[k + 1]) * (g[k] + g[k + 1]);
  }
  return eta_at_1 * dt * sum;
}

FinalData apply_gramian(const FinalData& V, double T, const Problem& problem,
                        const SolveSettings& settings) {
  const std::vector<double> f = observe_adjoint(V, T, problem, settings);
  const std::size_t n = problem.n_nodes();
  const WeightedVector zero(n);
  const Trajectory traj =
      solve_controlled(zero, zero, f, T, problem, endpoints_only(settings));
  const State& end = traj.final();
  WeightedVector p = problem.gen.solve_stiffness(mass_times(end.v, problem));
  return {-1.0 * p, interior_part(end.y)};
}

FinalData rhs_functional(const WeightedVector& u0, const WeightedVector& u1, double T,
                         const Problem& problem, const SolveSettings& settings) {
  require(u0.size() == problem.n_nodes() && u1.size() == problem.n_nodes(),
          ErrorCode::mesh_mismatch, "initial data length does not match the mesh");
  const Trajectory traj =
      solve_homogeneous({interior_part(u0), interior_part(u1), 0.0}, T, Direction::forward,
                        problem, endpoints_only(settings));
  const State& end = traj.final();
  WeightedVector p = problem.gen.solve_stiffness(mass_times(end.v, problem));
  return {p, -1.0 * interior_part(end.y)};
}

double rhs_functional_direct(const WeightedVector& u0, const WeightedVector& u1,
                             const FinalData& W, double T, const Problem& problem,
                             const SolveSettings& settings) {
  check_final_data(W, problem);
  const Trajectory traj = solve_homogeneous({W.first, W.second, T}, T, Direction::backward,
                                            problem, endpoints_only(settings));
  const State& start = traj.initial();
  return interior_mass_dot(u1, start.y, problem) - interior_mass_dot(u0, start.v, problem);
}

HUMSolution solve_hum(const WeightedVector& u0, const WeightedVector& u1, double T,
                      const CgSettings& cg, const Problem& problem,
                      const SolveSettings& settings) {
  require(cg.tol > 0.0, ErrorCode::invalid_argument, "CG tolerance must be positive");
  require(u0.size() == problem.n_nodes() && u1.size() == problem.n_nodes(),
          ErrorCode::mesh_mismatch, "initial data length does not match the mesh");
  require(u0.left() == 0.0, ErrorCode::boundary_violation, "u0 must vanish at x = 0");
  const WeightedVector u0i = interior_part(u0);
  const WeightedVector u1i = interior_part(u1);

  HUMSolution sol;
  const TimeGrid grid = make_time_grid(T, settings.dt);
  sol.dt = grid.dt;

  const DegeneracyReport report = classify_degeneracy(problem.profile, 256);
  sol.T0 = observability_time(report, problem.weights, problem.a_at_1()).T0;
  if (!(T > sol.T0)) {
    char buf[160];
    std::snprintf(buf, sizeof buf,
                  "T = %.6g does not exceed T0 = %.6g; coercivity is not guaranteed", T,
                  sol.T0);
    sol.warnings.emplace_back(buf);
  }

  const std::size_t n = problem.n_nodes();
  const FieldPair b = rhs_functional(u0i, u1i, T, problem, settings);
  const double bb = ip_H0(b, b, problem.ips);
  FieldPair x = zero_pair(n);

  if (bb > 0.0) {
    FieldPair r = b;
    FieldPair p = r;
    double rr = bb;
    while (sol.cg_iterations < cg.max_iter) {
      const FieldPair Ap = apply_gramian(p, T, problem, settings);
      const double pAp = ip_H0(p, Ap, problem.ips);
      require(pAp > 0.0, ErrorCode::cg_stagnation,
              "Gramian is not positive on the current search direction");
      const double alpha = rr / pAp;
      axpy_pair(alpha, p, x);
      axpy_pair(-alpha, Ap, r);
      const double rr_new = ip_H0(r, r, problem.ips);
      ++sol.cg_iterations;
      sol.cg_rel_residual = std::sqrt(rr_new / bb);
      sol.residual_history.push_back(sol.cg_rel_residual);
      if (sol.cg_rel_residual < cg.tol) {
        sol.converged = true;
        break;
      }
      const double beta = rr_new / rr;
      rr = rr_new;
      FieldPair next = r;
      axpy_pair(beta, p, next);
      p = std::move(next);
    }
  } else {
    sol.converged = true;
  }

  sol.V_bar = x;
  sol.f = observe_adjoint(x, T, problem, settings);
  const Trajectory traj =
      solve_controlled(u0i, u1i, sol.f, T, problem, endpoints_only(settings));
  const NullControlReport check = verify_null_control(sol, traj, u0i, u1i, problem);
  sol.final_u_norm = check.final_u_norm;
  sol.final_ut_norm = check.final_ut_norm;
  sol.control_L2_norm = check.control_L2_norm;
  sol.initial_norm = check.initial_norm;
  return sol;
}

void require_converged(const HUMSolution& sol) {
  if (sol.converged) return;
  std::string msg = "CG did not reach the tolerance in " +
                    std::to_string(sol.cg_iterations) + " iterations; last residuals:";
  const std::size_t from = sol.residual_history.size() > 5 ? sol.residual_history.size() - 5 : 0;
  for (std::size_t k = from; k < sol.residual_history.size(); ++k) {
    char buf[32];
    std::snprintf(buf, sizeof buf, " %.3e", sol.residual_history[k]);
    msg += buf;
  }
  throw Error(ErrorCode::cg_stagnation, msg);
}

NullControlReport verify_null_control(const HUMSolution& sol, const Trajectory& traj,
                                      const WeightedVector& u0, const WeightedVector& u1,
                                      const Problem& problem,
                                      const NullControlThresholds& thresholds) {
  require(!traj.states.empty(), ErrorCode::invalid_argument,
          "verify_null_control: trajectory has no stored states");
  const State& end = traj.final();
  const WeightedVector uT = interior_part(end.y);
  const WeightedVector utT = interior_part(end.v);

  NullControlReport out;
  out.final_u_norm = std::sqrt(interior_mass_dot(uT, uT, problem));
  out.final_ut_norm = negative_norm(utT, problem);
  out.control_L2_norm = std::sqrt(time_inner_product(sol.f, sol.f, traj.dt, 1.0));
  const double u1_neg = negative_norm(interior_part(u1), problem);
  out.initial_norm =
      std::sqrt(interior_mass_dot(interior_part(u0), interior_part(u0), problem) +
                u1_neg * u1_neg);
  if (out.initial_norm > 0.0) {
    out.cost_ratio = out.control_L2_norm * out.control_L2_norm /
                     (out.initial_norm * out.initial_norm);
    out.passed = out.final_u_norm < thresholds.u_rel * out.initial_norm &&
                 out.final_ut_norm < thresholds.ut_rel * out.initial_norm;
  } else {
    out.passed = out.final_u_norm == 0.0 && out.final_ut_norm == 0.0;
  }
  return out;
}

}  // namespace degwave

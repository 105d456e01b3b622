#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "evolution.hpp"

namespace degwave {

/// Final data (v(T), v_t(T)) of the adjoint problem. first vanishes at both
/// boundary nodes.
using FinalData = FieldPair;

/// Control observation of the backward adjoint solve from V:
/// tau_k = (boundary flux at t_k) / eta(1), k = 0..steps. This is the
/// discrete v_x(t, 1) that is exactly adjoint to the boundary lifting of the
/// midpoint scheme.
std::vector<double> observe_adjoint(const FinalData& V, double T, const Problem& problem,
                                    const SolveSettings& settings);

/// Time inner product eta(1) sum_k dt f_{k+1/2} g_{k+1/2} with midpoint
/// averages f_{k+1/2} = (f_k + f_{k+1}) / 2.
double time_inner_product(const std::vector<double>& f, const std::vector<double>& g,
                          double dt, double eta_at_1);

/// H0 Riesz representative of Lambda(V, .), where
/// Lambda(V, W) = eta(1) int v_x(t,1) w_x(t,1) dt in the discrete sense above.
/// Backward adjoint solve from V, forward controlled solve from rest driven by
/// its trace, then (p, u(T)) with S p = -M u_t(T).
FinalData apply_gramian(const FinalData& V, double T, const Problem& problem,
                        const SolveSettings& settings);

/// H0 Riesz representative of
///   L(W) = <u1, w(0)>_{1/sigma} - <u0, w_t(0)>_{1/sigma},
/// w the adjoint solution with w(T) = W. One forward homogeneous solve from
/// (u0, u1) gives (z_u, z_w) at T and the representative is (p, -z_u) with
/// S p = M z_w.
FinalData rhs_functional(const WeightedVector& u0, const WeightedVector& u1, double T,
                         const Problem& problem, const SolveSettings& settings);

/// L(W) evaluated directly from one backward solve from W.
double rhs_functional_direct(const WeightedVector& u0, const WeightedVector& u1,
                             const FinalData& W, double T, const Problem& problem,
                             const SolveSettings& settings);

struct CgSettings {
  double tol = 1e-8;  // on the H0-relative residual
  std::size_t max_iter = 400;
};

struct HUMSolution {
  std::vector<double> f;  // control samples at t_k
  FinalData V_bar;
  std::size_t cg_iterations = 0;
  double cg_rel_residual = 0.0;
  std::vector<double> residual_history;  // relative residual per iteration
  bool converged = false;
  double T0 = 0.0;
  std::vector<std::string> warnings;
  double dt = 0.0;
  double final_u_norm = 0.0;
  double final_ut_norm = 0.0;
  double control_L2_norm = 0.0;
  /// (||u0||^2_{1/sigma} + ||u1||^2_{-1})^{1/2}
  double initial_norm = 0.0;
};

/// Conjugate gradient in H0 on apply_gramian(V) = rhs_functional(u0, u1),
/// then f = observe_adjoint(V_bar) and one controlled solve for the final
/// norms. T <= T0 only adds a warning. A solve that does not reach cg.tol
/// returns with converged = false; see require_converged.
HUMSolution solve_hum(const WeightedVector& u0, const WeightedVector& u1, double T,
                      const CgSettings& cg, const Problem& problem,
                      const SolveSettings& settings);

/// Throws Error(cg_stagnation) listing the residual history tail.
void require_converged(const HUMSolution& sol);

struct NullControlThresholds {
  double u_rel = 1e-3;
  double ut_rel = 1e-2;
};

struct NullControlReport {
  double final_u_norm = 0.0;   // ||u(T)||_{1/sigma}
  double final_ut_norm = 0.0;  // (p^T S p)^{1/2}, S p = M u_t(T)
  double control_L2_norm = 0.0;
  double initial_norm = 0.0;
  double cost_ratio = 0.0;  // control_L2_norm^2 / initial_norm^2
  bool passed = false;
};

/// Recomputes the final-state norms from the controlled trajectory. Norms are
/// relative to initial_norm; the zero problem passes.
NullControlReport verify_null_control(const HUMSolution& sol, const Trajectory& traj,
                                      const WeightedVector& u0, const WeightedVector& u1,
                                      const Problem& problem,
                                      const NullControlThresholds& thresholds = {});

/// (p^T S p)^{1/2} with S p = M w on interior nodes: the discrete H^{-1} norm.
double negative_norm(const WeightedVector& w, const Problem& problem);

}  // namespace degwave

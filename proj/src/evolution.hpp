#pragma once

#include <cstddef>
#include <limits>
#include <span>
#include <vector>

#include "problem.hpp"

namespace degwave {

struct State {
  WeightedVector y;
  WeightedVector v;  // y_t
  double t = 0.0;
};

struct SolveSettings {
  static constexpr std::size_t kAutoStore = std::numeric_limits<std::size_t>::max();

  /// <= 0 selects T / 2048.
  double dt = 0.0;
  /// Relative residual accepted from each tridiagonal solve.
  double linear_tol = 1e-10;
  /// Keep every k-th state; 0 keeps only the endpoints; kAutoStore keeps at
  /// most 257 states.
  std::size_t store_every = kAutoStore;
};

/// Number of steps and the exact dt for horizon T. dt must divide T.
struct TimeGrid {
  std::size_t steps = 0;
  double dt = 0.0;
};

TimeGrid make_time_grid(double T, double dt);

struct Trajectory {
  double dt = 0.0;
  std::size_t steps = 0;
  std::size_t store_every = 1;
  std::vector<double> times;  // t_k = k dt, k = 0..steps
  std::vector<State> states;  // stored subset, increasing t, endpoints included
  /// Three-node one-sided y_x(t_k, 1).
  std::vector<double> trace_series;
  /// Boundary flux divided by eta(1); the adjoint-consistent trace.
  std::vector<double> flux_trace_series;

  const State& initial() const { return states.front(); }
  const State& final() const { return states.back(); }
};

/// Implicit midpoint for (y, v)' = (v, A y) (+ boundary input). One SPD
/// tridiagonal solve per step:
///   (M + dt^2/4 S) ybar = M (y + dt/2 v) + dt^2/4 g f_half
///   y+ = 2 ybar - y,   v+ = 4 (ybar - y)/dt - v
class MidpointStepper {
 public:
  MidpointStepper(const DiscreteGenerator& gen, double dt, double linear_tol);

  /// Advances interior values of y and v; boundary entries are left alone.
  void step(WeightedVector& y, WeightedVector& v, double f_half = 0.0) const;

  double dt() const { return dt_; }

 private:
  double dt_;
  double linear_tol_;
  std::vector<double> mass_;  // interior
  double coupling_last_;
  TridiagonalSolver system_;
};

State step_midpoint(const State& state, const Problem& problem, const SolveSettings& settings);

enum class Direction { forward, backward };

/// Homogeneous Dirichlet problem. For Direction::backward, Y0 is the datum at
/// time T and the solve runs by time reversal; the returned trajectory is
/// always ordered by increasing t in [0, T].
Trajectory solve_homogeneous(const State& Y0, double T, Direction direction,
                             const Problem& problem, const SolveSettings& settings);

/// u(t,0) = 0, u(t,1) = f(t) with f sampled at t_k (steps + 1 samples). The
/// boundary value over a step is (f_k + f_{k+1}) / 2.
Trajectory solve_controlled(const WeightedVector& u0, const WeightedVector& u1,
                            std::span<const double> f, double T, const Problem& problem,
                            const SolveSettings& settings);

/// 0.5 (ip_L2_sigma(v,v) + seminorm_eta(y,y))
double discrete_energy(const State& s, const InnerProductSet& ips);

}  // namespace degwave

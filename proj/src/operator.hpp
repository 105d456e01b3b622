#pragma once

#include <array>
#include <vector>

#include "mesh_spaces.hpp"
#include "tridiagonal.hpp"

namespace degwave {

/// A y = sigma (eta y_x)_x in flux form on a graded mesh.
///
/// At interior node i
///   (A y)_i = [eta_{i+1/2} (y_{i+1}-y_i)/h_{i+1/2} - eta_{i-1/2} (y_i-y_{i-1})/h_{i-1/2}] / m_i
/// with m_i the lumped L2_{1/sigma} node mass, i.e. sigma_i / d_i is replaced by
/// 1 / m_i. This makes A self-adjoint and nonpositive in ip_L2_sigma.
class DiscreteGenerator {
 public:
  explicit DiscreteGenerator(const InnerProductSet& ips, bool dirichlet_left = true,
                             bool dirichlet_right = true);

  std::size_t n_nodes() const { return mass_.size(); }
  std::size_t n_interior() const { return mass_.size() - 2; }

  /// Throws boundary_violation when y is nonzero at a flagged endpoint. An
  /// unflagged endpoint value enters the stencil as Dirichlet data.
  WeightedVector apply(const WeightedVector& y) const;

  /// Contribution of u(1) = f_value to (A u) at node n-1.
  WeightedVector lift_dirichlet(double f_value) const;

  /// eta_{n-1/2} / h_{n-1/2}: the coupling of the right boundary value into
  /// the stiffness row of node n-1.
  double boundary_coupling() const { return coupling_.back(); }

  /// eta_{n-1/2} (y_n - y_{n-1}) / h_{n-1/2}, the discrete boundary flux at
  /// x = 1. Divided by eta(1) it is the trace that is the exact adjoint of
  /// lift_dirichlet under the midpoint time integrator.
  double boundary_flux(const WeightedVector& y) const;

  /// Interior-node mass (length n-1) and the stiffness tridiagonal.
  const std::vector<double>& mass() const { return mass_; }
  std::vector<double> interior_mass() const;
  /// Stiffness S on interior nodes: y^T S y = seminorm_eta(y, y).
  std::vector<double> stiffness_diag() const;
  std::vector<double> stiffness_off() const;

  /// Solves S p = rhs on interior nodes, p zero at the boundary.
  WeightedVector solve_stiffness(const WeightedVector& rhs_interior) const;

  bool dirichlet_left() const { return dirichlet_left_; }
  bool dirichlet_right() const { return dirichlet_right_; }

 private:
  std::vector<double> mass_;      // node mass, length n+1
  std::vector<double> coupling_;  // eta_mid / h per cell, length n
  bool dirichlet_left_;
  bool dirichlet_right_;
  TridiagonalSolver stiffness_;
};

/// One-sided derivative at x = 1 from the last three nodes, exact for
/// quadratics on any spacing.
class TraceExtractor {
 public:
  explicit TraceExtractor(const GradedMesh& mesh);

  double operator()(const WeightedVector& y) const;
  /// Weights of y_{n-2}, y_{n-1}, y_n.
  const std::array<double, 3>& coefficients() const { return coeffs_; }

 private:
  std::array<double, 3> coeffs_{};
};

}  // namespace degwave

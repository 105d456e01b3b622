#pragma once

#include <cstddef>
#include <vector>

#include "coefficients.hpp"

namespace degwave {

/// Nodes x_i = (i/n)^p on [0, 1], clustered at the degenerate endpoint.
class GradedMesh {
 public:
  /// n_cells >= 2, grading_p in [1, 4].
  static GradedMesh graded(std::size_t n_cells, double grading_p);

  std::size_t n_cells() const { return widths_.size(); }
  std::size_t n_nodes() const { return nodes_.size(); }
  double grading_p() const { return grading_p_; }

  const std::vector<double>& nodes() const { return nodes_; }
  const std::vector<double>& midpoints() const { return midpoints_; }
  const std::vector<double>& widths() const { return widths_; }
  /// (h_{i-1/2} + h_{i+1/2}) / 2 at interior nodes; half cells at the ends.
  const std::vector<double>& dual_widths() const { return dual_widths_; }

  bool same_as(const GradedMesh& other) const {
    return nodes_ == other.nodes_;
  }

 private:
  double grading_p_ = 1.0;
  std::vector<double> nodes_;
  std::vector<double> midpoints_;
  std::vector<double> widths_;
  std::vector<double> dual_widths_;
};

/// Nodal values on a GradedMesh (length n_cells + 1).
struct WeightedVector {
  std::vector<double> values;

  WeightedVector() = default;
  explicit WeightedVector(std::size_t n, double fill = 0.0) : values(n, fill) {}
  explicit WeightedVector(std::vector<double> v) : values(std::move(v)) {}

  std::size_t size() const { return values.size(); }
  double left() const { return values.front(); }
  double right() const { return values.back(); }
  double& operator[](std::size_t i) { return values[i]; }
  double operator[](std::size_t i) const { return values[i]; }

  template <class F>
  static WeightedVector sample(const GradedMesh& mesh, F&& f) {
    WeightedVector out(mesh.n_nodes());
    for (std::size_t i = 0; i < mesh.n_nodes(); ++i) out[i] = f(mesh.nodes()[i]);
    return out;
  }
};

WeightedVector operator+(const WeightedVector& u, const WeightedVector& v);
WeightedVector operator-(const WeightedVector& u, const WeightedVector& v);
WeightedVector operator*(double s, const WeightedVector& u);
/// y += s * x
void axpy(double s, const WeightedVector& x, WeightedVector& y);

/// Quadrature weights of the weighted spaces, all taken at cell midpoints so
/// that 1/sigma is never evaluated at x = 0.
struct InnerProductSet {
  GradedMesh mesh;
  std::vector<double> w_sigma_mid;  // h_i / sigma(m_i)
  std::vector<double> w_eta_mid;    // h_i * eta(m_i)
  /// Row-lumped nodal mass of the L2_{1/sigma} form:
  /// (w_sigma_mid[i-1] + w_sigma_mid[i]) / 2.
  std::vector<double> node_mass;
};

InnerProductSet build_inner_products(const GradedMesh& mesh, const WeightPair& weights);

/// <u,v>_{1/sigma} = sum_i w_sigma_mid[i] (u_i v_i + u_{i+1} v_{i+1}) / 2.
double ip_L2_sigma(const WeightedVector& u, const WeightedVector& v,
                   const InnerProductSet& ips);

/// sum_i w_eta_mid[i] (du_i/h_i)(dv_i/h_i)
double seminorm_eta(const WeightedVector& u, const WeightedVector& v,
                    const InnerProductSet& ips);

/// sum_i h_i (du_i/h_i)(dv_i/h_i)
double seminorm_plain(const WeightedVector& u, const WeightedVector& v,
                      const InnerProductSet& ips);

/// Pair (position, velocity) in H^1_{1/sigma} x L^2_{1/sigma}.
struct FieldPair {
  WeightedVector first;
  WeightedVector second;
};

/// Requires both first components to vanish at the boundary nodes.
double ip_H0(const FieldPair& U, const FieldPair& V, const InnerProductSet& ips);

/// ip_L2_sigma(v,v) / sum h (v')^2.
double hardy_quotient(const WeightedVector& v, const InnerProductSet& ips);
/// Same with the eta-weighted gradient in the denominator.
double hardy_quotient_eta(const WeightedVector& v, const InnerProductSet& ips);

}  // namespace degwave

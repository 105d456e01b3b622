#include "operator.hpp"

#include "error.hpp"

namespace degwave {

namespace {

TridiagonalSolver make_stiffness(const std::vector<double>& coupling) {
  const std::size_t n = coupling.size();  // cells
  std::vector<double> diag(n - 1), off(n - 2);
  for (std::size_t i = 1; i < n; ++i) diag[i - 1] = coupling[i - 1] + coupling[i];
  for (std::size_t i = 1; i + 1 < n; ++i) off[i - 1] = -coupling[i];
  return TridiagonalSolver(std::move(diag), std::move(off));
}

std::vector<double> couplings(const InnerProductSet& ips) {
  const auto& h = ips.mesh.widths();
  std::vector<double> c(h.size());
  for (std::size_t i = 0; i < h.size(); ++i) c[i] = ips.w_eta_mid[i] / (h[i] * h[i]);
  return c;
}

}  // namespace

DiscreteGenerator::DiscreteGenerator(const InnerProductSet& ips, bool dirichlet_left,
                                     bool dirichlet_right)
    : mass_(ips.node_mass),
      coupling_(couplings(ips)),
      dirichlet_left_(dirichlet_left),
      dirichlet_right_(dirichlet_right),
      stiffness_(make_stiffness(coupling_)) {}

WeightedVector DiscreteGenerator::apply(const WeightedVector& y) const {
  const std::size_t n = coupling_.size();
  require(y.size() == n + 1, ErrorCode::mesh_mismatch, "apply_A: field length mismatch");
  require(!dirichlet_left_ || y.left() == 0.0, ErrorCode::boundary_violation,
          "apply_A: nonzero value at the left Dirichlet node");
  require(!dirichlet_right_ || y.right() == 0.0, ErrorCode::boundary_violation,
          "apply_A: nonzero value at the right Dirichlet node");

  WeightedVector out(n + 1);
  for (std::size_t i = 1; i < n; ++i) {
    const double flux_right = coupling_[i] * (y[i + 1] - y[i]);
    const double flux_left = coupling_[i - 1] * (y[i] - y[i - 1]);
    out[i] = (flux_right - flux_left) / mass_[i];
  }
  return out;
}

WeightedVector DiscreteGenerator::lift_dirichlet(double f_value) const {
  const std::size_t n = coupling_.size();
  WeightedVector out(n + 1);
  out[n - 1] = coupling_[n - 1] * f_value / mass_[n - 1];
  return out;
}

double DiscreteGenerator::boundary_flux(const WeightedVector& y) const {
  const std::size_t n = coupling_.size();
  return coupling_[n - 1] * (y[n] - y[n - 1]);
}

std::vector<double> DiscreteGenerator::interior_mass() const {
  return {mass_.begin() + 1, mass_.end() - 1};
}

std::vector<double> DiscreteGenerator::stiffness_diag() const {
  const std::size_t n = coupling_.size();
  std::vector<double> d(n - 1);
  for (std::size_t i = 1; i < n; ++i) d[i - 1] = coupling_[i - 1] + coupling_[i];
  return d;
}

std::vector<double> DiscreteGenerator::stiffness_off() const {
  const std::size_t n = coupling_.size();
  std::vector<double> o(n > 2 ? n - 2 : 0);
  for (std::size_t i = 1; i + 1 < n; ++i) o[i - 1] = -coupling_[i];
  return o;
}

WeightedVector DiscreteGenerator::solve_stiffness(const WeightedVector& rhs) const {
  const std::size_t n = coupling_.size();
  require(rhs.size() == n + 1, ErrorCode::mesh_mismatch, "stiffness rhs length mismatch");
  WeightedVector out(n + 1);
  std::vector<double> x(rhs.values.begin() + 1, rhs.values.end() - 1);
  stiffness_.solve(x);
  std::copy(x.begin(), x.end(), out.values.begin() + 1);
  return out;
}

TraceExtractor::TraceExtractor(const GradedMesh& mesh) {
  const auto& x = mesh.nodes();
  const std::size_t n = x.size() - 1;
  require(n >= 2, ErrorCode::invalid_argument, "trace stencil needs three nodes");
  // Derivative at x_n of the quadratic through (x_{n-2}, x_{n-1}, x_n).
  const double x0 = x[n - 2], x1 = x[n - 1], x2 = x[n];
  coeffs_[0] = (x2 - x1) / ((x0 - x1) * (x0 - x2));
  coeffs_[1] = (x2 - x0) / ((x1 - x0) * (x1 - x2));
  coeffs_[2] = 1.0 / (x2 - x0) + 1.0 / (x2 - x1);
}

double TraceExtractor::operator()(const WeightedVector& y) const {
  const std::size_t n = y.size() - 1;
  return coeffs_[0] * y[n - 2] + coeffs_[1] * y[n - 1] + coeffs_[2] * y[n];
}

}  // namespace degwave

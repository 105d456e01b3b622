#include "mesh_spaces.hpp"

#include <cmath>
#include <string>

#include "error.hpp"

namespace degwave {

GradedMesh GradedMesh::graded(std::size_t n_cells, double grading_p) {
  require(n_cells >= 2, ErrorCode::invalid_argument, "mesh needs at least 2 cells");
  require(grading_p >= 1.0 && grading_p <= 4.0, ErrorCode::invalid_argument,
          "grading exponent must lie in [1, 4], got " + std::to_string(grading_p));

  GradedMesh m;
  m.grading_p_ = grading_p;
  const double n = static_cast<double>(n_cells);
  m.nodes_.resize(n_cells + 1);
  for (std::size_t i = 0; i <= n_cells; ++i) {
    m.nodes_[i] = std::pow(static_cast<double>(i) / n, grading_p);
  }
  m.nodes_.front() = 0.0;
  m.nodes_.back() = 1.0;

  m.widths_.resize(n_cells);
  m.midpoints_.resize(n_cells);
  for (std::size_t i = 0; i < n_cells; ++i) {
    m.widths_[i] = m.nodes_[i + 1] - m.nodes_[i];
    m.midpoints_[i] = 0.5 * (m.nodes_[i] + m.nodes_[i + 1]);
  }
  m.dual_widths_.resize(n_cells + 1);
  m.dual_widths_.front() = 0.5 * m.widths_.front();
  m.dual_widths_.back() = 0.5 * m.widths_.back();
  for (std::size_t i = 1; i < n_cells; ++i) {
    m.dual_widths_[i] = 0.5 * (m.widths_[i - 1] + m.widths_[i]);
  }
  return m;
}

WeightedVector operator+(const WeightedVector& u, const WeightedVector& v) {
  WeightedVector out(u.size());
  for (std::size_t i = 0; i < u.size(); ++i) out[i] = u[i] + v[i];
  return out;
}

WeightedVector operator-(const WeightedVector& u, const WeightedVector& v) {
  WeightedVector out(u.size());
  for (std::size_t i = 0; i < u.size(); ++i) out[i] = u[i] - v[i];
  return out;
}

WeightedVector operator*(double s, const WeightedVector& u) {
  WeightedVector out(u.size());
  for (std::size_t i = 0; i < u.size(); ++i) out[i] = s * u[i];
  return out;
}

void axpy(double s, const WeightedVector& x, WeightedVector& y) {
  for (std::size_t i = 0; i < x.size(); ++i) y[i] += s * x[i];
}

InnerProductSet build_inner_products(const GradedMesh& mesh, const WeightPair& weights) {
  InnerProductSet ips;
  ips.mesh = mesh;
  const std::size_t n = mesh.n_cells();
  ips.w_sigma_mid.resize(n);
  ips.w_eta_mid.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double m = mesh.midpoints()[i];
    const double h = mesh.widths()[i];
    const double eta = weights.eta(m);
    const double sigma = weights.sigma(m);
    ips.w_sigma_mid[i] = h / sigma;
    ips.w_eta_mid[i] = h * eta;
    require(std::isfinite(ips.w_sigma_mid[i]) && ips.w_sigma_mid[i] > 0.0 &&
                std::isfinite(ips.w_eta_mid[i]) && ips.w_eta_mid[i] > 0.0,
            ErrorCode::hypothesis_violation,
            "non-finite weight at midpoint " + std::to_string(m));
  }
  ips.node_mass.assign(n + 1, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    ips.node_mass[i] += 0.5 * ips.w_sigma_mid[i];
    ips.node_mass[i + 1] += 0.5 * ips.w_sigma_mid[i];
  }
  return ips;
}

namespace {

void check_size(const WeightedVector& u, const InnerProductSet& ips) {
  require(u.size() == ips.mesh.n_nodes(), ErrorCode::mesh_mismatch,
          "field of length " + std::to_string(u.size()) + " on a mesh with " +
              std::to_string(ips.mesh.n_nodes()) + " nodes");
}

}  // namespace

double ip_L2_sigma(const WeightedVector& u, const WeightedVector& v,
                   const InnerProductSet& ips) {
  check_size(u, ips);
  check_size(v, ips);
  double sum = 0.0;
  for (std::size_t i = 0; i < ips.node_mass.size(); ++i) {
    sum += ips.node_mass[i] * u[i] * v[i];
  }
  return sum;
}

double seminorm_eta(const WeightedVector& u, const WeightedVector& v,
                    const InnerProductSet& ips) {
  check_size(u, ips);
  check_size(v, ips);
  const auto& h = ips.mesh.widths();
  double sum = 0.0;
  for (std::size_t i = 0; i < h.size(); ++i) {
    sum += ips.w_eta_mid[i] * (u[i + 1] - u[i]) * (v[i + 1] - v[i]) / (h[i] * h[i]);
  }
  return sum;
}

double seminorm_plain(const WeightedVector& u, const WeightedVector& v,
                      const InnerProductSet& ips) {
  check_size(u, ips);
  check_size(v, ips);
  const auto& h = ips.mesh.widths();
  double sum = 0.0;
  for (std::size_t i = 0; i < h.size(); ++i) {
    sum += (u[i + 1] - u[i]) * (v[i + 1] - v[i]) / h[i];
  }
  return sum;
}

double ip_H0(const FieldPair& U, const FieldPair& V, const InnerProductSet& ips) {
  for (const auto* f : {&U.first, &V.first}) {
    check_size(*f, ips);
    require(f->left() == 0.0 && f->right() == 0.0, ErrorCode::boundary_violation,
            "H0 position component must vanish at both boundary nodes");
  }
  return seminorm_eta(U.first, V.first, ips) + ip_L2_sigma(U.second, V.second, ips);
}

namespace {

void require_boundary_vanishing(const WeightedVector& v) {
  require(v.size() >= 2 && v.left() == 0.0 && v.right() == 0.0, ErrorCode::boundary_violation,
          "hardy quotient needs a field vanishing at both boundary nodes");
}

}  // namespace

double hardy_quotient(const WeightedVector& v, const InnerProductSet& ips) {
  require_boundary_vanishing(v);
  const double den = seminorm_plain(v, v, ips);
  require(den > 0.0, ErrorCode::invalid_argument, "hardy quotient of the zero field");
  return ip_L2_sigma(v, v, ips) / den;
}

double hardy_quotient_eta(const WeightedVector& v, const InnerProductSet& ips) {
  require_boundary_vanishing(v);
  const double den = seminorm_eta(v, v, ips);
  require(den > 0.0, ErrorCode::invalid_argument, "hardy quotient of the zero field");
  return ip_L2_sigma(v, v, ips) / den;
}

}  // namespace degwave

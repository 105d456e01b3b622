#pragma once

#include <cstddef>

#include "coefficients.hpp"
#include "mesh_spaces.hpp"
#include "operator.hpp"

namespace degwave {

/// Everything the solvers need for one (profile, mesh) pair. Immutable after
/// construction and safe to share across threads.
struct Problem {
  CoefficientProfile profile;
  WeightPair weights;
  GradedMesh mesh;
  InnerProductSet ips;
  DiscreteGenerator gen;
  TraceExtractor trace;

  static constexpr std::size_t kDefaultQuadrature = 1024;

  static Problem build(const CoefficientProfile& profile, std::size_t n_cells,
                       double grading_p, std::size_t n_quad = kDefaultQuadrature);

  double eta_at_1() const { return weights.eta_at_1(); }
  double a_at_1() const { return profile.a(1.0); }
  std::size_t n_nodes() const { return mesh.n_nodes(); }
};

}  // namespace degwave

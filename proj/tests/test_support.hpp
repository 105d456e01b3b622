#pragma once

#include <cmath>
#include <numbers>

#include "evolution.hpp"

namespace degwave::testing {

inline WeightedVector sine_field(const GradedMesh& mesh, double k = 1.0) {
  WeightedVector u = WeightedVector::sample(
      mesh, [k](double x) { return std::sin(k * std::numbers::pi * x); });
  u[0] = 0.0;
  u[u.size() - 1] = 0.0;
  return u;
}

inline double max_abs_diff(const WeightedVector& a, const WeightedVector& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

inline double max_abs(const WeightedVector& a) {
  double m = 0.0;
  for (double v : a.values) m = std::max(m, std::abs(v));
  return m;
}

/// int_0^1 x^(p-1) (1-x)^(q-1) dx
inline double beta(double p, double q) {
  return std::tgamma(p) * std::tgamma(q) / std::tgamma(p + q);
}

}  // namespace degwave::testing

#include "quadrature.hpp"

#include <cmath>
#include <numbers>

namespace degwave::quadrature {

GaussRule gauss_legendre_rule(int points) {
  GaussRule rule;
  rule.nodes.resize(points);
  rule.weights.resize(points);
  for (int i = 0; i < points; ++i) {
    // Chebyshev-like initial guess, then Newton on P_n.
    double x = std::cos(std::numbers::pi * (i + 0.75) / (points + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0;
      double p1 = x;
      for (int k = 2; k <= points; ++k) {
        const double pk = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = pk;
      }
      dp = points * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    rule.nodes[i] = x;
    rule.weights[i] = 2.0 / ((1.0 - x * x) * dp * dp);
  }
  return rule;
}

namespace {

const GaussRule& rule10() {
  static const GaussRule rule = gauss_legendre_rule(10);
  return rule;
}

}  // namespace

double gauss_legendre(const Integrand& f, double lo, double hi) {
  const auto& rule = rule10();
  const double half = 0.5 * (hi - lo);
  const double mid = 0.5 * (hi + lo);
  double sum = 0.0;
  for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
    sum += rule.weights[i] * f(mid + half * rule.nodes[i]);
  }
  return sum * half;
}

SingularIntegral integrate_from_zero(const Integrand& f, double upper) {
  constexpr int kMaxPanels = 90;
  constexpr int kMinPanels = 4;
  // Panels below upper * 2^-24 are deep enough that a non-decaying sequence
  // is no longer a local bump of f.
  constexpr int kDivergenceCheckPanel = 24;

  SingularIntegral out;
  if (upper <= 0.0) {
    out.converged = true;
    return out;
  }

  double sum = 0.0;
  double prev = 0.0;
  double prev_ratio = 0.0;
  double older_ratio = 0.0;
  double hi = upper;
  for (int j = 0; j < kMaxPanels; ++j) {
    const double lo = 0.5 * hi;
    const double c = gauss_legendre(f, lo, hi);
    if (!std::isfinite(c)) return out;
    sum += c;

    const double ratio = (prev != 0.0) ? c / prev : 0.0;
    if (j >= kMinPanels && std::abs(c) <= 1e-17 * std::abs(sum)) {
      out.value = sum;
      out.converged = true;
      out.tail_ratio = ratio;
      return out;
    }
    if (j >= kDivergenceCheckPanel && prev != 0.0) {
      // Pure power behaviour x^p near 0 gives a constant ratio 2^-(p+1).
      if (ratio >= 1.0 - 1e-9) {
        out.tail_ratio = ratio;
        out.value = sum;
        return out;
      }
    }
    older_ratio = prev_ratio;
    prev_ratio = ratio;
    prev = c;
    hi = lo;
  }

  // Geometric tail closure, only trusted when the ratio has settled.
  const double ratio = prev_ratio;
  out.tail_ratio = ratio;
  const bool settled = std::abs(ratio - older_ratio) <= 1e-6 * std::abs(ratio);
  if (settled && std::abs(ratio) < 1.0 - 1e-9) {
    out.value = sum + prev * ratio / (1.0 - ratio);
    out.converged = true;
  } else {
    out.value = sum;
  }
  return out;
}

}  // namespace degwave::quadrature

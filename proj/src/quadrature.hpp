#pragma once

#include <functional>
#include <vector>

namespace degwave::quadrature {

using Integrand = std::function<double(double)>;

/// Gauss-Legendre rule on [-1, 1], nodes computed by Newton iteration on P_n.
struct GaussRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

GaussRule gauss_legendre_rule(int points);

/// 10-point Gauss-Legendre on [lo, hi].
double gauss_legendre(const Integrand& f, double lo, double hi);

/// Result of integrating a function with a possible integrable singularity at
/// x = 0 over (0, upper].
struct SingularIntegral {
  double value = 0.0;
  bool converged = false;
  /// Observed ratio between consecutive dyadic panel contributions near 0.
  double tail_ratio = 0.0;
};

/// Integrates over dyadic panels [upper 2^-(j+1), upper 2^-j] and closes the
/// remaining tail geometrically. A non-decaying panel sequence (ratio >= 1)
/// means the integral diverges at 0 and `converged` is false.
SingularIntegral integrate_from_zero(const Integrand& f, double upper);

}  // namespace degwave::quadrature

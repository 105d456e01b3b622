#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace degwave {

/// Symmetric tridiagonal matrix factored once (Thomas algorithm), solved many
/// times. Every pivot must be positive; the systems assembled here are SPD.
class TridiagonalSolver {
 public:
  /// diag has length n, off has length n - 1 (sub = super diagonal).
  TridiagonalSolver(std::vector<double> diag, std::vector<double> off);

  std::size_t size() const { return diag_.size(); }

  /// Solves in place. When tol > 0 the residual is checked and one step of
  /// iterative refinement is applied if it exceeds tol * |rhs|.
  void solve(std::span<double> rhs_and_x, double tol = 0.0) const;

  /// y = A x
  void multiply(std::span<const double> x, std::span<double> y) const;

 private:
  void substitute(std::span<double> x) const;

  std::vector<double> diag_;
  std::vector<double> off_;
  std::vector<double> c_prime_;
  std::vector<double> inv_pivot_;
};

}  // namespace degwave

#include "tridiagonal.hpp"

#include <cmath>

#include "error.hpp"

namespace degwave {

TridiagonalSolver::TridiagonalSolver(std::vector<double> diag, std::vector<double> off)
    : diag_(std::move(diag)), off_(std::move(off)) {
  const std::size_t n = diag_.size();
  require(n >= 1 && off_.size() + 1 == n, ErrorCode::invalid_argument,
          "tridiagonal size mismatch");
  c_prime_.assign(n, 0.0);
  inv_pivot_.assign(n, 0.0);
  double pivot = diag_[0];
  for (std::size_t i = 0; i < n; ++i) {
    if (i > 0) pivot = diag_[i] - off_[i - 1] * c_prime_[i - 1];
    if (!(pivot > 0.0) || !std::isfinite(pivot)) {
      throw Error(ErrorCode::solver_breakdown,
                  "non-positive pivot in tridiagonal factorisation at row " +
                      std::to_string(i));
    }
    inv_pivot_[i] = 1.0 / pivot;
    if (i + 1 < n) c_prime_[i] = off_[i] * inv_pivot_[i];
  }
}

void TridiagonalSolver::substitute(std::span<double> x) const {
  const std::size_t n = diag_.size();
  // Forward sweep
  x[0] *= inv_pivot_[0];
  for (std::size_t i = 1; i < n; ++i) {
    x[i] = (x[i] - off_[i - 1] * x[i - 1]) * inv_pivot_[i];
  }
  // Back substitution
  for (std::size_t i = n - 1; i > 0; --i) {
    x[i - 1] -= c_prime_[i - 1] * x[i];
  }
}

void TridiagonalSolver::multiply(std::span<const double> x, std::span<double> y) const {
  const std::size_t n = diag_.size();
  for (std::size_t i = 0; i < n; ++i) {
    double s = diag_[i] * x[i];
    if (i > 0) s += off_[i - 1] * x[i - 1];
    if (i + 1 < n) s += off_[i] * x[i + 1];
    y[i] = s;
  }
}

void TridiagonalSolver::solve(std::span<double> x, double tol) const {
  require(x.size() == diag_.size(), ErrorCode::invalid_argument,
          "tridiagonal rhs size mismatch");
  if (tol <= 0.0) {
    substitute(x);
    return;
  }
  const std::vector<double> rhs(x.begin(), x.end());
  substitute(x);

  auto residual = [&](std::vector<double>& r) {
    multiply(x, r);
    double rn = 0.0, bn = 0.0;
    for (std::size_t i = 0; i < r.size(); ++i) {
      r[i] = rhs[i] - r[i];
      rn += r[i] * r[i];
      bn += rhs[i] * rhs[i];
    }
    return std::sqrt(rn) <= tol * std::sqrt(bn);
  };

  std::vector<double> r(x.size());
  if (residual(r)) return;
  substitute(r);
  for (std::size_t i = 0; i < x.size(); ++i) x[i] += r[i];
  if (!residual(r)) {
    throw Error(ErrorCode::solver_breakdown,
                "tridiagonal residual above tolerance after refinement");
  }
}

}  // namespace degwave

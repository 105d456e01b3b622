#include "random_fields.hpp"

#include <cmath>
#include <numbers>

namespace degwave {

std::uint64_t LinearRng::next_u64() {
  state_ = state_ * 6364136223846793005ULL + 1442695040888963407ULL;
  return state_;
}

double LinearRng::uniform() {
  // (k + 0.5) / 2^53 keeps log() away from zero.
  return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
}

double LinearRng::normal() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  const double r = std::sqrt(-2.0 * std::log(uniform()));
  const double theta = 2.0 * std::numbers::pi * uniform();
  spare_ = r * std::sin(theta);
  has_spare_ = true;
  return r * std::cos(theta);
}

std::uint64_t member_seed(std::uint64_t seed, std::uint64_t k) {
  return seed + k * 0x9E3779B97F4A7C15ULL;
}

namespace {

WeightedVector smooth_field(LinearRng& rng, std::size_t n_nodes) {
  WeightedVector u(n_nodes);
  for (std::size_t i = 0; i < n_nodes; ++i) u[i] = rng.normal();
  u[0] = 0.0;
  u[n_nodes - 1] = 0.0;
  WeightedVector next = u;
  for (int sweep = 0; sweep < 5; ++sweep) {
    for (std::size_t i = 1; i + 1 < n_nodes; ++i) {
      next[i] = 0.5 * u[i] + 0.25 * (u[i - 1] + u[i + 1]);
    }
    std::swap(u, next);
  }
  return u;
}

}  // namespace

FieldPair random_h0_pair(const InnerProductSet& ips, std::uint64_t seed) {
  LinearRng rng(seed);
  const std::size_t n = ips.mesh.n_nodes();
  FieldPair out{smooth_field(rng, n), smooth_field(rng, n)};
  const double norm = std::sqrt(ip_H0(out, out, ips));
  out.first = (1.0 / norm) * out.first;
  out.second = (1.0 / norm) * out.second;
  return out;
}

}  // namespace degwave

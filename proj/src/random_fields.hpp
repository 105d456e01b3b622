#pragma once

#include <cstdint>

#include "mesh_spaces.hpp"

namespace degwave {

/// 64-bit linear congruential generator (Knuth's MMIX constants, modulus
/// 2^64). Uniforms use the top 53 bits and normals use Box-Muller, so a
/// seed reproduces the same stream in any language.
class LinearRng {
 public:
  explicit LinearRng(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next_u64();
  /// Uniform on (0, 1).
  double uniform();
  double normal();

 private:
  std::uint64_t state_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

/// Seed of member k of an ensemble started from `seed`.
std::uint64_t member_seed(std::uint64_t seed, std::uint64_t k);

/// Random pair (y, v) in the discrete H0: nodal standard normals, five damped
/// Jacobi sweeps u_i <- u_i/2 + (u_{i-1} + u_{i+1})/4, zero boundary values,
/// then scaled to unit H0 norm (so the energy is 1/2).
FieldPair random_h0_pair(const InnerProductSet& ips, std::uint64_t seed);

}  // namespace degwave

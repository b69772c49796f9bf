#pragma once

#include <cstdint>
#include <limits>
#include <string_view>

#include "fanetsim/sim_time.hpp"

namespace fanetsim {

/// splitmix64 finalizer.
constexpr std::uint64_t mix64(std::uint64_t z)
{
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// FNV-1a over the tag bytes; stable across platforms.
constexpr std::uint64_t hash_tag(std::string_view tag)
{
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (char c : tag) {
    h ^= static_cast<unsigned char>(c);
    h *= 0x100000001b3ULL;
  }
  return h;
}

/**
 * splitmix64 generator seeded from a (master seed, node, purpose) triple.
 *
 * Every consumer of randomness owns its own stream, so adding draws in one
 * place never shifts the values seen elsewhere. Conversions to floating point
 * are done here rather than through <random> distributions, whose output is
 * implementation-defined.
 */
class RandomStream {
public:
  using result_type = std::uint64_t;

  RandomStream(std::uint64_t master_seed, NodeId node, std::string_view purpose);

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }
  result_type operator()() { return next_u64(); }

  std::uint64_t next_u64();
  /// Uniform in [0, 1) with 53 bits of resolution.
  double uniform01();
  /// Uniform in [lo, hi]; returns lo exactly when lo == hi.
  double uniform(double lo, double hi);
  /// Uniform integer in [0, bound); bound must be > 0.
  std::uint64_t below(std::uint64_t bound);

  std::uint64_t state() const { return state_; }

private:
  std::uint64_t state_;
};

}  // namespace fanetsim

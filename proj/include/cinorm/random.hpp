#pragma once

#include <cstdint>
#include <random>

#include "cinorm/group.hpp"

namespace cinorm {

std::uint64_t splitmix64(std::uint64_t x);

/// Seeded stream. The i-th sample of a run uses `Rng::for_sample(seed, i)`,
/// so results never depend on how samples are split across threads.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(splitmix64(seed)) {}
  static Rng for_sample(std::uint64_t seed, std::uint64_t index) { return Rng(splitmix64(seed) ^ splitmix64(~index)); }

  std::uint64_t next() { return engine_(); }
  /// Uniform in [0, n) without library-specific distribution code.
  std::uint64_t below(std::uint64_t n);
  std::int64_t between(std::int64_t lo, std::int64_t hi);
  bool coin() { return (next() >> 63) != 0; }

 private:
  std::mt19937_64 engine_;
};

/// Random element; `size` bounds word lengths, supports and exponents for
/// infinite families.
Element random_element(const Group& g, Rng& rng, int size = 6);

/// Random reduced word of exact length `length` in a free group.
Element random_reduced_word(const Group& g, Rng& rng, int length);

}  // namespace cinorm

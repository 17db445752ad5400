#pragma once

#include <cstdint>
#include <vector>

namespace pbs {

/// Deterministic 64-bit generator (splitmix64). All sampling helpers are
/// implemented here instead of <random> distributions so that streams are
/// bit-reproducible across standard library implementations.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next_u64();

  /// Uniform in [0, 1) with 53 bits of precision.
  double next_double();

  /// Uniform in {0, ..., bound-1}; bound > 0.
  std::uint64_t uniform_below(std::uint64_t bound);

  bool bernoulli(double p);

  /// Standard normal via Box-Muller.
  double normal();

  /// k distinct values from {0, ..., n-1}, sorted ascending.
  std::vector<std::uint32_t> sample_without_replacement(std::uint32_t n, std::uint32_t k);

  /// In-place Fisher-Yates shuffle.
  template <typename T>
  void shuffle(std::vector<T>& v) {
    for (std::size_t i = v.size(); i > 1; --i) {
      const std::size_t j = static_cast<std::size_t>(uniform_below(i));
      std::swap(v[i - 1], v[j]);
    }
  }

 private:
  std::uint64_t state_;
  bool have_cached_normal_ = false;
  double cached_normal_ = 0.0;
};

/// Per-trial seed derivation: seeds for trial i of a run with a given master
/// seed are mix(master, i), so trials are independent and any single trial
/// can be reproduced in isolation.
std::uint64_t derive_seed(std::uint64_t master_seed, std::uint64_t index);

}  // namespace pbs

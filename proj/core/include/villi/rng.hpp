#pragma once

#include <cstdint>
#include <random>
#include <string_view>
#include <vector>

namespace villi {

/// Deterministic random source used by every stochastic stage. The
/// distribution transforms are implemented here (instead of the std::
/// distribution objects) so that a given seed produces the same stream on
/// every standard library implementation.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : eng_(seed) {}

  std::uint64_t next_u64() { return eng_(); }

  /// Uniform integer in [lo, hi], inclusive. Rejection sampling, unbiased.
  int uniform_int(int lo, int hi);

  /// Uniform real in [lo, hi). 53-bit mantissa resolution.
  double uniform_real(double lo, double hi);

  /// Gaussian via Box-Muller; consumes exactly two engine outputs per call.
  double gaussian(double mean, double stddev);

  /// Fisher-Yates shuffle driven by uniform_int, so the permutation stream
  /// is pinned to this class and not to std::shuffle internals.
  template <typename T>
  void shuffle(std::vector<T>& v) {
    for (std::size_t i = v.size(); i > 1; --i) {
      std::size_t j = static_cast<std::size_t>(
          uniform_int(0, static_cast<int>(i) - 1));
      std::swap(v[i - 1], v[j]);
    }
  }

 private:
  std::mt19937_64 eng_;
};

/// Mixes a stage name into a base seed. Inserting a pipeline stage must not
/// perturb the randomness of the stages around it, so every stage derives
/// its own stream from (base, name) instead of sharing one engine.
std::uint64_t derive_seed(std::uint64_t base, std::string_view stage);

/// FNV-1a over a byte string; also used for config and architecture hashing.
std::uint64_t fnv1a64(std::string_view bytes);

}  // namespace villi

#include "villi/rng.hpp"

#include <cmath>
#include <stdexcept>

namespace villi {

int Rng::uniform_int(int lo, int hi) {
  if (lo > hi) throw std::invalid_argument("uniform_int: lo > hi");
  const std::uint64_t range = static_cast<std::uint64_t>(hi) -
                              static_cast<std::uint64_t>(lo) + 1;
  if (range == 0) {
    // lo == INT_MIN, hi == INT_MAX; the full engine output is already uniform
    return static_cast<int>(next_u64());
  }
  const std::uint64_t limit = UINT64_MAX - UINT64_MAX % range;
  std::uint64_t x;
  do {
    x = next_u64();
  } while (x >= limit);
  return static_cast<int>(static_cast<std::int64_t>(lo) +
                          static_cast<std::int64_t>(x % range));
}

double Rng::uniform_real(double lo, double hi) {
  const double u = static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  return lo + (hi - lo) * u;
}

double Rng::gaussian(double mean, double stddev) {
  // Box-Muller. u1 is kept away from 0 so the log stays finite.
  const double u1 =
      (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
  const double u2 = static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  const double r = std::sqrt(-2.0 * std::log(u1));
  return mean + stddev * r * std::cos(2.0 * M_PI * u2);
}

std::uint64_t fnv1a64(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

namespace {
std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}
}  // namespace

std::uint64_t derive_seed(std::uint64_t base, std::string_view stage) {
  return splitmix64(base ^ fnv1a64(stage));
}

}  // namespace villi

#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace sqkd {

/// Deterministic random stream with counter-based splitting.
///
/// All sampling primitives are implemented on top of the raw 64-bit
/// generator output (no std:: distributions), so a given seed produces
/// the same sequence on every run and every standard library. Substreams
/// derived via for_stream(seed, k) are statistically independent, which
/// lets Monte Carlo loops hand stream k to trial k and get identical
/// totals whether the loop runs serially or across OpenMP threads.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(mix(mix(seed ^ kSalt))) {}

  /// Seed of the independent substream `stream` of a master seed.
  static std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) {
    return mix(seed + (stream + 1) * 0x9e3779b97f4a7c15ull);
  }

  /// Independent substream `stream` of a master seed.
  static Rng for_stream(std::uint64_t seed, std::uint64_t stream) {
    return Rng(derive_seed(seed, stream));
  }

  std::uint64_t raw() { return gen_(); }

  /// Uniform double in [0, 1), 53-bit resolution.
  double uniform() { return static_cast<double>(raw() >> 11) * 0x1.0p-53; }

  /// Unbiased uniform integer in [0, bound). bound must be > 0.
  std::uint64_t below(std::uint64_t bound) {
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
    std::uint64_t x;
    do {
      x = raw();
    } while (x >= limit);
    return x % bound;
  }

  int bit() { return static_cast<int>(raw() >> 63); }

  bool bernoulli(double p) { return uniform() < p; }

  /// Standard normal via Box-Muller.
  double normal() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    const double u1 = 1.0 - uniform();  // (0, 1]
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double theta = 6.283185307179586476925286766559 * u2;
    spare_ = r * std::sin(theta);
    have_spare_ = true;
    return r * std::cos(theta);
  }

 private:
  static constexpr std::uint64_t kSalt = 0x5851f42d4c957f2dull;

  // SplitMix64 finalizer.
  static std::uint64_t mix(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ull;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }

  std::mt19937_64 gen_;
  double spare_ = 0.0;
  bool have_spare_ = false;
};

}  // namespace sqkd

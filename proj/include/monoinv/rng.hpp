#pragma once

#include <cstdint>

namespace monoinv {

/// SplitMix64 generator. Chosen because the recurrence is a few lines and
/// trivially reproducible from other languages.
class SplitMix64 {
public:
  explicit SplitMix64(std::uint64_t seed) noexcept : state_(seed) {}

  /// Independent stream for run `index` under a master seed.
  static SplitMix64 stream(std::uint64_t master_seed, std::uint64_t index) noexcept {
    SplitMix64 mixer(master_seed ^ (index * 0xD1B54A32D192ED03ULL));
    return SplitMix64(mixer.next());
  }

  std::uint64_t next() noexcept {
    std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  /// Uniform on [0, 1) with 53 random bits.
  double uniform() noexcept { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  /// Uniform on [lo, hi].
  double uniform(double lo, double hi) noexcept { return lo + (hi - lo) * uniform(); }

  /// Uniform integer in [0, n).
  std::uint64_t below(std::uint64_t n) noexcept { return n == 0 ? 0 : next() % n; }

private:
  std::uint64_t state_;
};

}  // namespace monoinv

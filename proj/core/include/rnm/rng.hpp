#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace rnm {

/// Name recorded in reports so runs can be reproduced.
inline constexpr std::string_view kRngAlgorithm = "mt19937_64 (splitmix64-derived stream seeds)";

/// One step of the splitmix64 sequence.
constexpr std::uint64_t splitmix64(std::uint64_t& state) noexcept {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// Deterministic random stream identified by (seed, stream).
///
/// The variate conversions are written out here rather than taken from
/// <random> distributions, whose output is implementation-defined, so a seed
/// reproduces the same numbers on every standard library.
class Rng {
 public:
  explicit Rng(std::uint64_t seed, std::uint64_t stream = 0) : engine_(derive(seed, stream)) {}

  /// Uniform on [0, 1) with 53 random bits.
  double uniform() noexcept { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  /// Uniform on [lo, hi).
  double uniform(double lo, double hi) noexcept { return lo + (hi - lo) * uniform(); }

  /// Uniform integer in [lo, hi], by rejection.
  int uniform_int(int lo, int hi) noexcept {
    const std::uint64_t range = static_cast<std::uint64_t>(hi - lo) + 1;
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % range;
    std::uint64_t x;
    do {
      x = engine_();
    } while (x >= limit);
    return lo + static_cast<int>(x % range);
  }

 private:
  static std::uint64_t derive(std::uint64_t seed, std::uint64_t stream) noexcept {
    std::uint64_t state = seed;
    const std::uint64_t a = splitmix64(state);
    state = a ^ (stream * 0xd1b54a32d192ed03ULL);
    return splitmix64(state);
  }

  std::mt19937_64 engine_;
};

}  // namespace rnm

#pragma once

#include <cstddef>
#include <cstdint>
#include <string_view>

namespace annofilter {

// Deterministic, platform-independent randomness. Everything seeded in this
// library flows through these helpers so that outputs are bit-identical
// across standard library implementations.

constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

/// 64-bit FNV-1a; stable across platforms, unlike std::hash.
constexpr std::uint64_t fnv1a64(std::string_view s) noexcept {
  std::uint64_t h = 0xCBF29CE484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001B3ULL;
  }
  return h;
}

/// Sub-seed for a named component ("mace", "random", ...).
constexpr std::uint64_t derive_seed(std::uint64_t master, std::string_view component) noexcept {
  return splitmix64(master ^ splitmix64(fnv1a64(component)));
}

constexpr std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index) noexcept {
  return splitmix64(master ^ splitmix64(index + 0x632BE59BD9B4E019ULL));
}

/// Maps 64 random bits to [0, 1) with 53 bits of precision.
constexpr double to_unit_interval(std::uint64_t bits) noexcept {
  return static_cast<double>(bits >> 11) * 0x1.0p-53;
}

/// Sequential generator: splitmix64 over an incrementing state.
class SplitMix64 {
 public:
  explicit constexpr SplitMix64(std::uint64_t seed) noexcept : state_(seed) {}

  constexpr std::uint64_t next() noexcept {
    state_ += 0x9E3779B97F4A7C15ULL;
    std::uint64_t z = state_;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  constexpr double uniform() noexcept { return to_unit_interval(next()); }

  /// Uniform in [lo, hi).
  constexpr double uniform(double lo, double hi) noexcept { return lo + (hi - lo) * uniform(); }

  /// Uniform integer in [0, n).
  constexpr std::size_t below(std::size_t n) noexcept {
    const auto r = static_cast<std::size_t>(uniform() * static_cast<double>(n));
    return r < n ? r : n - 1;
  }

 private:
  std::uint64_t state_;
};

}  // namespace annofilter

#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace gspec {

/// Identifier written into every report so runs can be reproduced elsewhere.
/// Streams are std::mt19937_64 (fully specified by the standard); uniforms are
/// the top 53 bits scaled by 2^-53; seeds are mixed with SplitMix64.
inline constexpr std::string_view kPrngAlgorithm = "mt19937_64+splitmix64-seed+u53";

/// SplitMix64 finalizer.
constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

/// Sub-seed h(master, index) = splitmix64(splitmix64(master) ^ (index * golden)).
constexpr std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index) noexcept {
  return splitmix64(splitmix64(master) ^ ((index + 1) * 0x9E3779B97F4A7C15ULL));
}

/// Seed of trial `trial` at graph size `n`.
constexpr std::uint64_t trial_seed(std::uint64_t master, std::uint64_t n,
                                   std::uint64_t trial) noexcept {
  return derive_seed(derive_seed(master, n), trial);
}

/// Seeded stream of uniforms on [0,1); bit-identical across platforms.
class UniformStream {
 public:
  explicit UniformStream(std::uint64_t seed) : engine_(seed) {}

  double operator()() noexcept {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace gspec

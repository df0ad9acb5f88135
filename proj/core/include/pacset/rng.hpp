#pragma once

#include <cstdint>
#include <string_view>

namespace pacset {

// Deterministic, platform-independent random streams.
//
// Every consumer of randomness names its stream: a (seed, label, index)
// triple always produces the same draws, so trials can run in any order or
// in parallel without sharing state.

namespace detail {

constexpr std::uint64_t splitmix64_next(std::uint64_t& state) noexcept {
  state += 0x9E3779B97F4A7C15ull;
  std::uint64_t z = state;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

constexpr std::uint64_t fnv1a64(std::string_view s) noexcept {
  std::uint64_t h = 0xCBF29CE484222325ull;
  for (char c : s) {
    h ^= static_cast<unsigned char>(c);
    h *= 0x100000001B3ull;
  }
  return h;
}

}  // namespace detail

// Collapses (seed, label, index) into a single well-mixed 64-bit seed.
constexpr std::uint64_t derive_seed(std::uint64_t seed, std::string_view label,
                                    std::uint64_t index = 0) noexcept {
  std::uint64_t state = seed ^ detail::fnv1a64(label);
  std::uint64_t a = detail::splitmix64_next(state);
  state ^= index * 0xD1B54A32D192ED03ull;
  std::uint64_t b = detail::splitmix64_next(state);
  return a ^ (b + 0x9E3779B97F4A7C15ull);
}

// xoshiro256** seeded through splitmix64. Uniforms are built from the top
// 53 bits so the sequence is identical on every platform; normals use
// Box-Muller for the same reason (std::normal_distribution is not portable).
class RngStream {
 public:
  explicit RngStream(std::uint64_t seed, std::string_view label = "default",
                     std::uint64_t index = 0) noexcept {
    std::uint64_t state = derive_seed(seed, label, index);
    for (auto& word : state_) word = detail::splitmix64_next(state);
  }

  std::uint64_t next_u64() noexcept {
    const std::uint64_t result = rotl(state_[1] * 5, 7) * 9;
    const std::uint64_t t = state_[1] << 17;
    state_[2] ^= state_[0];
    state_[3] ^= state_[1];
    state_[1] ^= state_[2];
    state_[0] ^= state_[3];
    state_[2] ^= t;
    state_[3] = rotl(state_[3], 45);
    return result;
  }

  // Uniform on [0, 1).
  double uniform() noexcept {
    return static_cast<double>(next_u64() >> 11) * 0x1p-53;
  }

  // Uniform on (0, 1]; safe as a log() argument.
  double uniform_pos() noexcept {
    return static_cast<double>((next_u64() >> 11) + 1) * 0x1p-53;
  }

  // Uniform integer on [0, bound), bound >= 1.
  std::uint64_t uniform_index(std::uint64_t bound) noexcept {
    return static_cast<std::uint64_t>(
        (static_cast<unsigned __int128>(next_u64()) * bound) >> 64);
  }

  // Standard normal via Box-Muller; generates pairs and caches the spare.
  double normal() noexcept;

 private:
  static constexpr std::uint64_t rotl(std::uint64_t x, int k) noexcept {
    return (x << k) | (x >> (64 - k));
  }

  std::uint64_t state_[4];
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace pacset

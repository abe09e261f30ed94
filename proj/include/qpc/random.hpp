#pragma once

#include <cstdint>
#include <random>

namespace qpc {

// SplitMix64 finalizer.
std::uint64_t splitmix64(std::uint64_t x) noexcept;

// Counter-based stream split. Stream k of root seed s is seeded with
// splitmix64(s + 0x9E3779B97F4A7C15 * (k + 1)), so the randomness a trial sees
// depends only on (s, k) and never on scheduling.
std::uint64_t derive_seed(std::uint64_t root, std::uint64_t counter) noexcept;

// Explicit random-stream handle threaded through every sampling operation.
class RandomStream {
 public:
  explicit RandomStream(std::uint64_t seed) : engine_(seed) {}

  int bit() { return static_cast<int>(engine_() >> 63); }

  // Uniform integer in [0, bound). bound must be positive.
  std::uint64_t below(std::uint64_t bound) {
    return std::uniform_int_distribution<std::uint64_t>(0, bound - 1)(engine_);
  }

  std::uint64_t next() { return engine_(); }

  std::mt19937_64& engine() noexcept { return engine_; }

 private:
  std::mt19937_64 engine_;
};

}  // namespace qpc

#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <string_view>

namespace vls {

/// 64-bit FNV-1a over the bytes of a seed text.
std::uint64_t hashSeedText(std::string_view text) noexcept;

/// Mixes a master seed with stream coordinates (worker, pulse, ...) into an engine seed.
std::uint64_t deriveSeed(std::uint64_t master, std::uint64_t a, std::uint64_t b = 0) noexcept;

/// Seed text derived from the wall clock, used when the user gives none.
std::string timeSeedText();

/// A named pseudo-random stream. Every consumer of randomness draws from its own stream
/// so results depend only on the seed and the stream coordinates.
class RandomStream {
public:
  explicit RandomStream(std::uint64_t seed) : engine_(seed) {}

  /// Uniform in [0, 1).
  double uniform01() { return std::generate_canonical<double, 53>(engine_); }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }
  double normal(double mean, double stddev) {
    if (stddev <= 0.0) return mean;
    std::normal_distribution<double> dist(mean, stddev);
    return dist(engine_);
  }

  std::mt19937_64& engine() noexcept { return engine_; }

private:
  std::mt19937_64 engine_;
};

}  // namespace vls

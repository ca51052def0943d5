#include "vls/beam/subrays.hpp"

#include "vls/common/error.hpp"

#include <cmath>
#include <numbers>
#include <string>

namespace vls {

int ringSubrayCount(int ring) {
  return static_cast<int>(std::floor(2.0 * std::numbers::pi * ring));
}

std::size_t subrayCount(int quality) {
  if (quality < 1) throw ConfigError("beam sample quality must be >= 1, got " + std::to_string(quality));
  std::size_t n = 1;
  for (int i = 1; i <= quality; ++i) n += static_cast<std::size_t>(ringSubrayCount(i));
  return n;
}

SubrayPattern generateSubrays(int quality, double divergenceHalfAngle) {
  SubrayPattern pattern;
  pattern.quality = quality;
  pattern.divergence = divergenceHalfAngle;
  pattern.subrays.reserve(subrayCount(quality));
  pattern.subrays.push_back(Subray{});

  for (int ring = 1; ring <= quality; ++ring) {
    const int n = ringSubrayCount(ring);
    const double fraction = static_cast<double>(ring) / quality;
    const double step = 2.0 * std::numbers::pi / n;
    for (int k = 0; k < n; ++k) {
      Subray s;
      s.ring = ring;
      s.radialFraction = fraction;
      s.offsetAngle = fraction * divergenceHalfAngle;
      s.azimuth = k * step;
      s.weight = std::exp(-2.0 * fraction * fraction);
      pattern.subrays.push_back(s);
    }
  }
  return pattern;
}

Vec3 subrayLocalDirection(const Subray& s) {
  const double sa = std::sin(s.offsetAngle);
  return {sa * std::cos(s.azimuth), sa * std::sin(s.azimuth), -std::cos(s.offsetAngle)};
}

}  // namespace vls

#pragma once

#include "vls/raycast/geometry.hpp"

#include <cstddef>
#include <vector>

namespace vls {

struct Subray {
  int ring = 0;                  // 0 is the central subray
  double radialFraction = 0.0;   // r / w, position inside the divergence cone
  double offsetAngle = 0.0;      // rad from the central ray
  double azimuth = 0.0;          // rad around the central ray
  double weight = 1.0;           // I / I0 of the Gaussian radial profile
};

/// Central subray plus `quality` concentric rings; ring i holds floor(2 pi i) subrays
/// evenly spaced in azimuth starting at 0, at radial fraction i / quality of the cone.
struct SubrayPattern {
  int quality = 1;
  double divergence = 0.0;  // cone half-angle (rad) at the 1/e^2 radius
  std::vector<Subray> subrays;

  std::size_t size() const { return subrays.size(); }
};

/// 1 + sum_{i=1..q} floor(2 pi i).
std::size_t subrayCount(int quality);
int ringSubrayCount(int ring);

/// Throws ConfigError when quality < 1.
SubrayPattern generateSubrays(int quality, double divergenceHalfAngle);

/// Direction of a subray in the beam frame, where the central ray points along -Z.
Vec3 subrayLocalDirection(const Subray& subray);

}  // namespace vls

#pragma once

#include "vls/raycast/geometry.hpp"

#include <cstdint>
#include <optional>
#include <vector>

namespace vls {

struct MeasurementRecord {
  Vec3 position = Vec3::Zero();
  double intensity = 0.0;
  int returnNumber = 1;
  int totalReturns = 1;
  double gpsTime = 0.0;  // s since survey start
  std::int64_t fullwaveIndex = 0;
  std::uint32_t partIndex = 0;
  int classification = 0;
  double range = 0.0;
  double scanAngle = 0.0;  // rad, deflector angle at emission
  std::optional<double> echoWidthNs;
};

struct TrajectoryRecord {
  double time = 0.0;
  Vec3 position = Vec3::Zero();
  double roll = 0.0;
  double pitch = 0.0;
  double yaw = 0.0;
};

inline constexpr std::size_t kPointColumns = 10;
inline constexpr std::size_t kTrajectoryColumns = 7;

/// Row-major N x 10 array in the ASCII column order.
std::vector<double> pointsToArray(const std::vector<MeasurementRecord>& points);
/// Row-major M x 7 array: time x y z roll pitch yaw.
std::vector<double> trajectoryToArray(const std::vector<TrajectoryRecord>& records);

}  // namespace vls

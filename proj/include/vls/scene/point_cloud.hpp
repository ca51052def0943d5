#pragma once

#include "vls/scene/scene_part.hpp"

#include <array>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

namespace vls {

enum class NormalMode { NearestToCentre, Average, Estimate, None };

NormalMode parseNormalMode(std::string_view text);

struct VoxelGridSpec {
  Vec3 minCorner = Vec3::Zero();
  Vec3 maxCorner = Vec3::Zero();
  double resolution = 1.0;
  std::array<std::size_t, 3> counts{1, 1, 1};

  /// counts = max(1, ceil((max - min) / resolution)) per axis.
  static VoxelGridSpec fromBounds(const AABB& bounds, double resolution);
  std::size_t cellCount() const { return counts[0] * counts[1] * counts[2]; }
  /// Half-open cells [min, min + res); points on the far boundary go to the last cell.
  std::array<std::size_t, 3> cellOf(const Vec3& p) const;
  std::size_t linearIndex(const std::array<std::size_t, 3>& ijk) const {
    return (ijk[0] * counts[1] + ijk[1]) * counts[2] + ijk[2];
  }
  Vec3 cellCentre(const std::array<std::size_t, 3>& ijk) const;
};

using Rgb = std::array<std::uint8_t, 3>;

struct VoxelAggregate {
  std::size_t cell = 0;
  Vec3 centre = Vec3::Zero();
  Vec3 meanPoint = Vec3::Zero();
  std::size_t pointCount = 0;
  std::optional<Vec3> normal;
  std::optional<Rgb> color;
};

struct VoxelizeOptions {
  double voxelSize = 1.0;
  NormalMode normalMode = NormalMode::None;
  /// Maximum number of points held in memory by one stage-2 batch.
  std::size_t batchPointBudget = 10'000'000;
  VoxelIncidence incidence = VoxelIncidence::Faces;
};

struct VoxelizeResult {
  VoxelGridSpec grid;
  std::size_t totalPoints = 0;
  std::size_t batches = 0;
  std::vector<VoxelAggregate> voxels;  // sorted by cell index
  ScenePart part;
};

/// Two passes over an XYZ file: bounds and count first, then per-cell aggregation in
/// x-slab batches sized by the point budget. Emits one Voxel primitive per occupied cell.
VoxelizeResult voxelizePointCloud(const std::filesystem::path& xyzPath, const VoxelizeOptions& options);

struct NormalEstimate {
  Vec3 normal = Vec3::UnitZ();
  bool degenerate = false;
};

/// Least-squares plane normal from the smallest singular vector of the centred points.
/// Sign: positive z, then positive y, then positive x. Fewer than 3 points or a
/// rank-deficient set yields (0, 0, 1) with `degenerate` set.
NormalEstimate estimateNormalSVD(std::span<const Vec3> points);

/// Per channel sqrt(mean(c^2)), rounded and clamped to [0, 255].
Rgb averageColor(std::span<const std::array<double, 3>> colors);

}  // namespace vls

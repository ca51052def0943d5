#pragma once

#include "vls/scene/scene_part.hpp"

#include <array>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string_view>
#include <vector>

namespace vls {

struct PadVoxelRecord {
  std::array<std::int64_t, 3> ijk{};
  double pad = 0.0;  // m^2/m^3
};

struct PadVoxelFile {
  Vec3 minCorner = Vec3::Zero();
  Vec3 maxCorner = Vec3::Zero();
  std::array<std::int64_t, 3> split{};
  double resolution = 0.0;
  std::vector<PadVoxelRecord> records;

  Vec3 cellCentre(const std::array<std::int64_t, 3>& ijk) const;
  double maxPad() const;
};

/// Header `min_corner: x y z`, `max_corner: x y z`, `split: ni nj nk`, then `i j k PAD`
/// rows. '#' starts a comment. Cells must be cubic.
PadVoxelFile loadPadVoxelFile(const std::filesystem::path& path);

enum class PadVoxelMode { Opaque, Scaled, Transmissive };

PadVoxelMode parsePadVoxelMode(std::string_view text);

struct PadVoxelOptions {
  PadVoxelMode mode = PadVoxelMode::Opaque;
  double alpha = 1.0;
  /// Defaults to the largest PAD in the file.
  std::optional<double> padMax;
  bool randomShift = false;
  std::uint64_t seed = 0;
  std::uint32_t lutIndex = 0;
  VoxelIncidence incidence = VoxelIncidence::Faces;
};

/// Side length a = a0 * (PAD / PADmax)^alpha. PAD is clamped to PADmax.
double scaledVoxelSide(double a0, double pad, double padMax, double alpha);

/// Builds primitives from a PAD voxel file. Rows with PAD = 0 produce nothing.
ScenePart padVoxelsToPart(const PadVoxelFile& file, const PadVoxelOptions& options);
ScenePart loadPadVoxels(const std::filesystem::path& path, const PadVoxelOptions& options);

}  // namespace vls

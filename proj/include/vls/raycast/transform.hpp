#pragma once

#include "vls/raycast/geometry.hpp"

#include <Eigen/Core>

#include <vector>

namespace vls {

/// Extrinsic rotations turn about the fixed world axes in sequence; intrinsic rotations
/// turn about the axes as already rotated by the previous steps.
enum class RotationMode { Extrinsic, Intrinsic };

struct AxisRotation {
  Vec3 axis = Vec3::UnitZ();
  double angleRad = 0.0;
};

/// Scale, then rotate, then translate.
struct PartTransform {
  double scale = 1.0;
  std::vector<AxisRotation> rotations;
  RotationMode mode = RotationMode::Extrinsic;
  Vec3 translation = Vec3::Zero();

  Eigen::Matrix3d rotationMatrix() const;
  Vec3 apply(const Vec3& p) const;
  Vec3 applyInverse(const Vec3& p) const;
  bool isIdentity() const;
};

/// Transforms vertices, voxel centres and sizes, and normals in place.
/// Voxels stay axis-aligned: their centres move and their size scales. Throws ConfigError
/// when scale <= 0.
void applyTransform(std::vector<Primitive>& primitives, const PartTransform& transform);
void applyInverseTransform(std::vector<Primitive>& primitives, const PartTransform& transform);

}  // namespace vls

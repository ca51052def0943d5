#include "vls/raycast/transform.hpp"

#include "vls/common/error.hpp"

#include <Eigen/Geometry>

#include <string>

namespace vls {

Eigen::Matrix3d PartTransform::rotationMatrix() const {
  Eigen::Matrix3d r = Eigen::Matrix3d::Identity();
  for (const auto& step : rotations) {
    const Eigen::Matrix3d m = Eigen::AngleAxisd(step.angleRad, step.axis.normalized()).toRotationMatrix();
    r = (mode == RotationMode::Extrinsic) ? Eigen::Matrix3d(m * r) : Eigen::Matrix3d(r * m);
  }
  return r;
}

Vec3 PartTransform::apply(const Vec3& p) const { return rotationMatrix() * (scale * p) + translation; }

Vec3 PartTransform::applyInverse(const Vec3& p) const {
  return (rotationMatrix().transpose() * (p - translation)) / scale;
}

bool PartTransform::isIdentity() const {
  return scale == 1.0 && translation.isZero(0.0) && rotationMatrix().isIdentity(0.0);
}

namespace {

void checkScale(double scale) {
  if (!(scale > 0.0)) throw ConfigError("scene part scale must be > 0, got " + std::to_string(scale));
}

template <class PointFn, class DirFn>
void transformAll(std::vector<Primitive>& prims, double sizeFactor, PointFn point, DirFn dir) {
  for (auto& prim : prims) {
    std::visit(
        [&](auto& s) {
          using T = std::decay_t<decltype(s)>;
          if constexpr (std::is_same_v<T, Triangle>) {
            for (auto& v : s.vertices) v = point(v);
            s.updateNormal();
          } else {
            s.centre = point(s.centre);
            s.halfSize *= sizeFactor;
            if constexpr (std::is_same_v<T, Voxel>) {
              if (s.normal) s.normal = dir(*s.normal).normalized();
            }
          }
        },
        prim.shape);
  }
}

}  // namespace

void applyTransform(std::vector<Primitive>& primitives, const PartTransform& t) {
  checkScale(t.scale);
  const Eigen::Matrix3d r = t.rotationMatrix();
  const double s = t.scale;
  const Vec3 tr = t.translation;
  transformAll(
      primitives, s, [&](const Vec3& p) -> Vec3 { return r * (s * p) + tr; },
      [&](const Vec3& n) -> Vec3 { return r * n; });
}

void applyInverseTransform(std::vector<Primitive>& primitives, const PartTransform& t) {
  checkScale(t.scale);
  const Eigen::Matrix3d rt = t.rotationMatrix().transpose();
  const double s = t.scale;
  const Vec3 tr = t.translation;
  transformAll(
      primitives, 1.0 / s, [&](const Vec3& p) -> Vec3 { return (rt * (p - tr)) / s; },
      [&](const Vec3& n) -> Vec3 { return rt * n; });
}

}  // namespace vls

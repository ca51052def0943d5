#pragma once

#include <Eigen/Core>

#include <array>
#include <cstdint>
#include <limits>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <variant>

namespace vls {

using Vec3 = Eigen::Vector3d;

/// A half-line with unit direction.
struct Ray {
  Vec3 origin = Vec3::Zero();
  Vec3 direction = -Vec3::UnitZ();

  Ray() = default;
  /// Normalizes `dir`.
  Ray(const Vec3& o, const Vec3& dir) : origin(o), direction(dir.normalized()) {}

  Vec3 at(double t) const { return origin + t * direction; }
};

struct AABB {
  Vec3 min = Vec3::Constant(std::numeric_limits<double>::infinity());
  Vec3 max = Vec3::Constant(-std::numeric_limits<double>::infinity());

  AABB() = default;
  AABB(const Vec3& lo, const Vec3& hi) : min(lo), max(hi) {}

  bool valid() const { return (min.array() <= max.array()).all(); }
  void extend(const Vec3& p) {
    min = min.cwiseMin(p);
    max = max.cwiseMax(p);
  }
  void extend(const AABB& b) {
    min = min.cwiseMin(b.min);
    max = max.cwiseMax(b.max);
  }
  Vec3 centre() const { return 0.5 * (min + max); }
  Vec3 extent() const { return max - min; }
  bool contains(const Vec3& p, double eps = 0.0) const {
    return ((p.array() >= min.array() - eps) && (p.array() <= max.array() + eps)).all();
  }
  bool overlaps(const AABB& o) const {
    return ((min.array() <= o.max.array()) && (max.array() >= o.min.array())).all();
  }
};

struct Material {
  std::string name = "default";
  double reflectance = 0.5;
  double specularity = 0.0;
  bool isGround = false;
  int classification = 0;
};

/// How the incidence angle of a ray on an opaque voxel is determined.
enum class VoxelIncidence {
  Faces,   ///< angle to the normal of the cube face the ray enters
  Zero,    ///< every ray is treated as hitting at 0 degrees
  Normal,  ///< angle to the voxel's point-cloud normal (faces when absent)
};

struct Triangle {
  std::array<Vec3, 3> vertices;
  Vec3 normal = Vec3::UnitZ();  // unit, right-handed winding

  Triangle() = default;
  Triangle(const Vec3& a, const Vec3& b, const Vec3& c);
  double area() const;
  void updateNormal();
};

struct Voxel {
  Vec3 centre = Vec3::Zero();
  double halfSize = 0.5;
  std::optional<Vec3> normal;
  VoxelIncidence incidence = VoxelIncidence::Faces;
};

/// Transmissive voxel carrying plant area density. `lutIndex` refers to the scene's
/// leaf angle distribution tables.
struct DetailedVoxel {
  Vec3 centre = Vec3::Zero();
  double halfSize = 0.5;
  double pad = 0.0;  // m^2/m^3
  std::uint32_t lutIndex = 0;
};

using Shape = std::variant<Triangle, Voxel, DetailedVoxel>;

struct Primitive {
  Shape shape;
  std::shared_ptr<const Material> material;
  std::uint32_t partIndex = 0;
  std::uint32_t id = 0;

  AABB bounds() const;
  Vec3 centroid() const;
  bool isTriangle() const { return std::holds_alternative<Triangle>(shape); }
  bool isTransmissive() const { return std::holds_alternative<DetailedVoxel>(shape); }
};

struct Intersection {
  double tEnter = 0.0;
  std::optional<double> tExit;
  const Primitive* primitive = nullptr;
  Vec3 hitPoint = Vec3::Zero();
  double incidenceAngle = 0.0;  // rad, in [0, pi/2]
};

constexpr double kTriangleDeterminantCutoff = 1e-12;
constexpr double kMinTriangleArea = 1e-12;

/// Slab test. Returns the parametric interval of the ray inside the box, clipped to t >= 0.
std::optional<std::pair<double, double>> intersectAABB(const Ray& ray, const AABB& box);

/// Moller-Trumbore. Only forward hits (t >= 0) are reported; tExit is never set.
std::optional<Intersection> intersectTriangle(const Ray& ray, const Primitive& tri);

/// Cube intersection for opaque and transmissive voxels. Sets both tEnter and tExit.
std::optional<Intersection> intersectVoxel(const Ray& ray, const Primitive& voxel);

std::optional<Intersection> intersect(const Ray& ray, const Primitive& prim);

/// Moves the origin just past an exit distance: origin + (t1 + epsilon) * direction.
Ray continueRay(const Ray& ray, double t1, double epsilon = 1e-5);

/// Angle between a direction and a surface normal folded into [0, pi/2].
double incidenceAngle(const Vec3& direction, const Vec3& normal);

}  // namespace vls

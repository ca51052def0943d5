#include "vls/raycast/geometry.hpp"

#include <Eigen/Geometry>

#include <algorithm>
#include <cmath>

namespace vls {

Triangle::Triangle(const Vec3& a, const Vec3& b, const Vec3& c) : vertices{a, b, c} { updateNormal(); }

double Triangle::area() const {
  return 0.5 * (vertices[1] - vertices[0]).cross(vertices[2] - vertices[0]).norm();
}

void Triangle::updateNormal() {
  const Vec3 n = (vertices[1] - vertices[0]).cross(vertices[2] - vertices[0]);
  const double len = n.norm();
  normal = len > 0.0 ? Vec3(n / len) : Vec3(Vec3::UnitZ());
}

AABB Primitive::bounds() const {
  return std::visit(
      [](const auto& s) -> AABB {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, Triangle>) {
          AABB b;
          for (const auto& v : s.vertices) b.extend(v);
          return b;
        } else {
          const Vec3 h = Vec3::Constant(s.halfSize);
          return AABB(s.centre - h, s.centre + h);
        }
      },
      shape);
}

Vec3 Primitive::centroid() const {
  return std::visit(
      [](const auto& s) -> Vec3 {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, Triangle>) {
          return (s.vertices[0] + s.vertices[1] + s.vertices[2]) / 3.0;
        } else {
          return s.centre;
        }
      },
      shape);
}

double incidenceAngle(const Vec3& direction, const Vec3& normal) {
  const double c = std::clamp(std::abs(direction.dot(normal)), 0.0, 1.0);
  return std::acos(c);
}

namespace {

struct SlabHit {
  double t0;
  double t1;
  int entryAxis;  // -1 when the origin is inside the box
};

std::optional<SlabHit> slab(const Ray& ray, const AABB& box) {
  double t0 = -std::numeric_limits<double>::infinity();
  double t1 = std::numeric_limits<double>::infinity();
  int entryAxis = -1;
  for (int a = 0; a < 3; ++a) {
    const double o = ray.origin[a];
    const double d = ray.direction[a];
    if (d == 0.0) {
      if (o < box.min[a] || o > box.max[a]) return std::nullopt;
      continue;
    }
    const double inv = 1.0 / d;
    double tNear = (box.min[a] - o) * inv;
    double tFar = (box.max[a] - o) * inv;
    if (tNear > tFar) std::swap(tNear, tFar);
    if (tNear > t0) {
      t0 = tNear;
      entryAxis = a;
    }
    t1 = std::min(t1, tFar);
    if (t0 > t1) return std::nullopt;
  }
  if (t1 < 0.0) return std::nullopt;
  if (t0 < 0.0) {
    t0 = 0.0;
    entryAxis = -1;
  }
  return SlabHit{t0, t1, entryAxis};
}

}  // namespace

std::optional<std::pair<double, double>> intersectAABB(const Ray& ray, const AABB& box) {
  const auto hit = slab(ray, box);
  if (!hit) return std::nullopt;
  return std::make_pair(hit->t0, hit->t1);
}

std::optional<Intersection> intersectTriangle(const Ray& ray, const Primitive& prim) {
  const auto& tri = std::get<Triangle>(prim.shape);
  const Vec3 e1 = tri.vertices[1] - tri.vertices[0];
  const Vec3 e2 = tri.vertices[2] - tri.vertices[0];
  const Vec3 p = ray.direction.cross(e2);
  const double det = e1.dot(p);
  if (std::abs(det) < kTriangleDeterminantCutoff) return std::nullopt;
  const double invDet = 1.0 / det;
  const Vec3 s = ray.origin - tri.vertices[0];
  const double u = s.dot(p) * invDet;
  if (u < 0.0 || u > 1.0) return std::nullopt;
  const Vec3 q = s.cross(e1);
  const double v = ray.direction.dot(q) * invDet;
  if (v < 0.0 || u + v > 1.0) return std::nullopt;
  const double t = e2.dot(q) * invDet;
  if (t < 0.0) return std::nullopt;

  Intersection hit;
  hit.tEnter = t;
  hit.primitive = &prim;
  hit.hitPoint = ray.at(t);
  hit.incidenceAngle = incidenceAngle(ray.direction, tri.normal);
  return hit;
}

std::optional<Intersection> intersectVoxel(const Ray& ray, const Primitive& prim) {
  const auto* vox = std::get_if<Voxel>(&prim.shape);
  const auto* dv = vox ? nullptr : std::get_if<DetailedVoxel>(&prim.shape);
  if (vox == nullptr && dv == nullptr) return std::nullopt;
  const Vec3 h = Vec3::Constant(vox ? vox->halfSize : dv->halfSize);
  const Vec3& c = vox ? vox->centre : dv->centre;
  const auto s = slab(ray, AABB(c - h, c + h));
  if (!s) return std::nullopt;

  Intersection hit;
  hit.tEnter = s->t0;
  hit.tExit = s->t1;
  hit.primitive = &prim;
  hit.hitPoint = ray.at(s->t0);

  auto faceAngle = [&]() {
    if (s->entryAxis < 0) return 0.0;
    Vec3 n = Vec3::Zero();
    n[s->entryAxis] = 1.0;
    return incidenceAngle(ray.direction, n);
  };

  if (vox != nullptr) {
    switch (vox->incidence) {
      case VoxelIncidence::Zero:
        hit.incidenceAngle = 0.0;
        break;
      case VoxelIncidence::Normal:
        hit.incidenceAngle = vox->normal ? incidenceAngle(ray.direction, *vox->normal) : faceAngle();
        break;
      case VoxelIncidence::Faces:
        hit.incidenceAngle = faceAngle();
        break;
    }
  } else {
    hit.incidenceAngle = faceAngle();
  }
  return hit;
}

std::optional<Intersection> intersect(const Ray& ray, const Primitive& prim) {
  if (prim.isTriangle()) return intersectTriangle(ray, prim);
  return intersectVoxel(ray, prim);
}

Ray continueRay(const Ray& ray, double t1, double epsilon) {
  Ray next;
  next.origin = ray.origin + (t1 + epsilon) * ray.direction;
  next.direction = ray.direction;
  return next;
}

}  // namespace vls

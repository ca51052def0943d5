#include "oracles.hpp"

#include "vls/common/error.hpp"
#include "vls/raycast/geometry.hpp"
#include "vls/raycast/kdtree.hpp"
#include "vls/raycast/transform.hpp"

#include <Eigen/Geometry>
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

using namespace vls;
using vls::test::boxInterval;
using vls::test::bruteForceTriangles;

namespace {

Primitive triangle(const Vec3& a, const Vec3& b, const Vec3& c) { return Primitive{Triangle(a, b, c), nullptr, 0, 0}; }

Primitive voxel(const Vec3& centre, double half, VoxelIncidence inc = VoxelIncidence::Faces) {
  Voxel v;
  v.centre = centre;
  v.halfSize = half;
  v.incidence = inc;
  return Primitive{v, nullptr, 0, 0};
}

std::vector<Primitive> randomTriangles(std::size_t n, std::mt19937_64& rng, double extent = 100.0, double size = 3.0) {
  std::uniform_real_distribution<double> pos(-extent, extent);
  std::uniform_real_distribution<double> off(-size, size);
  std::vector<Primitive> prims;
  while (prims.size() < n) {
    const Vec3 c(pos(rng), pos(rng), pos(rng));
    Triangle t(c + Vec3(off(rng), off(rng), off(rng)), c + Vec3(off(rng), off(rng), off(rng)),
               c + Vec3(off(rng), off(rng), off(rng)));
    if (t.area() < 1e-3) continue;
    prims.push_back(Primitive{t, nullptr, 0, 0});
  }
  return prims;
}

Vec3 randomUnit(std::mt19937_64& rng) {
  std::normal_distribution<double> n(0.0, 1.0);
  Vec3 v;
  do v = Vec3(n(rng), n(rng), n(rng));
  while (v.norm() < 1e-6);
  return v.normalized();
}

}  // namespace

TEST_CASE("triangle hit from above lands on the plane") {
  const auto tri = triangle({-1, -1, 0}, {1, -1, 0}, {0, 1, 0});
  const auto hit = intersectTriangle(Ray({0, 0, 1}, {0, 0, -1}), tri);
  REQUIRE(hit);
  CHECK(hit->tEnter == doctest::Approx(1.0).epsilon(1e-15));
  CHECK((hit->hitPoint - Vec3(0, 0, 0)).norm() < 1e-15);
  CHECK_FALSE(hit->tExit);
  CHECK(hit->incidenceAngle == doctest::Approx(0.0));
}

TEST_CASE("parallel and backward rays miss a triangle") {
  const auto tri = triangle({-1, -1, 0}, {1, -1, 0}, {0, 1, 0});
  CHECK_FALSE(intersectTriangle(Ray({0, 0, 1}, {1, 0, 0}), tri));
  CHECK_FALSE(intersectTriangle(Ray({0, 0, 1}, {0, 0, 1}), tri));
}

TEST_CASE("triangle incidence angle is folded into [0, pi/2]") {
  const auto tri = triangle({-1, -1, 0}, {1, -1, 0}, {0, 1, 0});
  const Vec3 d = Vec3(1, 0, -1).normalized();
  const auto down = intersectTriangle(Ray(Vec3(-0.5, 0, 0.5), d), tri);
  const auto up = intersectTriangle(Ray(Vec3(-0.5, 0, -0.5), Vec3(1, 0, 1)), tri);
  REQUIRE(down);
  REQUIRE(up);
  CHECK(down->incidenceAngle == doctest::Approx(std::numbers::pi / 4));
  CHECK(up->incidenceAngle == doctest::Approx(std::numbers::pi / 4));
}

TEST_CASE("box slab interval") {
  const AABB unit(Vec3::Constant(-0.5), Vec3::Constant(0.5));
  const auto span = intersectAABB(Ray({0, 0, -5}, {0, 0, 1}), unit);
  REQUIRE(span);
  CHECK(span->first == doctest::Approx(4.5));
  CHECK(span->second == doctest::Approx(5.5));

  const auto inside = intersectAABB(Ray({0.1, 0.2, 0.3}, {1, 1, 0}), unit);
  REQUIRE(inside);
  CHECK(inside->first == 0.0);

  CHECK_FALSE(intersectAABB(Ray({2, 0, -5}, {0, 0, 1}), unit));
  CHECK_FALSE(intersectAABB(Ray({0, 0, 5}, {0, 0, 1}), unit));
}

TEST_CASE("voxel intersection reports entry, exit and incidence per mode") {
  const Vec3 d = Vec3(1, 0, -1).normalized();
  const Ray r(Vec3(-3, 0, 2), d);
  const auto faces = intersectVoxel(r, voxel(Vec3::Zero(), 0.5, VoxelIncidence::Faces));
  REQUIRE(faces);
  REQUIRE(faces->tExit);
  CHECK(*faces->tExit >= faces->tEnter);
  CHECK(faces->incidenceAngle == doctest::Approx(std::numbers::pi / 4));

  const auto zero = intersectVoxel(r, voxel(Vec3::Zero(), 0.5, VoxelIncidence::Zero));
  REQUIRE(zero);
  CHECK(zero->incidenceAngle == 0.0);

  auto withNormal = voxel(Vec3::Zero(), 0.5, VoxelIncidence::Normal);
  std::get<Voxel>(withNormal.shape).normal = Vec3(1, 0, 0);
  const auto normal = intersectVoxel(r, withNormal);
  REQUIRE(normal);
  CHECK(normal->incidenceAngle == doctest::Approx(std::numbers::pi / 4));
  auto grazing = withNormal;
  std::get<Voxel>(grazing.shape).normal = Vec3(0, 1, 0);
  CHECK(intersectVoxel(r, grazing)->incidenceAngle == doctest::Approx(std::numbers::pi / 2));
}

TEST_CASE("continueRay moves the origin past the exit distance") {
  const Ray r({0, 0, 0}, {1, 0, 0});
  const Ray n = continueRay(r, 2.0);
  CHECK(n.origin.x() == doctest::Approx(2.00001).epsilon(1e-15));
  CHECK(n.origin.y() == 0.0);
  CHECK(n.direction == r.direction);
  CHECK(continueRay(r, 0.0).origin.x() == doctest::Approx(1e-5));
}

TEST_CASE("re-query after continueRay never re-hits the crossed voxel") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(-4.0, 4.0);
  std::vector<Primitive> prims;
  for (int i = 0; i < 200; ++i) prims.push_back(voxel(Vec3(u(rng), u(rng), u(rng)), 0.2));
  const KDTree tree(prims);
  for (int i = 0; i < 500; ++i) {
    Ray ray(Vec3(u(rng), u(rng), 10.0), randomUnit(rng) + Vec3(0, 0, -2));
    for (int step = 0; step < 50; ++step) {
      const auto hit = tree.nearestHit(ray);
      if (!hit) break;
      CHECK(hit->tEnter >= 0.0);
      const std::uint32_t id = hit->primitive->id;
      ray = continueRay(ray, *hit->tExit);
      const auto again = tree.nearestHit(ray);
      if (again) CHECK(again->primitive->id != id);
    }
  }
}

TEST_CASE("kd-tree construction") {
  SUBCASE("empty input is a configuration error") { CHECK_THROWS_AS(buildKDTree({}), ConfigError); }

  SUBCASE("one triangle makes a single leaf") {
    const KDTree tree({triangle({0, 0, 0}, {1, 0, 0}, {0, 1, 0})});
    REQUIRE(tree.nodes().size() == 1);
    CHECK(tree.nodes()[0].isLeaf());
    CHECK(tree.nodes()[0].count == 1);
  }

  SUBCASE("coplanar primitives: split axis follows depth mod 3") {
    std::vector<Primitive> prims;
    for (int i = 0; i < 40; ++i) {
      for (int j = 0; j < 40; ++j) {
        prims.push_back(triangle({i * 1.0, j * 1.0, 0.0}, {i + 0.5, j * 1.0, 0.0}, {i * 1.0, j + 0.5, 0.0}));
      }
    }
    const KDTree tree(prims, KDTreeConfig{4, 12});
    int inner = 0;
    for (const auto& n : tree.nodes()) {
      if (n.isLeaf()) continue;
      ++inner;
      CHECK(n.axis == n.depth % 3);
    }
    CHECK(inner > 3);
  }
}

TEST_CASE("kd-tree structural invariants on random triangles") {
  std::mt19937_64 rng(5);
  const auto prims = randomTriangles(3000, rng);
  for (const KDTreeConfig cfg : {KDTreeConfig{}, KDTreeConfig{4, 30}, KDTreeConfig{64, 3}}) {
    const KDTree tree(prims, cfg);
    const auto& nodes = tree.nodes();
    std::vector<int> seen(prims.size(), 0);
    for (const auto& n : nodes) {
      if (!n.isLeaf()) {
        CHECK(n.axis == n.depth % 3);
        continue;
      }
      for (std::uint32_t k = 0; k < n.count; ++k) {
        const auto id = tree.leafIndices()[n.first + k];
        ++seen[id];
        CHECK(n.bounds.overlaps(tree.primitives()[id].bounds()));
      }
    }
    for (std::size_t i = 0; i < seen.size(); ++i) CHECK(seen[i] >= 1);
    for (std::size_t i = 0; i < prims.size(); ++i) CHECK(tree.primitives()[i].id == i);
  }
}

TEST_CASE("kd-tree leaves respect the size bound unless splitting cannot separate them") {
  std::mt19937_64 rng(8);
  const auto prims = randomTriangles(5000, rng, 100.0, 0.5);
  const KDTreeConfig cfg{8, 20};
  const KDTree tree(prims, cfg);
  const auto& nodes = tree.nodes();
  for (const auto& n : nodes) {
    if (!n.isLeaf() || n.count <= cfg.maxLeafSize || n.depth >= cfg.maxDepth) continue;
    // An oversized leaf above the depth cap: the median split could not separate it,
    // which only happens when every primitive reaches the split plane of its own axis.
    const int axis = n.depth % 3;
    std::vector<double> keys;
    for (std::uint32_t k = 0; k < n.count; ++k) keys.push_back(tree.primitives()[tree.leafIndices()[n.first + k]].centroid()[axis]);
    std::nth_element(keys.begin(), keys.begin() + keys.size() / 2, keys.end());
    const double split = std::clamp(keys[keys.size() / 2], n.bounds.min[axis], n.bounds.max[axis]);
    for (std::uint32_t k = 0; k < n.count; ++k) {
      const AABB b = tree.primitives()[tree.leafIndices()[n.first + k]].bounds();
      CHECK(b.min[axis] <= split);
      CHECK(b.max[axis] >= split);
    }
  }
}

TEST_CASE("nearer of two parallel triangles is reported") {
  std::vector<Primitive> prims;
  prims.push_back(triangle({-5, -5, 1}, {5, -5, 1}, {0, 5, 1}));
  prims.push_back(triangle({-5, -5, 2}, {5, -5, 2}, {0, 5, 2}));
  const KDTree tree(prims, KDTreeConfig{1, 10});
  const auto hit = tree.nearestHit(Ray({0, 0, 5}, {0, 0, -1}));
  REQUIRE(hit);
  CHECK(hit->tEnter == doctest::Approx(3.0));
  CHECK(hit->primitive->id == 1);
  CHECK_FALSE(tree.nearestHit(Ray({0, 0, 5}, {0, 0, 1})));
  CHECK_FALSE(tree.nearestHit(Ray({100, 0, 5}, {0, 0, -1})));
}

TEST_CASE("every triangle is reachable by a ray through its centroid") {
  std::mt19937_64 rng(99);
  const auto prims = randomTriangles(10000, rng);
  const KDTree tree(prims);
  for (const auto& p : tree.primitives()) {
    const auto& tri = std::get<Triangle>(p.shape);
    const Vec3 c = p.centroid();
    const Ray ray(c + 5.0 * tri.normal, -tri.normal);
    const auto hit = tree.nearestHit(ray, [&](const Primitive& q) { return q.id == p.id; });
    REQUIRE(hit);
    CHECK(hit->tEnter == doctest::Approx(5.0).epsilon(1e-9));
  }
}

TEST_CASE("kd-tree matches an independent brute-force scan") {
  std::mt19937_64 rng(2024);
  const auto prims = randomTriangles(4000, rng);
  const KDTree tree(prims);
  std::uniform_real_distribution<double> pos(-150.0, 150.0);
  int hits = 0;
  for (int i = 0; i < 1000; ++i) {
    const Vec3 o(pos(rng), pos(rng), pos(rng));
    const Vec3 target = tree.primitives()[rng() % prims.size()].centroid();
    const Vec3 d = (i % 2 == 0) ? Vec3((target - o).normalized()) : randomUnit(rng);
    const Ray ray(o, d);
    const auto got = tree.nearestHit(ray);
    const auto want = bruteForceTriangles(tree.primitives(), ray.origin, ray.direction);
    REQUIRE(got.has_value() == want.has_value());
    if (!got) continue;
    ++hits;
    CHECK(std::abs(got->tEnter - want->t) < 1e-9);
    if (std::abs(got->tEnter - want->t) > 1e-12) {
      CHECK(got->primitive->id == want->id);
    }
  }
  CHECK(hits > 400);
}

TEST_CASE("kd-tree agrees with the library brute force on mixed primitives") {
  std::mt19937_64 rng(77);
  auto prims = randomTriangles(500, rng, 20.0, 2.0);
  std::uniform_real_distribution<double> u(-20.0, 20.0);
  for (int i = 0; i < 500; ++i) prims.push_back(voxel(Vec3(u(rng), u(rng), u(rng)), 0.4));
  const KDTree tree(prims, KDTreeConfig{6, 24});
  for (int i = 0; i < 2000; ++i) {
    const Ray ray(Vec3(u(rng), u(rng), u(rng)), randomUnit(rng));
    const auto got = tree.nearestHit(ray);
    const auto want = bruteForceNearestHit(tree.primitives(), ray);
    REQUIRE(got.has_value() == want.has_value());
    if (got) {
      CHECK(got->tEnter == doctest::Approx(want->tEnter).epsilon(1e-12));
      CHECK(got->primitive->id == want->primitive->id);
    }
  }
}

TEST_CASE("traversal only visits leaves the ray passes through") {
  std::mt19937_64 rng(3);
  const auto prims = randomTriangles(5000, rng);
  const KDTree tree(prims, KDTreeConfig{8, 24});
  std::uniform_real_distribution<double> pos(-150.0, 150.0);
  for (int i = 0; i < 500; ++i) {
    const Ray ray(Vec3(pos(rng), pos(rng), pos(rng)), randomUnit(rng));
    TraversalStats stats;
    stats.recordLeaves = true;
    (void)tree.nearestHit(ray, &stats);
    CHECK(stats.leafBounds.size() == stats.leavesVisited);
    for (const auto& b : stats.leafBounds) {
      const AABB grown(b.min - Vec3::Constant(1e-9), b.max + Vec3::Constant(1e-9));
      CHECK(boxInterval(ray.origin, ray.direction, grown).has_value());
    }
  }
}

TEST_CASE("transforms") {
  SUBCASE("90 degree extrinsic z rotation maps x to y") {
    PartTransform t;
    t.rotations = {{Vec3::UnitZ(), std::numbers::pi / 2}};
    CHECK((t.apply(Vec3(1, 0, 0)) - Vec3(0, 1, 0)).norm() < 1e-15);
  }

  SUBCASE("intrinsic and extrinsic sequences differ and match matrix composition") {
    const Eigen::Matrix3d rz = Eigen::AngleAxisd(std::numbers::pi / 2, Vec3::UnitZ()).toRotationMatrix();
    const Eigen::Matrix3d rx = Eigen::AngleAxisd(std::numbers::pi / 2, Vec3::UnitX()).toRotationMatrix();
    PartTransform ext;
    ext.rotations = {{Vec3::UnitZ(), std::numbers::pi / 2}, {Vec3::UnitX(), std::numbers::pi / 2}};
    ext.mode = RotationMode::Extrinsic;
    PartTransform intr = ext;
    intr.mode = RotationMode::Intrinsic;
    const Vec3 p(0, 0, 1);
    const Vec3 wantExt = rx * (rz * p);  // second turn about the fixed x axis
    const Vec3 wantInt = rz * (rx * p);  // second turn about the already rotated x axis
    CHECK((ext.apply(p) - wantExt).norm() < 1e-12);
    CHECK((intr.apply(p) - wantInt).norm() < 1e-12);
    CHECK((ext.apply(p) - intr.apply(p)).norm() > 0.5);
  }

  SUBCASE("order is scale, rotate, translate") {
    PartTransform t;
    t.scale = 2.0;
    t.rotations = {{Vec3::UnitZ(), std::numbers::pi / 2}};
    t.translation = Vec3(10, 0, 0);
    CHECK((t.apply(Vec3(1, 0, 0)) - Vec3(10, 2, 0)).norm() < 1e-12);
  }

  SUBCASE("identity leaves primitives unchanged") {
    std::vector<Primitive> prims{triangle({0, 0, 0}, {1, 0, 0}, {0, 1, 0}), voxel({1, 2, 3}, 0.5)};
    const auto before = prims;
    applyTransform(prims, PartTransform{});
    CHECK(std::get<Triangle>(prims[0].shape).vertices == std::get<Triangle>(before[0].shape).vertices);
    CHECK(std::get<Voxel>(prims[1].shape).centre == std::get<Voxel>(before[1].shape).centre);
  }

  SUBCASE("scale must be positive") {
    std::vector<Primitive> prims{voxel({0, 0, 0}, 0.5)};
    PartTransform t;
    t.scale = 0.0;
    CHECK_THROWS_AS(applyTransform(prims, t), ConfigError);
    t.scale = -1.0;
    CHECK_THROWS_AS(applyTransform(prims, t), ConfigError);
  }

  SUBCASE("round trip returns vertices within 1e-9") {
    std::mt19937_64 rng(4);
    auto prims = randomTriangles(500, rng, 1000.0, 5.0);
    const auto before = prims;
    PartTransform t;
    t.scale = 3.7;
    t.rotations = {{Vec3(1, 2, 3), 0.7}, {Vec3::UnitY(), -1.9}};
    t.mode = RotationMode::Intrinsic;
    t.translation = Vec3(-250.0, 1200.0, 33.0);
    applyTransform(prims, t);
    applyInverseTransform(prims, t);
    for (std::size_t i = 0; i < prims.size(); ++i) {
      const auto& a = std::get<Triangle>(prims[i].shape);
      const auto& b = std::get<Triangle>(before[i].shape);
      for (int k = 0; k < 3; ++k) CHECK((a.vertices[k] - b.vertices[k]).norm() < 1e-9);
      CHECK((a.normal - b.normal).norm() < 1e-9);
    }
  }

  SUBCASE("voxels scale their size and keep their normal unit") {
    auto v = voxel({1, 0, 0}, 0.5);
    std::get<Voxel>(v.shape).normal = Vec3(1, 0, 0);
    std::vector<Primitive> prims{v};
    PartTransform t;
    t.scale = 2.0;
    t.rotations = {{Vec3::UnitZ(), std::numbers::pi / 2}};
    applyTransform(prims, t);
    const auto& out = std::get<Voxel>(prims[0].shape);
    CHECK(out.halfSize == doctest::Approx(1.0));
    CHECK((out.centre - Vec3(0, 2, 0)).norm() < 1e-12);
    CHECK((*out.normal - Vec3(0, 1, 0)).norm() < 1e-12);
  }
}

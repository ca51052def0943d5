#pragma once

#include "vls/raycast/geometry.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <limits>
#include <optional>
#include <vector>

namespace vls::test {

/// Ray/triangle by solving o + t d = v0 + u e1 + v e2 as a 3x3 linear system.
inline std::optional<double> solveTriangleHit(const Vec3& o, const Vec3& d, const Vec3& a, const Vec3& b,
                                              const Vec3& c) {
  Eigen::Matrix3d m;
  m.col(0) = -d;
  m.col(1) = b - a;
  m.col(2) = c - a;
  if (std::abs(m.determinant()) < 1e-12) return std::nullopt;
  const Vec3 x = m.fullPivLu().solve(o - a);
  const double t = x[0], u = x[1], v = x[2];
  const double tol = 1e-12;
  if (t < 0.0 || u < -tol || v < -tol || u + v > 1.0 + tol) return std::nullopt;
  return t;
}

struct OracleHit {
  std::uint32_t id = 0;
  double t = std::numeric_limits<double>::infinity();
};

/// Nearest triangle over all primitives; ties keep the lowest id.
inline std::optional<OracleHit> bruteForceTriangles(const std::vector<Primitive>& prims, const Vec3& o,
                                                    const Vec3& d) {
  std::optional<OracleHit> best;
  for (const auto& p : prims) {
    const auto& tri = std::get<Triangle>(p.shape);
    const auto t = solveTriangleHit(o, d, tri.vertices[0], tri.vertices[1], tri.vertices[2]);
    if (t && (!best || *t < best->t)) best = OracleHit{p.id, *t};
  }
  return best;
}

/// Slab interval computed per axis with explicit inside tests, clipped to t >= 0.
inline std::optional<std::pair<double, double>> boxInterval(const Vec3& o, const Vec3& d, const AABB& box) {
  double lo = 0.0, hi = std::numeric_limits<double>::infinity();
  for (int a = 0; a < 3; ++a) {
    if (d[a] == 0.0) {
      if (o[a] < box.min[a] || o[a] > box.max[a]) return std::nullopt;
      continue;
    }
    const double t0 = (box.min[a] - o[a]) / d[a];
    const double t1 = (box.max[a] - o[a]) / d[a];
    lo = std::max(lo, std::min(t0, t1));
    hi = std::min(hi, std::max(t0, t1));
  }
  if (lo > hi) return std::nullopt;
  return std::make_pair(lo, hi);
}

}  // namespace vls::test

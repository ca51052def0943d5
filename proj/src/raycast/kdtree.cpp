#include "vls/raycast/kdtree.hpp"

#include "vls/common/error.hpp"

#include <algorithm>
#include <cmath>

namespace vls {

namespace {

bool better(const Intersection& a, const std::optional<Intersection>& best) {
  if (!best) return true;
  if (a.tEnter != best->tEnter) return a.tEnter < best->tEnter;
  return a.primitive->id < best->primitive->id;
}

}  // namespace

KDTree buildKDTree(std::vector<Primitive> primitives, KDTreeConfig config) {
  return KDTree(std::move(primitives), config);
}

KDTree::KDTree(std::vector<Primitive> primitives, KDTreeConfig config)
    : primitives_(std::move(primitives)), config_(config) {
  if (primitives_.empty()) throw ConfigError("cannot build a kD-tree from an empty primitive list");
  if (config_.maxLeafSize == 0) config_.maxLeafSize = 1;
  config_.maxDepth = std::clamp(config_.maxDepth, 0, 100);

  AABB root;
  primBounds_.reserve(primitives_.size());
  for (std::size_t i = 0; i < primitives_.size(); ++i) {
    primitives_[i].id = static_cast<std::uint32_t>(i);
    primBounds_.push_back(primitives_[i].bounds());
    root.extend(primBounds_.back());
  }
  // Pad so rays grazing the outermost faces are not lost to rounding.
  const double pad = 1e-9 * (1.0 + root.extent().maxCoeff());
  root.min.array() -= pad;
  root.max.array() += pad;

  std::vector<std::uint32_t> all(primitives_.size());
  for (std::size_t i = 0; i < all.size(); ++i) all[i] = static_cast<std::uint32_t>(i);
  nodes_.reserve(2 * primitives_.size() / config_.maxLeafSize + 1);
  build(all, root, 0);
  primBounds_.clear();
  primBounds_.shrink_to_fit();
}

std::uint32_t KDTree::build(std::vector<std::uint32_t>& indices, const AABB& bounds, int depth) {
  const auto nodeIndex = static_cast<std::uint32_t>(nodes_.size());
  nodes_.emplace_back();
  nodes_[nodeIndex].bounds = bounds;
  nodes_[nodeIndex].depth = depth;

  auto makeLeaf = [&]() {
    Node& n = nodes_[nodeIndex];
    n.axis = -1;
    n.first = static_cast<std::uint32_t>(leafIndices_.size());
    n.count = static_cast<std::uint32_t>(indices.size());
    leafIndices_.insert(leafIndices_.end(), indices.begin(), indices.end());
    return nodeIndex;
  };

  if (indices.size() <= config_.maxLeafSize || depth >= config_.maxDepth) return makeLeaf();

  const int axis = depth % 3;
  std::vector<double> keys(indices.size());
  for (std::size_t i = 0; i < indices.size(); ++i) keys[i] = primitives_[indices[i]].centroid()[axis];
  auto mid = keys.begin() + static_cast<std::ptrdiff_t>(keys.size() / 2);
  std::nth_element(keys.begin(), mid, keys.end());
  const double split = std::clamp(*mid, bounds.min[axis], bounds.max[axis]);

  // The split plane itself belongs to the lower child.
  std::vector<std::uint32_t> left;
  std::vector<std::uint32_t> right;
  for (std::uint32_t idx : indices) {
    const AABB& b = primBounds_[idx];
    if (b.min[axis] < split || b.max[axis] <= split) left.push_back(idx);
    if (b.max[axis] > split) right.push_back(idx);
  }
  if (left.size() == indices.size() && right.size() == indices.size()) return makeLeaf();

  indices.clear();
  indices.shrink_to_fit();

  AABB lowBounds = bounds;
  AABB highBounds = bounds;
  lowBounds.max[axis] = split;
  highBounds.min[axis] = split;

  const std::uint32_t lo = build(left, lowBounds, depth + 1);
  const std::uint32_t hi = build(right, highBounds, depth + 1);
  Node& n = nodes_[nodeIndex];
  n.axis = axis;
  n.split = split;
  n.children[0] = lo;
  n.children[1] = hi;
  return nodeIndex;
}

std::optional<Intersection> KDTree::nearestHit(const Ray& ray, TraversalStats* stats) const {
  return nearestHit(ray, PrimitiveFilter{}, stats);
}

std::optional<Intersection> KDTree::nearestHit(const Ray& ray, const PrimitiveFilter& filter,
                                               TraversalStats* stats) const {
  const auto rootSpan = intersectAABB(ray, nodes_.front().bounds);
  if (!rootSpan) return std::nullopt;

  struct Entry {
    std::uint32_t node;
    double tmin;
    double tmax;
  };
  constexpr int kStackSize = 128;
  Entry stack[kStackSize];
  int top = 0;
  stack[top++] = {0, rootSpan->first, rootSpan->second};

  constexpr double kPruneSlack = 1e-9;
  std::optional<Intersection> best;
  while (top > 0) {
    const Entry e = stack[--top];
    if (best && best->tEnter < e.tmin - kPruneSlack) continue;
    const Node& node = nodes_[e.node];
    if (stats) ++stats->nodesVisited;

    if (node.isLeaf()) {
      if (stats) {
        ++stats->leavesVisited;
        if (stats->recordLeaves) stats->leafBounds.push_back(node.bounds);
      }
      for (std::uint32_t k = 0; k < node.count; ++k) {
        const Primitive& prim = primitives_[leafIndices_[node.first + k]];
        if (filter && !filter(prim)) continue;
        if (stats) ++stats->primitivesTested;
        auto hit = intersect(ray, prim);
        if (hit && better(*hit, best)) best = std::move(hit);
      }
      continue;
    }

    const int axis = node.axis;
    const double o = ray.origin[axis];
    const double d = ray.direction[axis];
    const std::uint32_t lowChild = node.children[0];
    const std::uint32_t highChild = node.children[1];

    if (top + 2 > kStackSize) throw SimulationError("kD-tree traversal stack overflow");
    if (o == node.split) {
      // Origin on the plane: both sides may hold the nearest hit.
      stack[top++] = {highChild, e.tmin, e.tmax};
      stack[top++] = {lowChild, e.tmin, e.tmax};
      continue;
    }

    const bool originLow = o < node.split;
    const std::uint32_t nearChild = originLow ? lowChild : highChild;
    const std::uint32_t farChild = originLow ? highChild : lowChild;
    if (d == 0.0) {
      stack[top++] = {nearChild, e.tmin, e.tmax};
      continue;
    }
    const double tSplit = (node.split - o) / d;
    if (tSplit < 0.0 || tSplit > e.tmax) {
      stack[top++] = {nearChild, e.tmin, e.tmax};
    } else if (tSplit < e.tmin) {
      stack[top++] = {farChild, e.tmin, e.tmax};
    } else {
      stack[top++] = {farChild, tSplit, e.tmax};
      stack[top++] = {nearChild, e.tmin, tSplit};
    }
  }
  return best;
}

std::optional<Intersection> bruteForceNearestHit(const std::vector<Primitive>& primitives, const Ray& ray) {
  std::optional<Intersection> best;
  for (const auto& prim : primitives) {
    auto hit = intersect(ray, prim);
    if (hit && better(*hit, best)) best = std::move(hit);
  }
  return best;
}

}  // namespace vls

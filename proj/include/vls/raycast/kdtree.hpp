#pragma once

#include "vls/raycast/geometry.hpp"

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

namespace vls {

struct KDTreeConfig {
  std::size_t maxLeafSize = 32;
  int maxDepth = 24;
};

/// Counters filled during a traversal. `leafBounds` is only recorded when
/// `recordLeaves` is set.
struct TraversalStats {
  std::size_t nodesVisited = 0;
  std::size_t leavesVisited = 0;
  std::size_t primitivesTested = 0;
  bool recordLeaves = false;
  std::vector<AABB> leafBounds;
};

using PrimitiveFilter = std::function<bool(const Primitive&)>;

/// kD-tree over scene primitives. The split axis cycles X, Y, Z with depth and the split
/// value is the median primitive centroid on that axis. Primitives overlapping both sides
/// of a split are referenced by both children. Immutable after construction.
class KDTree {
public:
  struct Node {
    int axis = -1;  // -1 marks a leaf
    double split = 0.0;
    std::uint32_t children[2] = {0, 0};
    std::uint32_t first = 0;  // leaf: offset into the index list
    std::uint32_t count = 0;
    int depth = 0;
    AABB bounds;
    bool isLeaf() const { return axis < 0; }
  };

  /// Takes ownership of the primitives and assigns `Primitive::id` as the list position.
  explicit KDTree(std::vector<Primitive> primitives, KDTreeConfig config = {});

  KDTree(const KDTree&) = delete;
  KDTree& operator=(const KDTree&) = delete;
  KDTree(KDTree&&) = default;
  KDTree& operator=(KDTree&&) = default;

  /// Hit with minimum tEnter; ties resolve to the lower primitive id.
  std::optional<Intersection> nearestHit(const Ray& ray, TraversalStats* stats = nullptr) const;
  std::optional<Intersection> nearestHit(const Ray& ray, const PrimitiveFilter& filter,
                                         TraversalStats* stats = nullptr) const;

  const std::vector<Primitive>& primitives() const { return primitives_; }
  const std::vector<Node>& nodes() const { return nodes_; }
  const std::vector<std::uint32_t>& leafIndices() const { return leafIndices_; }
  const AABB& bounds() const { return nodes_.front().bounds; }
  const KDTreeConfig& config() const { return config_; }

private:
  std::uint32_t build(std::vector<std::uint32_t>& indices, const AABB& bounds, int depth);

  std::vector<Primitive> primitives_;
  std::vector<AABB> primBounds_;
  std::vector<Node> nodes_;
  std::vector<std::uint32_t> leafIndices_;
  KDTreeConfig config_;
};

/// Throws ConfigError on an empty primitive list.
KDTree buildKDTree(std::vector<Primitive> primitives, KDTreeConfig config = {});

/// Exhaustive nearest hit over a primitive list, used as a reference.
std::optional<Intersection> bruteForceNearestHit(const std::vector<Primitive>& primitives, const Ray& ray);

}  // namespace vls

#pragma once

#include "vls/raycast/kdtree.hpp"
#include "vls/scene/scene_part.hpp"
#include "vls/waveform/lad_lut.hpp"

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace vls {

namespace xml {
class Element;
}

struct ScenePartInfo {
  std::string id;
  std::string sourcePath;
  std::size_t primitiveCount = 0;
};

/// All primitives of a survey in one kD-tree. Immutable once built.
class Scene {
public:
  /// Bakes part transforms and material overrides, tags primitives with their part index
  /// and builds the tree. Throws ConfigError when there are no parts, a part is empty or a
  /// transmissive voxel refers to a missing leaf angle table.
  Scene(std::string id, std::vector<ScenePart> parts, std::vector<LadLut> luts = {}, KDTreeConfig config = {});

  const std::string& id() const { return id_; }
  const KDTree& tree() const { return tree_; }
  const std::vector<ScenePartInfo>& parts() const { return parts_; }
  const std::vector<LadLut>& luts() const { return luts_; }
  const AABB& bounds() const { return tree_.bounds(); }
  bool hasGround() const { return hasGround_; }

  std::optional<Intersection> nearestHit(const Ray& ray) const { return tree_.nearestHit(ray); }

  /// Height of the highest ground-flagged surface under (x, y), found with a downward ray.
  std::optional<double> groundHeight(double x, double y) const;

private:
  std::string id_;
  std::vector<ScenePartInfo> parts_;
  std::vector<LadLut> luts_;
  bool hasGround_ = false;  // set while the tree is built, so declared before it
  KDTree tree_;
};

struct SceneLoadOptions {
  /// Seeds the random shift of scaled voxels.
  std::uint64_t seed = 0;
};

/// Reads the optional `<scale value>`, `<rotation mode><rot axis angle_deg|angle_rad/></rotation>`
/// and `<translation value|x y z>` children of an element.
PartTransform parseTransform(const xml::Element& element);

/// Builds a scene from a `<scene>` element; part files resolve relative to its XML file.
Scene loadScene(const xml::Element& sceneElement, const SceneLoadOptions& options = {});

/// Loads `<scene>` from a file; `id` may be empty when the file holds a single scene.
Scene loadSceneFile(const std::filesystem::path& path, const std::string& id = {}, const SceneLoadOptions& options = {});

}  // namespace vls

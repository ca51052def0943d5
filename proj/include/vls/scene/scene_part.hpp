#pragma once

#include "vls/raycast/geometry.hpp"
#include "vls/raycast/transform.hpp"

#include <optional>
#include <string>
#include <vector>

namespace vls {

/// Primitives from one input source together with their placement in the scene.
struct ScenePart {
  std::string id;
  std::vector<Primitive> primitives;
  std::string sourcePath;
  PartTransform transform;
  std::optional<Material> materialOverride;

  /// Replaces every primitive's material with the override, when set.
  void applyMaterialOverride();
};

/// Applies the part's transform to its primitives in place and resets it to identity.
void bakeTransform(ScenePart& part);

}  // namespace vls

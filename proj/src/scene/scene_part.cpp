#include "vls/scene/scene_part.hpp"

#include <memory>

namespace vls {

void ScenePart::applyMaterialOverride() {
  if (!materialOverride) return;
  auto shared = std::make_shared<const Material>(*materialOverride);
  for (auto& prim : primitives) prim.material = shared;
}

void bakeTransform(ScenePart& part) {
  if (part.transform.isIdentity()) return;
  applyTransform(part.primitives, part.transform);
  part.transform = PartTransform{};
}

}  // namespace vls

#pragma once

#include "vls/scene/scene_part.hpp"

#include <filesystem>
#include <map>
#include <memory>
#include <optional>
#include <string>

namespace vls {

using MaterialLibrary = std::map<std::string, std::shared_ptr<const Material>>;

/// Reads newmtl blocks. Kd red channel -> reflectance, Ks red channel -> specularity;
/// `isGround` and `classification` are accepted as extension keys.
MaterialLibrary loadMtl(const std::filesystem::path& path);

/// Loads a Wavefront OBJ as one triangle primitive per face; polygons are fan-triangulated.
/// The MTL comes from `mtlPath` or else the file's mtllib directive. A missing MTL or an
/// unknown material name falls back to the default material (reflectance 0.5).
/// Throws ParseError with the line number on malformed v/f lines.
ScenePart loadWavefrontObj(const std::filesystem::path& objPath,
                           const std::optional<std::filesystem::path>& mtlPath = std::nullopt);

}  // namespace vls

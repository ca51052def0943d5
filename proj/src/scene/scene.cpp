#include "vls/scene/scene.hpp"

#include "vls/common/error.hpp"
#include "vls/common/random.hpp"
#include "vls/common/xml.hpp"
#include "vls/scene/obj_loader.hpp"
#include "vls/scene/pad_voxels.hpp"
#include "vls/scene/point_cloud.hpp"
#include "vls/scene/raster.hpp"

#include <spdlog/spdlog.h>

#include <cmath>
#include <numbers>

namespace vls {

namespace {

std::vector<Primitive> gatherPrimitives(std::vector<ScenePart>& parts, std::vector<ScenePartInfo>& info,
                                        std::size_t lutCount, bool& hasGround) {
  if (parts.empty()) throw ConfigError("scene has no parts");
  std::vector<Primitive> all;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    auto& part = parts[i];
    if (part.primitives.empty()) {
      throw ConfigError("scene part '" + part.id + "' (" + part.sourcePath + ") has no primitives");
    }
    bakeTransform(part);
    part.applyMaterialOverride();
    info.push_back({part.id, part.sourcePath, part.primitives.size()});
    for (auto& prim : part.primitives) {
      if (!prim.material) prim.material = std::make_shared<const Material>();
      if (const auto* dv = std::get_if<DetailedVoxel>(&prim.shape); dv && dv->lutIndex >= lutCount) {
        throw ConfigError("scene part '" + part.id + "' refers to a missing leaf angle table");
      }
      hasGround = hasGround || prim.material->isGround;
      prim.partIndex = static_cast<std::uint32_t>(i);
      all.push_back(std::move(prim));
    }
  }
  return all;
}

}  // namespace

Scene::Scene(std::string id, std::vector<ScenePart> parts, std::vector<LadLut> luts, KDTreeConfig config)
    : id_(std::move(id)),
      luts_(std::move(luts)),
      tree_(buildKDTree(gatherPrimitives(parts, parts_, luts_.size(), hasGround_), config)) {}

std::optional<double> Scene::groundHeight(double x, double y) const {
  const AABB& b = bounds();
  const Ray down(Vec3(x, y, b.max.z() + 1.0), -Vec3::UnitZ());
  const auto hit = tree_.nearestHit(down, [](const Primitive& p) { return p.material && p.material->isGround; });
  if (!hit) return std::nullopt;
  return hit->hitPoint.z();
}

namespace {

double degToRad(double deg) { return deg * std::numbers::pi / 180.0; }

}  // namespace

PartTransform parseTransform(const xml::Element& part) {
  PartTransform t;
  if (auto s = part.child("scale")) t.scale = s->requireNumber("value");
  if (!(t.scale > 0.0)) part.fail("scale must be > 0");
  if (auto tr = part.child("translation")) {
    if (auto v = tr->optVec3("value")) {
      t.translation = *v;
    } else {
      t.translation = Vec3(tr->number("x", 0.0), tr->number("y", 0.0), tr->number("z", 0.0));
    }
  }
  if (auto rot = part.child("rotation")) {
    const std::string mode = rot->attr("mode").value_or("extrinsic");
    if (mode == "extrinsic") t.mode = RotationMode::Extrinsic;
    else if (mode == "intrinsic") t.mode = RotationMode::Intrinsic;
    else rot->fail("rotation mode must be 'extrinsic' or 'intrinsic'");
    for (const auto& r : rot->children("rot")) {
      AxisRotation ar;
      const std::string axis = r.requireAttr("axis");
      if (axis == "x") ar.axis = Vec3::UnitX();
      else if (axis == "y") ar.axis = Vec3::UnitY();
      else if (axis == "z") ar.axis = Vec3::UnitZ();
      else if (auto v = r.optVec3("axis")) ar.axis = v->normalized();
      else r.fail("axis must be x, y, z or three numbers");
      if (auto deg = r.optNumber("angle_deg")) ar.angleRad = degToRad(*deg);
      else ar.angleRad = r.requireNumber("angle_rad");
      t.rotations.push_back(ar);
    }
  }
  return t;
}

namespace {

std::optional<Material> parseMaterialOverride(const xml::Element& part) {
  auto m = part.child("material");
  if (!m) return std::nullopt;
  Material mat;
  mat.name = m->attr("name").value_or("override");
  mat.reflectance = m->number("reflectance", mat.reflectance);
  mat.specularity = m->number("specularity", mat.specularity);
  mat.isGround = m->boolean("isGround", false);
  mat.classification = static_cast<int>(m->integer("classification", 0));
  if (mat.reflectance < 0.0 || mat.reflectance > 1.0) m->fail("reflectance must be in [0, 1]");
  if (mat.specularity < 0.0 || mat.specularity > 1.0) m->fail("specularity must be in [0, 1]");
  return mat;
}

VoxelIncidence parseIncidence(const xml::Element& e) {
  const std::string s = e.attr("incidence").value_or("faces");
  if (s == "faces") return VoxelIncidence::Faces;
  if (s == "zero") return VoxelIncidence::Zero;
  if (s == "normal") return VoxelIncidence::Normal;
  e.fail("incidence must be 'faces', 'zero' or 'normal'");
}

std::uint32_t resolveLut(const xml::Element& e, std::vector<LadLut>& luts) {
  LadLut lut = [&] {
    if (auto file = e.attr("ladFile")) return LadLut::load(xml::resolvePath(*file, e.file()));
    const std::string name = e.attr("lad").value_or("spherical");
    const auto preset = parseLadPreset(name);
    if (!preset) e.fail("unknown leaf angle distribution '" + name + "'");
    return loadLadPreset(*preset);
  }();
  for (std::size_t i = 0; i < luts.size(); ++i) {
    if (luts[i].name() == lut.name()) return static_cast<std::uint32_t>(i);
  }
  luts.push_back(std::move(lut));
  return static_cast<std::uint32_t>(luts.size() - 1);
}

ScenePart loadPart(const xml::Element& e, std::size_t index, std::vector<LadLut>& luts, const SceneLoadOptions& options) {
  const std::string type = e.requireAttr("type");
  const std::filesystem::path file = xml::resolvePath(e.requireAttr("file"), e.file());
  if (!std::filesystem::exists(file)) {
    e.fail("attribute 'file' refers to missing file " + file.string());
  }
  ScenePart part;
  if (type == "obj") {
    e.warnUnknownAttributes({"id", "type", "file", "mtl"});
    std::optional<std::filesystem::path> mtl;
    if (auto m = e.attr("mtl")) mtl = xml::resolvePath(*m, e.file());
    part = loadWavefrontObj(file, mtl);
  } else if (type == "raster") {
    e.warnUnknownAttributes({"id", "type", "file"});
    part = rasterToMesh(loadAsciiGrid(file));
  } else if (type == "xyz") {
    e.warnUnknownAttributes({"id", "type", "file", "voxelSize", "normalMode", "batchPointBudget", "incidence"});
    VoxelizeOptions vo;
    vo.voxelSize = e.requireNumber("voxelSize");
    vo.normalMode = parseNormalMode(e.attr("normalMode").value_or("none"));
    const long long budget = e.integer("batchPointBudget", static_cast<long long>(vo.batchPointBudget));
    if (budget < 1) e.fail("batchPointBudget must be >= 1");
    vo.batchPointBudget = static_cast<std::size_t>(budget);
    vo.incidence = parseIncidence(e);
    part = std::move(voxelizePointCloud(file, vo).part);
  } else if (type == "vox") {
    e.warnUnknownAttributes({"id", "type", "file", "mode", "alpha", "padMax", "randomShift", "lad", "ladFile", "incidence"});
    PadVoxelOptions po;
    po.mode = parsePadVoxelMode(e.attr("mode").value_or("transmissive"));
    po.alpha = e.number("alpha", po.alpha);
    po.padMax = e.optNumber("padMax");
    po.randomShift = e.boolean("randomShift", false);
    po.seed = deriveSeed(options.seed, index);
    po.incidence = parseIncidence(e);
    if (po.mode == PadVoxelMode::Transmissive) po.lutIndex = resolveLut(e, luts);
    part = loadPadVoxels(file, po);
  } else {
    e.fail("unknown part type '" + type + "'");
  }
  part.id = e.attr("id").value_or(file.filename().string());
  part.sourcePath = file.string();
  part.transform = parseTransform(e);
  part.materialOverride = parseMaterialOverride(e);
  e.warnUnknownChildren({"scale", "rotation", "translation", "material"});
  return part;
}

}  // namespace

Scene loadScene(const xml::Element& sceneElement, const SceneLoadOptions& options) {
  sceneElement.warnUnknownChildren({"part"});
  std::vector<ScenePart> parts;
  std::vector<LadLut> luts;
  const auto partElements = sceneElement.children("part");
  for (std::size_t i = 0; i < partElements.size(); ++i) {
    parts.push_back(loadPart(partElements[i], i, luts, options));
    spdlog::debug("loaded part '{}' with {} primitives", parts.back().id, parts.back().primitives.size());
  }
  if (parts.empty()) sceneElement.fail("scene has no <part> elements");
  return Scene(sceneElement.attr("id").value_or(""), std::move(parts), std::move(luts));
}

Scene loadSceneFile(const std::filesystem::path& path, const std::string& id, const SceneLoadOptions& options) {
  const auto doc = xml::loadDocument(path);
  const auto scenes = xml::topLevel(doc, "scene");
  for (const auto& s : scenes) {
    if (id.empty() ? scenes.size() == 1 : s.attr("id") == id) return loadScene(s, options);
  }
  throw ConfigError(path.string() + ": no matching <scene" + (id.empty() ? "" : " id=\"" + id + "\"") + ">");
}

}  // namespace vls

#include "vls/scene/obj_loader.hpp"

#include "vls/common/error.hpp"
#include "vls/common/text.hpp"

#include <spdlog/spdlog.h>

#include <algorithm>
#include <fstream>
#include <string>
#include <vector>

namespace vls {

namespace {

std::string_view stripComment(std::string_view line) {
  const auto hash = line.find('#');
  return hash == std::string_view::npos ? line : line.substr(0, hash);
}

bool parseBool(std::string_view s) { return s == "1" || s == "true" || s == "True" || s == "TRUE"; }

}  // namespace

MaterialLibrary loadMtl(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open material file " + path.string());

  MaterialLibrary lib;
  std::optional<Material> current;
  auto flush = [&]() {
    if (current) lib[current->name] = std::make_shared<const Material>(*current);
  };

  std::string raw;
  std::size_t lineNo = 0;
  while (std::getline(in, raw)) {
    ++lineNo;
    const auto tok = splitWhitespace(stripComment(raw));
    if (tok.empty()) continue;
    const auto key = tok[0];
    if (key == "newmtl") {
      flush();
      current = Material{};
      current->name = tok.size() > 1 ? std::string(tok[1]) : std::string("unnamed");
      continue;
    }
    if (!current) continue;
    auto number = [&](std::size_t i) {
      if (tok.size() <= i) throw ParseError(path.string(), lineNo, "missing value for " + std::string(key));
      const auto v = parseDouble(tok[i]);
      if (!v) throw ParseError(path.string(), lineNo, "invalid number '" + std::string(tok[i]) + "'");
      return *v;
    };
    if (key == "Kd") {
      const double r = number(1);
      if (r < 0.0 || r > 1.0) spdlog::warn("{}:{}: Kd {} clamped to [0,1]", path.string(), lineNo, r);
      current->reflectance = std::clamp(r, 0.0, 1.0);
    } else if (key == "Ks") {
      current->specularity = std::clamp(number(1), 0.0, 1.0);
    } else if (key == "isGround") {
      current->isGround = tok.size() > 1 && parseBool(tok[1]);
    } else if (key == "classification") {
      current->classification = static_cast<int>(number(1));
    }
  }
  flush();
  return lib;
}

ScenePart loadWavefrontObj(const std::filesystem::path& objPath, const std::optional<std::filesystem::path>& mtlPath) {
  std::ifstream in(objPath);
  if (!in) throw IoError("cannot open OBJ file " + objPath.string());

  ScenePart part;
  part.id = objPath.stem().string();
  part.sourcePath = objPath.string();

  const auto defaultMaterial = std::make_shared<const Material>();
  MaterialLibrary lib;
  bool libLoaded = false;
  auto loadLibrary = [&](const std::filesystem::path& p) {
    if (std::filesystem::exists(p)) {
      for (auto& [name, mat] : loadMtl(p)) lib[name] = mat;
      libLoaded = true;
    } else {
      spdlog::warn("material file {} not found; using default materials", p.string());
    }
  };
  if (mtlPath) loadLibrary(*mtlPath);

  std::vector<Vec3> vertices;
  std::shared_ptr<const Material> material = defaultMaterial;
  std::size_t degenerate = 0;
  std::string raw;
  std::size_t lineNo = 0;

  while (std::getline(in, raw)) {
    ++lineNo;
    const auto tok = splitWhitespace(stripComment(raw));
    if (tok.empty()) continue;
    const auto key = tok[0];

    if (key == "v") {
      if (tok.size() < 4) throw ParseError(objPath.string(), lineNo, "vertex needs three coordinates");
      Vec3 v;
      for (int i = 0; i < 3; ++i) {
        const auto c = parseDouble(tok[i + 1]);
        if (!c) throw ParseError(objPath.string(), lineNo, "invalid vertex coordinate '" + std::string(tok[i + 1]) + "'");
        v[i] = *c;
      }
      vertices.push_back(v);
    } else if (key == "f") {
      if (tok.size() < 4) throw ParseError(objPath.string(), lineNo, "face needs at least three vertices");
      std::vector<std::size_t> idx;
      idx.reserve(tok.size() - 1);
      for (std::size_t i = 1; i < tok.size(); ++i) {
        const auto slash = tok[i].find('/');
        const auto head = tok[i].substr(0, slash);
        const auto n = parseInt(head);
        if (!n || *n == 0) throw ParseError(objPath.string(), lineNo, "invalid face index '" + std::string(tok[i]) + "'");
        const long long count = static_cast<long long>(vertices.size());
        const long long resolved = *n > 0 ? *n - 1 : count + *n;
        if (resolved < 0 || resolved >= count) {
          throw ParseError(objPath.string(), lineNo, "face index " + std::to_string(*n) + " out of range");
        }
        idx.push_back(static_cast<std::size_t>(resolved));
      }
      for (std::size_t k = 1; k + 1 < idx.size(); ++k) {
        Triangle tri(vertices[idx[0]], vertices[idx[k]], vertices[idx[k + 1]]);
        if (tri.area() <= kMinTriangleArea) {
          ++degenerate;
          continue;
        }
        Primitive prim;
        prim.shape = tri;
        prim.material = material;
        part.primitives.push_back(std::move(prim));
      }
    } else if (key == "usemtl") {
      const std::string name = tok.size() > 1 ? std::string(tok[1]) : std::string();
      const auto it = lib.find(name);
      if (it != lib.end()) {
        material = it->second;
      } else {
        if (libLoaded) spdlog::warn("{}:{}: unknown material '{}'; using defaults", objPath.string(), lineNo, name);
        auto fallback = std::make_shared<Material>();
        fallback->name = name;
        material = fallback;
      }
    } else if (key == "mtllib") {
      if (!mtlPath && tok.size() > 1) loadLibrary(objPath.parent_path() / std::string(tok[1]));
    }
  }
  if (degenerate > 0) spdlog::warn("{}: skipped {} degenerate triangles", objPath.string(), degenerate);
  return part;
}

}  // namespace vls

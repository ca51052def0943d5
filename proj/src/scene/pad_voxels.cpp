#include "vls/scene/pad_voxels.hpp"

#include "vls/common/error.hpp"
#include "vls/common/random.hpp"
#include "vls/common/text.hpp"

#include <spdlog/spdlog.h>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <string>

namespace vls {

Vec3 PadVoxelFile::cellCentre(const std::array<std::int64_t, 3>& ijk) const {
  return minCorner + resolution * Vec3(ijk[0] + 0.5, ijk[1] + 0.5, ijk[2] + 0.5);
}

double PadVoxelFile::maxPad() const {
  double m = 0.0;
  for (const auto& r : records) m = std::max(m, r.pad);
  return m;
}

PadVoxelMode parsePadVoxelMode(std::string_view text) {
  if (text == "opaque") return PadVoxelMode::Opaque;
  if (text == "scaled") return PadVoxelMode::Scaled;
  if (text == "transmissive") return PadVoxelMode::Transmissive;
  throw ConfigError("unknown voxel mode '" + std::string(text) + "'");
}

PadVoxelFile loadPadVoxelFile(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open voxel file " + path.string());
  PadVoxelFile f;
  bool haveMin = false, haveMax = false, haveSplit = false;
  std::string raw;
  std::size_t lineNo = 0;
  const std::string where = path.string();

  auto parseVec = [&](const std::vector<std::string_view>& tok) {
    if (tok.size() != 4) throw ParseError(where, lineNo, "expected three values after '" + std::string(tok[0]) + "'");
    Vec3 v;
    for (int a = 0; a < 3; ++a) {
      const auto d = parseDouble(tok[a + 1]);
      if (!d) throw ParseError(where, lineNo, "invalid number '" + std::string(tok[a + 1]) + "'");
      v[a] = *d;
    }
    return v;
  };

  while (std::getline(in, raw)) {
    ++lineNo;
    if (const auto hash = raw.find('#'); hash != std::string::npos) raw.resize(hash);
    const auto tok = splitWhitespace(raw);
    if (tok.empty()) continue;
    if (tok[0] == "min_corner:") {
      f.minCorner = parseVec(tok);
      haveMin = true;
    } else if (tok[0] == "max_corner:") {
      f.maxCorner = parseVec(tok);
      haveMax = true;
    } else if (tok[0] == "split:") {
      const Vec3 s = parseVec(tok);
      for (int a = 0; a < 3; ++a) {
        if (s[a] < 1.0 || s[a] != std::floor(s[a])) throw ParseError(where, lineNo, "split counts must be positive integers");
        f.split[a] = static_cast<std::int64_t>(s[a]);
      }
      haveSplit = true;
    } else if (tok[0].back() == ':') {
      throw ParseError(where, lineNo, "unknown header '" + std::string(tok[0]) + "'");
    } else {
      if (!(haveMin && haveMax && haveSplit)) throw ParseError(where, lineNo, "voxel rows before a complete header");
      if (tok.size() != 4) throw ParseError(where, lineNo, "expected 'i j k PAD'");
      PadVoxelRecord rec;
      for (int a = 0; a < 3; ++a) {
        const auto v = parseInt(tok[a]);
        if (!v) throw ParseError(where, lineNo, "invalid index '" + std::string(tok[a]) + "'");
        if (*v < 0 || *v >= f.split[a]) throw ParseError(where, lineNo, "index outside the grid");
        rec.ijk[a] = *v;
      }
      const auto pad = parseDouble(tok[3]);
      if (!pad || !std::isfinite(*pad)) throw ParseError(where, lineNo, "invalid PAD '" + std::string(tok[3]) + "'");
      if (*pad < 0.0) throw ParseError(where, lineNo, "PAD must be >= 0");
      rec.pad = *pad;
      f.records.push_back(rec);
    }
  }
  if (!(haveMin && haveMax && haveSplit)) throw ParseError(where, lineNo, "missing min_corner, max_corner or split header");
  Vec3 res;
  for (int a = 0; a < 3; ++a) {
    res[a] = (f.maxCorner[a] - f.minCorner[a]) / static_cast<double>(f.split[a]);
    if (!(res[a] > 0.0)) throw ParseError(where, lineNo, "max_corner must exceed min_corner");
  }
  const double tol = 1e-6 * res.maxCoeff();
  if (std::abs(res[0] - res[1]) > tol || std::abs(res[0] - res[2]) > tol) {
    throw ParseError(where, lineNo, "voxel cells must be cubic");
  }
  f.resolution = res[0];
  return f;
}

double scaledVoxelSide(double a0, double pad, double padMax, double alpha) {
  if (!(padMax > 0.0)) throw DomainError("PADmax must be > 0");
  if (alpha < 0.0) throw DomainError("alpha must be >= 0");
  const double ratio = std::clamp(pad, 0.0, padMax) / padMax;
  return a0 * std::pow(ratio, alpha);
}

ScenePart padVoxelsToPart(const PadVoxelFile& file, const PadVoxelOptions& options) {
  ScenePart part;
  auto material = std::make_shared<const Material>();
  const double a0 = file.resolution;
  double padMax = options.padMax.value_or(file.maxPad());
  if (options.mode == PadVoxelMode::Scaled) {
    if (options.alpha < 0.0) throw ConfigError("voxel scaling exponent must be >= 0");
    if (!(padMax > 0.0)) throw ConfigError("PADmax must be > 0");
  }
  RandomStream shiftRng(deriveSeed(options.seed, 0x5348494654ULL));
  std::size_t clamped = 0;

  for (const auto& rec : file.records) {
    if (rec.pad <= 0.0) continue;
    const Vec3 centre = file.cellCentre(rec.ijk);
    Primitive prim;
    prim.material = material;
    switch (options.mode) {
      case PadVoxelMode::Opaque: {
        Voxel v;
        v.centre = centre;
        v.halfSize = 0.5 * a0;
        v.incidence = options.incidence;
        prim.shape = v;
        break;
      }
      case PadVoxelMode::Scaled: {
        if (rec.pad > padMax) ++clamped;
        Voxel v;
        v.centre = centre;
        v.halfSize = 0.5 * scaledVoxelSide(a0, rec.pad, padMax, options.alpha);
        v.incidence = options.incidence;
        if (options.randomShift) {
          for (int a = 0; a < 3; ++a) v.centre[a] += shiftRng.uniform(-0.25 * a0, 0.25 * a0);
        }
        if (!(v.halfSize > 0.0)) continue;
        prim.shape = v;
        break;
      }
      case PadVoxelMode::Transmissive: {
        DetailedVoxel v;
        v.centre = centre;
        v.halfSize = 0.5 * a0;
        v.pad = rec.pad;
        v.lutIndex = options.lutIndex;
        prim.shape = v;
        break;
      }
    }
    part.primitives.push_back(std::move(prim));
  }
  if (clamped > 0) spdlog::warn("{} voxel(s) exceed PADmax = {}, clamped", clamped, padMax);
  return part;
}

ScenePart loadPadVoxels(const std::filesystem::path& path, const PadVoxelOptions& options) {
  auto part = padVoxelsToPart(loadPadVoxelFile(path), options);
  part.sourcePath = path.string();
  return part;
}

}  // namespace vls

#include "vls/waveform/lad_lut.hpp"

#include "vls/common/error.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <numbers>
#include <sstream>

#ifndef VLS_DEFAULT_DATA_DIR
#define VLS_DEFAULT_DATA_DIR "data"
#endif

namespace vls {

LadLut::LadLut(std::string name, std::vector<LadLutRow> rows) : name_(std::move(name)), rows_(std::move(rows)) {
  if (rows_.size() < 2) {
    throw ConfigError("leaf angle distribution table '" + name_ + "' needs at least two rows");
  }
  for (const auto& r : rows_) {
    const bool inRange = r.horizontal >= 0.0 && r.horizontal <= 1.0 && r.vertical >= 0.0 && r.vertical <= 1.0;
    const bool unit = std::abs(r.horizontal * r.horizontal + r.vertical * r.vertical - 1.0) <= 1e-6;
    if (!inRange || !unit || !(r.g > 0.0)) {
      std::ostringstream msg;
      msg << "invalid row in leaf angle distribution table '" << name_ << "': " << r.horizontal << ' '
          << r.vertical << ' ' << r.g;
      throw ConfigError(msg.str());
    }
  }
  std::stable_sort(rows_.begin(), rows_.end(),
                   [](const LadLutRow& a, const LadLutRow& b) { return a.vertical < b.vertical; });
}

LadLut LadLut::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open leaf angle distribution table " + path.string());
  std::vector<LadLutRow> rows;
  std::string line;
  std::size_t lineNo = 0;
  while (std::getline(in, line)) {
    ++lineNo;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::istringstream ss(line);
    LadLutRow row;
    if (!(ss >> row.horizontal)) continue;
    std::string rest;
    if (!(ss >> row.vertical >> row.g) || (ss >> rest)) {
      throw ParseError(path.string(), lineNo, "expected 'horizontal vertical g_L'");
    }
    rows.push_back(row);
  }
  return LadLut(path.stem().string(), std::move(rows));
}

std::optional<LadPreset> parseLadPreset(std::string_view name) {
  if (name == "planophile") return LadPreset::Planophile;
  if (name == "erectophile") return LadPreset::Erectophile;
  if (name == "plagiophile") return LadPreset::Plagiophile;
  if (name == "extremophile") return LadPreset::Extremophile;
  if (name == "spherical") return LadPreset::Spherical;
  if (name == "uniform") return LadPreset::Uniform;
  return std::nullopt;
}

std::string_view ladPresetName(LadPreset preset) {
  switch (preset) {
    case LadPreset::Planophile: return "planophile";
    case LadPreset::Erectophile: return "erectophile";
    case LadPreset::Plagiophile: return "plagiophile";
    case LadPreset::Extremophile: return "extremophile";
    case LadPreset::Spherical: return "spherical";
    case LadPreset::Uniform: return "uniform";
  }
  return "unknown";
}

std::filesystem::path dataDirectory() {
  if (const char* env = std::getenv("VLS_DATA_DIR"); env && *env) return env;
  return VLS_DEFAULT_DATA_DIR;
}

LadLut loadLadPreset(LadPreset preset) {
  return LadLut::load(dataDirectory() / "ladlut" / (std::string(ladPresetName(preset)) + ".txt"));
}

double azimuthalAbsCosIntegral(double a, double b) {
  if (b <= a) return 2.0 * std::numbers::pi * a;
  return 4.0 * std::sqrt(b * b - a * a) + 4.0 * a * std::asin(a / b);
}

double extinctionCoefficient(double pad, const LadLut& lut, const Vec3& rayDirection) {
  if (pad == 0.0) return 0.0;
  const Vec3 d = rayDirection.normalized();
  const double cosZ = std::abs(d.z());
  const double sinZ = std::sqrt(std::max(0.0, 1.0 - cosZ * cosZ));

  // Leaf direction with vertical component v: a = cos(theta')*v, b = sin(theta')*sqrt(1-v^2),
  // and dOmega = dv dphi over the upper hemisphere.
  const auto& rows = lut.rows();
  auto integrand = [&](const LadLutRow& r) {
    const double h = std::sqrt(std::max(0.0, 1.0 - r.vertical * r.vertical));
    return r.g * azimuthalAbsCosIntegral(cosZ * r.vertical, sinZ * h);
  };
  double sum = 0.0;
  for (std::size_t i = 1; i < rows.size(); ++i) {
    const double dv = rows[i].vertical - rows[i - 1].vertical;
    sum += 0.5 * dv * (integrand(rows[i - 1]) + integrand(rows[i]));
  }
  return pad / (2.0 * std::numbers::pi) * sum;
}

}  // namespace vls

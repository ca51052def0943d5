#pragma once

#include "vls/raycast/geometry.hpp"

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace vls {

struct LadLutRow {
  double horizontal = 1.0;
  double vertical = 0.0;
  double g = 0.0;  // hit probability g_L
};

/// Leaf angle distribution lookup table: g_L sampled at directions given by their
/// horizontal and vertical components. Rows are kept sorted by vertical component.
class LadLut {
public:
  /// Validates and sorts. Throws ConfigError on an empty table or invalid rows.
  LadLut(std::string name, std::vector<LadLutRow> rows);

  /// Reads `horizontal vertical g_L` rows; '#' starts a comment.
  static LadLut load(const std::filesystem::path& path);

  const std::string& name() const { return name_; }
  const std::vector<LadLutRow>& rows() const { return rows_; }

private:
  std::string name_;
  std::vector<LadLutRow> rows_;
};

enum class LadPreset { Planophile, Erectophile, Plagiophile, Extremophile, Spherical, Uniform };

std::optional<LadPreset> parseLadPreset(std::string_view name);
std::string_view ladPresetName(LadPreset preset);

/// Root of the shipped data files; `VLS_DATA_DIR` in the environment overrides the build default.
std::filesystem::path dataDirectory();
LadLut loadLadPreset(LadPreset preset);

/// Extinction coefficient (1/m) for a ray crossing vegetation with plant area density `pad`.
/// The leaf-direction integral of g_L |cos| uses the trapezoidal rule over the table's
/// vertical-component samples with the azimuthal part done in closed form.
double extinctionCoefficient(double pad, const LadLut& lut, const Vec3& rayDirection);

/// Closed form of the integral over phi in [0, 2pi) of |a + b cos(phi)|, for a, b >= 0.
double azimuthalAbsCosIntegral(double a, double b);

}  // namespace vls

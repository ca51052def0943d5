#pragma once

#include "vls/scene/scene_part.hpp"

#include <filesystem>
#include <memory>
#include <vector>

namespace vls {

/// Height raster. Row 0 is the northern edge; values are row-major.
struct RasterGrid {
  std::size_t ncols = 0;
  std::size_t nrows = 0;
  double xllcorner = 0.0;
  double yllcorner = 0.0;
  double cellSize = 1.0;
  double nodata = -9999.0;
  std::vector<double> values;

  double at(std::size_t row, std::size_t col) const { return values[row * ncols + col]; }
  bool valid(std::size_t row, std::size_t col) const { return at(row, col) != nodata; }
  /// Pixel centre in world coordinates.
  Vec3 point(std::size_t row, std::size_t col) const;
};

/// Reads an ASCII grid (ncols, nrows, xllcorner|xllcenter, yllcorner|yllcenter, cellsize,
/// NODATA_value, then nrows x ncols heights).
RasterGrid loadAsciiGrid(const std::filesystem::path& path);

/// Two triangles per 2x2 block of valid pixel centres, split along the lower-left to
/// upper-right diagonal. Blocks touching a no-data pixel are left out.
/// Throws ConfigError for grids smaller than 2x2 or without any valid pixel.
ScenePart rasterToMesh(const RasterGrid& grid, std::shared_ptr<const Material> material = nullptr);

}  // namespace vls

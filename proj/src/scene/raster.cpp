#include "vls/scene/raster.hpp"

#include "vls/common/error.hpp"
#include "vls/common/text.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <string>

namespace vls {

Vec3 RasterGrid::point(std::size_t row, std::size_t col) const {
  const double x = xllcorner + (static_cast<double>(col) + 0.5) * cellSize;
  const double y = yllcorner + (static_cast<double>(nrows - row) - 0.5) * cellSize;
  return {x, y, at(row, col)};
}

RasterGrid loadAsciiGrid(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open raster " + path.string());

  RasterGrid g;
  bool haveCols = false, haveRows = false, haveX = false, haveY = false, haveSize = false;
  bool xCentre = false, yCentre = false;
  std::string raw;
  std::size_t lineNo = 0;
  std::size_t expected = 0;

  auto headerValue = [&](std::string_view tok) {
    const auto v = parseDouble(tok);
    if (!v) throw ParseError(path.string(), lineNo, "invalid header value '" + std::string(tok) + "'");
    return *v;
  };

  while (std::getline(in, raw)) {
    ++lineNo;
    const auto tok = splitWhitespace(raw);
    if (tok.empty()) continue;
    std::string key(tok[0]);
    std::transform(key.begin(), key.end(), key.begin(), [](unsigned char c) { return std::tolower(c); });
    const bool isHeader = std::isalpha(static_cast<unsigned char>(key[0])) != 0;
    if (isHeader) {
      if (tok.size() != 2) throw ParseError(path.string(), lineNo, "header line needs 'key value'");
      const double v = headerValue(tok[1]);
      if (key == "ncols") { g.ncols = static_cast<std::size_t>(v); haveCols = true; }
      else if (key == "nrows") { g.nrows = static_cast<std::size_t>(v); haveRows = true; }
      else if (key == "xllcorner") { g.xllcorner = v; haveX = true; }
      else if (key == "yllcorner") { g.yllcorner = v; haveY = true; }
      else if (key == "xllcenter") { g.xllcorner = v; haveX = true; xCentre = true; }
      else if (key == "yllcenter") { g.yllcorner = v; haveY = true; yCentre = true; }
      else if (key == "cellsize") { g.cellSize = v; haveSize = true; }
      else if (key == "nodata_value") { g.nodata = v; }
      else throw ParseError(path.string(), lineNo, "unknown header key '" + key + "'");
      continue;
    }
    if (!(haveCols && haveRows && haveX && haveY && haveSize)) {
      throw ParseError(path.string(), lineNo, "incomplete raster header");
    }
    if (expected == 0) {
      expected = g.ncols * g.nrows;
      g.values.reserve(expected);
    }
    for (auto t : tok) {
      const auto v = parseDouble(t);
      if (!v) throw ParseError(path.string(), lineNo, "invalid height value '" + std::string(t) + "'");
      g.values.push_back(*v);
    }
  }
  if (!(g.cellSize > 0.0)) throw ParseError(path.string(), lineNo, "cellsize must be > 0");
  if (g.values.size() != g.ncols * g.nrows) {
    throw ParseError(path.string(), lineNo,
                     "expected " + std::to_string(g.ncols * g.nrows) + " values, found " + std::to_string(g.values.size()));
  }
  if (xCentre) g.xllcorner -= 0.5 * g.cellSize;
  if (yCentre) g.yllcorner -= 0.5 * g.cellSize;
  return g;
}

ScenePart rasterToMesh(const RasterGrid& grid, std::shared_ptr<const Material> material) {
  if (grid.ncols < 2 || grid.nrows < 2) throw ConfigError("raster must be at least 2x2 pixels");
  if (grid.values.size() != grid.ncols * grid.nrows) throw ConfigError("raster value count does not match its size");
  const bool anyValid = std::any_of(grid.values.begin(), grid.values.end(), [&](double v) { return v != grid.nodata; });
  if (!anyValid) throw ConfigError("raster contains only no-data pixels");
  if (!material) material = std::make_shared<const Material>();

  ScenePart part;
  for (std::size_t r = 0; r + 1 < grid.nrows; ++r) {
    for (std::size_t c = 0; c + 1 < grid.ncols; ++c) {
      // Row r is north of row r+1.
      if (!grid.valid(r, c) || !grid.valid(r, c + 1) || !grid.valid(r + 1, c) || !grid.valid(r + 1, c + 1)) continue;
      const Vec3 lowerLeft = grid.point(r + 1, c);
      const Vec3 lowerRight = grid.point(r + 1, c + 1);
      const Vec3 upperLeft = grid.point(r, c);
      const Vec3 upperRight = grid.point(r, c + 1);
      for (const Triangle& tri : {Triangle(lowerLeft, lowerRight, upperRight), Triangle(lowerLeft, upperRight, upperLeft)}) {
        Primitive prim;
        prim.shape = tri;
        prim.material = material;
        part.primitives.push_back(std::move(prim));
      }
    }
  }
  return part;
}

}  // namespace vls

#include "vls/scene/point_cloud.hpp"

#include "vls/common/error.hpp"
#include "vls/common/text.hpp"

#include <Eigen/SVD>
#include <spdlog/spdlog.h>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <string>
#include <unordered_map>

namespace vls {

NormalMode parseNormalMode(std::string_view text) {
  if (text == "nearestToCentre") return NormalMode::NearestToCentre;
  if (text == "average") return NormalMode::Average;
  if (text == "estimate") return NormalMode::Estimate;
  if (text == "none") return NormalMode::None;
  throw ConfigError("unknown normal mode '" + std::string(text) + "'");
}

VoxelGridSpec VoxelGridSpec::fromBounds(const AABB& bounds, double resolution) {
  if (!(resolution > 0.0)) throw ConfigError("voxel size must be > 0");
  if (!bounds.valid()) throw ConfigError("voxel grid bounds are empty");
  VoxelGridSpec g;
  g.minCorner = bounds.min;
  g.maxCorner = bounds.max;
  g.resolution = resolution;
  for (int a = 0; a < 3; ++a) {
    const double n = std::ceil((bounds.max[a] - bounds.min[a]) / resolution);
    g.counts[a] = std::max<std::size_t>(1, static_cast<std::size_t>(n));
  }
  return g;
}

std::array<std::size_t, 3> VoxelGridSpec::cellOf(const Vec3& p) const {
  std::array<std::size_t, 3> ijk{};
  for (int a = 0; a < 3; ++a) {
    const double f = std::floor((p[a] - minCorner[a]) / resolution);
    const double clamped = std::clamp(f, 0.0, static_cast<double>(counts[a] - 1));
    ijk[a] = static_cast<std::size_t>(clamped);
  }
  return ijk;
}

Vec3 VoxelGridSpec::cellCentre(const std::array<std::size_t, 3>& ijk) const {
  return minCorner + resolution * Vec3(ijk[0] + 0.5, ijk[1] + 0.5, ijk[2] + 0.5);
}

NormalEstimate estimateNormalSVD(std::span<const Vec3> points) {
  NormalEstimate out;
  if (points.size() < 3) {
    out.degenerate = true;
    return out;
  }
  Vec3 mean = Vec3::Zero();
  for (const auto& p : points) mean += p;
  mean /= static_cast<double>(points.size());
  Eigen::MatrixX3d centred(points.size(), 3);
  for (std::size_t i = 0; i < points.size(); ++i) centred.row(static_cast<Eigen::Index>(i)) = (points[i] - mean).transpose();

  Eigen::JacobiSVD<Eigen::MatrixX3d> svd(centred, Eigen::ComputeThinV);
  const Vec3 s = svd.singularValues();
  // Collinear or coincident points do not define a plane.
  if (!(s[0] > 0.0) || s[1] <= 1e-9 * s[0]) {
    out.degenerate = true;
    return out;
  }
  Vec3 n = svd.matrixV().col(2).normalized();
  const bool flip = n.z() < 0.0 || (n.z() == 0.0 && (n.y() < 0.0 || (n.y() == 0.0 && n.x() < 0.0)));
  if (flip) n = -n;
  out.normal = n;
  return out;
}

Rgb averageColor(std::span<const std::array<double, 3>> colors) {
  Rgb out{0, 0, 0};
  if (colors.empty()) return out;
  for (int c = 0; c < 3; ++c) {
    double sumSq = 0.0;
    for (const auto& col : colors) sumSq += col[c] * col[c];
    const double v = std::round(std::sqrt(sumSq / static_cast<double>(colors.size())));
    out[c] = static_cast<std::uint8_t>(std::clamp(v, 0.0, 255.0));
  }
  return out;
}

namespace {

struct XyzRow {
  Vec3 p;
  std::optional<Vec3> n;
  std::optional<std::array<double, 3>> rgb;
};

/// Streams rows of an XYZ file. All data rows must share the first row's column count.
class XyzReader {
public:
  explicit XyzReader(const std::filesystem::path& path) : path_(path), in_(path) {
    if (!in_) throw IoError("cannot open point cloud " + path.string());
  }

  bool next(XyzRow& row) {
    std::string line;
    while (std::getline(in_, line)) {
      ++lineNo_;
      const auto tok = splitWhitespace(line);
      if (tok.empty() || tok[0].front() == '#') continue;
      if (columns_ == 0) {
        columns_ = tok.size();
        if (columns_ != 3 && columns_ != 6 && columns_ != 9) {
          throw ParseError(path_.string(), lineNo_, "expected 3, 6 or 9 columns, found " + std::to_string(columns_));
        }
      } else if (tok.size() != columns_) {
        throw ParseError(path_.string(), lineNo_, "expected " + std::to_string(columns_) + " columns");
      }
      double v[9];
      for (std::size_t i = 0; i < columns_; ++i) {
        const auto d = parseDouble(tok[i]);
        if (!d) throw ParseError(path_.string(), lineNo_, "non-numeric value '" + std::string(tok[i]) + "'");
        v[i] = *d;
      }
      row.p = Vec3(v[0], v[1], v[2]);
      row.n.reset();
      row.rgb.reset();
      if (columns_ >= 6) row.n = Vec3(v[3], v[4], v[5]);
      if (columns_ == 9) row.rgb = std::array<double, 3>{v[6], v[7], v[8]};
      return true;
    }
    return false;
  }

  std::size_t columns() const { return columns_; }

private:
  std::filesystem::path path_;
  std::ifstream in_;
  std::size_t lineNo_ = 0;
  std::size_t columns_ = 0;
};

struct CellAccumulator {
  Vec3 sum = Vec3::Zero();
  std::size_t count = 0;
  Vec3 normalSum = Vec3::Zero();
  Vec3 nearestNormal = Vec3::UnitZ();
  double nearestDist2 = std::numeric_limits<double>::infinity();
  std::vector<Vec3> points;                   // estimate mode only
  std::vector<std::array<double, 3>> colors;  // only with colour columns
};

}  // namespace

VoxelizeResult voxelizePointCloud(const std::filesystem::path& xyzPath, const VoxelizeOptions& options) {
  VoxelizeResult result;
  AABB bounds;
  std::size_t columns = 0;
  {
    XyzReader reader(xyzPath);
    XyzRow row;
    while (reader.next(row)) {
      bounds.extend(row.p);
      ++result.totalPoints;
    }
    columns = reader.columns();
  }
  if (result.totalPoints == 0) throw ConfigError("point cloud " + xyzPath.string() + " contains no points");
  const bool needsNormals = options.normalMode == NormalMode::NearestToCentre || options.normalMode == NormalMode::Average;
  if (needsNormals && columns < 6) {
    throw ConfigError("normal mode requires normal columns in " + xyzPath.string());
  }
  const bool hasColor = columns == 9;

  result.grid = VoxelGridSpec::fromBounds(bounds, options.voxelSize);
  const auto& grid = result.grid;
  const std::size_t budget = std::max<std::size_t>(1, options.batchPointBudget);
  std::size_t batches = (result.totalPoints + budget - 1) / budget;
  batches = std::clamp<std::size_t>(batches, 1, grid.counts[0]);
  result.batches = batches;

  auto material = std::make_shared<const Material>();
  result.part.sourcePath = xyzPath.string();
  std::size_t degenerateNormals = 0;

  for (std::size_t b = 0; b < batches; ++b) {
    // x-slab of cell columns [lo, hi)
    const std::size_t lo = b * grid.counts[0] / batches;
    const std::size_t hi = (b + 1) * grid.counts[0] / batches;
    std::unordered_map<std::size_t, CellAccumulator> cells;

    XyzReader reader(xyzPath);
    XyzRow row;
    while (reader.next(row)) {
      const auto ijk = grid.cellOf(row.p);
      if (ijk[0] < lo || ijk[0] >= hi) continue;
      auto& acc = cells[grid.linearIndex(ijk)];
      acc.sum += row.p;
      ++acc.count;
      if (row.n) {
        acc.normalSum += *row.n;
        const double d2 = (row.p - grid.cellCentre(ijk)).squaredNorm();
        if (d2 < acc.nearestDist2) {
          acc.nearestDist2 = d2;
          acc.nearestNormal = *row.n;
        }
      }
      if (options.normalMode == NormalMode::Estimate) acc.points.push_back(row.p);
      if (hasColor && row.rgb) acc.colors.push_back(*row.rgb);
    }

    std::vector<std::size_t> keys;
    keys.reserve(cells.size());
    for (const auto& kv : cells) keys.push_back(kv.first);
    std::sort(keys.begin(), keys.end());

    for (const std::size_t key : keys) {
      auto& acc = cells[key];
      const std::size_t k = key % grid.counts[2];
      const std::size_t j = (key / grid.counts[2]) % grid.counts[1];
      const std::size_t i = key / (grid.counts[2] * grid.counts[1]);
      VoxelAggregate agg;
      agg.cell = key;
      agg.centre = grid.cellCentre({i, j, k});
      agg.meanPoint = acc.sum / static_cast<double>(acc.count);
      agg.pointCount = acc.count;
      switch (options.normalMode) {
        case NormalMode::NearestToCentre:
          if (acc.nearestNormal.norm() > 0.0) agg.normal = acc.nearestNormal.normalized();
          break;
        case NormalMode::Average:
          if (acc.normalSum.norm() > 1e-12) agg.normal = acc.normalSum.normalized();
          break;
        case NormalMode::Estimate: {
          const auto est = estimateNormalSVD(acc.points);
          if (est.degenerate) ++degenerateNormals;
          agg.normal = est.normal;
          break;
        }
        case NormalMode::None:
          break;
      }
      if (!acc.colors.empty()) agg.color = averageColor(acc.colors);

      Voxel vox;
      vox.centre = agg.centre;
      vox.halfSize = 0.5 * grid.resolution;
      vox.normal = agg.normal;
      vox.incidence = options.incidence;
      Primitive prim;
      prim.shape = vox;
      prim.material = material;
      result.part.primitives.push_back(std::move(prim));
      result.voxels.push_back(std::move(agg));
    }
  }
  if (degenerateNormals > 0) {
    spdlog::warn("{}: {} voxel(s) had too few or collinear points for a plane fit, normal set to (0,0,1)",
                 xyzPath.string(), degenerateNormals);
  }
  return result;
}

}  // namespace vls

#pragma once

// Minimal LAS 1.0 reader written from the published header layout, kept separate from
// the library writer so round trips check the file format and not the code against itself.

#include <array>
#include <cstdint>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <stdexcept>
#include <string>
#include <vector>

namespace vls::test {

struct LasPoint {
  std::int32_t xi = 0, yi = 0, zi = 0;
  double x = 0, y = 0, z = 0;
  std::uint16_t intensity = 0;
  int returnNumber = 0;
  int totalReturns = 0;
  int classification = 0;
  int scanAngle = 0;
  double gpsTime = 0;
};

struct LasFile {
  std::string signature;
  int versionMajor = 0, versionMinor = 0;
  std::uint16_t headerSize = 0;
  std::uint32_t pointOffset = 0;
  std::uint32_t vlrCount = 0;
  int pointFormat = -1;
  std::uint16_t recordLength = 0;
  std::uint32_t pointCount = 0;
  std::array<std::uint32_t, 5> byReturn{};
  std::array<double, 3> scale{}, offset{}, max{}, min{};
  std::vector<LasPoint> points;
  std::size_t fileSize = 0;
};

namespace detail {
template <class T>
T le(const std::vector<unsigned char>& b, std::size_t at) {
  if (at + sizeof(T) > b.size()) throw std::runtime_error("LAS file truncated");
  T v;
  std::memcpy(&v, b.data() + at, sizeof(T));
  return v;
}
}  // namespace detail

inline LasFile readLas(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  const std::vector<unsigned char> b((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  using detail::le;
  LasFile f;
  f.fileSize = b.size();
  f.signature.assign(reinterpret_cast<const char*>(b.data()), 4);
  f.versionMajor = le<std::uint8_t>(b, 24);
  f.versionMinor = le<std::uint8_t>(b, 25);
  f.headerSize = le<std::uint16_t>(b, 94);
  f.pointOffset = le<std::uint32_t>(b, 96);
  f.vlrCount = le<std::uint32_t>(b, 100);
  f.pointFormat = le<std::uint8_t>(b, 104);
  f.recordLength = le<std::uint16_t>(b, 105);
  f.pointCount = le<std::uint32_t>(b, 107);
  for (int i = 0; i < 5; ++i) f.byReturn[i] = le<std::uint32_t>(b, 111 + 4 * i);
  for (int a = 0; a < 3; ++a) {
    f.scale[a] = le<double>(b, 131 + 8 * a);
    f.offset[a] = le<double>(b, 155 + 8 * a);
    f.max[a] = le<double>(b, 179 + 16 * a);
    f.min[a] = le<double>(b, 187 + 16 * a);
  }
  for (std::uint32_t i = 0; i < f.pointCount; ++i) {
    const std::size_t at = f.pointOffset + static_cast<std::size_t>(i) * f.recordLength;
    LasPoint p;
    p.xi = le<std::int32_t>(b, at);
    p.yi = le<std::int32_t>(b, at + 4);
    p.zi = le<std::int32_t>(b, at + 8);
    p.x = p.xi * f.scale[0] + f.offset[0];
    p.y = p.yi * f.scale[1] + f.offset[1];
    p.z = p.zi * f.scale[2] + f.offset[2];
    p.intensity = le<std::uint16_t>(b, at + 12);
    const auto bits = le<std::uint8_t>(b, at + 14);
    p.returnNumber = bits & 0x7;
    p.totalReturns = (bits >> 3) & 0x7;
    p.classification = le<std::uint8_t>(b, at + 15);
    p.scanAngle = le<std::int8_t>(b, at + 16);
    p.gpsTime = le<double>(b, at + 20);
    f.points.push_back(p);
  }
  return f;
}

}  // namespace vls::test

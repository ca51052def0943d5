#include "vls/survey/output.hpp"

#include "vls/common/error.hpp"

#include <fmt/format.h>
#include <zlib.h>

#include <algorithm>
#include <array>
#include <cmath>
#include <cstring>
#include <fstream>
#include <limits>

namespace vls {

std::vector<double> pointsToArray(const std::vector<MeasurementRecord>& points) {
  std::vector<double> out;
  out.reserve(points.size() * kPointColumns);
  for (const auto& p : points) {
    out.insert(out.end(), {p.position.x(), p.position.y(), p.position.z(), p.intensity,
                           static_cast<double>(p.returnNumber), static_cast<double>(p.totalReturns), p.gpsTime,
                           static_cast<double>(p.fullwaveIndex), static_cast<double>(p.partIndex),
                           static_cast<double>(p.classification)});
  }
  return out;
}

std::vector<double> trajectoryToArray(const std::vector<TrajectoryRecord>& records) {
  std::vector<double> out;
  out.reserve(records.size() * kTrajectoryColumns);
  for (const auto& r : records) {
    out.insert(out.end(), {r.time, r.position.x(), r.position.y(), r.position.z(), r.roll, r.pitch, r.yaw});
  }
  return out;
}

std::string asciiPointHeader() {
  return "# x y z intensity returnNumber totalReturns gpsTime fullwaveIndex partIndex classification\n";
}

std::string formatPointRow(const MeasurementRecord& p) {
  return fmt::format("{:.9g} {:.9g} {:.9g} {:.9g} {} {} {:.9g} {} {} {}\n", p.position.x(), p.position.y(),
                     p.position.z(), p.intensity, p.returnNumber, p.totalReturns, p.gpsTime, p.fullwaveIndex,
                     p.partIndex, p.classification);
}

TextSink::TextSink(const std::filesystem::path& path, bool gzip) : path_(path), gzip_(gzip) {
  if (gzip_) {
    gz_ = gzopen(path.string().c_str(), "wb");
    if (gz_ == nullptr) throw IoError("cannot open " + path.string() + " for writing");
  } else {
    file_ = std::fopen(path.string().c_str(), "wb");
    if (file_ == nullptr) throw IoError("cannot open " + path.string() + " for writing");
  }
}

TextSink::~TextSink() {
  try {
    close();
  } catch (...) {
  }
}

void TextSink::write(const std::string& text) {
  if (text.empty()) return;
  if (gz_ != nullptr) {
    if (gzwrite(static_cast<gzFile>(gz_), text.data(), static_cast<unsigned>(text.size())) !=
        static_cast<int>(text.size())) {
      throw IoError("write failed: " + path_.string());
    }
  } else if (file_ != nullptr) {
    if (std::fwrite(text.data(), 1, text.size(), file_) != text.size()) throw IoError("write failed: " + path_.string());
  } else {
    throw IoError("write after close: " + path_.string());
  }
}

void TextSink::close() {
  if (gz_ != nullptr) {
    const int rc = gzclose(static_cast<gzFile>(gz_));
    gz_ = nullptr;
    if (rc != Z_OK) throw IoError("close failed: " + path_.string());
  }
  if (file_ != nullptr) {
    const int rc = std::fclose(file_);
    file_ = nullptr;
    if (rc != 0) throw IoError("close failed: " + path_.string());
  }
}

AsciiPointWriter::AsciiPointWriter(const std::filesystem::path& path, bool gzip) : sink_(path, gzip) {
  sink_.write(asciiPointHeader());
}

void AsciiPointWriter::write(const std::vector<MeasurementRecord>& points) {
  std::string buf;
  buf.reserve(points.size() * 96);
  for (const auto& p : points) buf += formatPointRow(p);
  sink_.write(buf);
}

void writeAscii(const std::vector<MeasurementRecord>& points, const std::filesystem::path& path, bool zip) {
  AsciiPointWriter w(path, zip);
  w.write(points);
  w.close();
}

std::string formatWaveformRow(const WaveformRecord& wf) {
  std::string row = fmt::format("{} {:.9g} {:.9g} {:.9g} {:.9g} {:.9g} {:.9g} {:.9g} {:.9g}", wf.fullwaveIndex,
                                wf.beamOrigin.x(), wf.beamOrigin.y(), wf.beamOrigin.z(), wf.beamDirection.x(),
                                wf.beamDirection.y(), wf.beamDirection.z(), wf.minTimeNs, wf.binWidthNs);
  for (double b : wf.bins) fmt::format_to(std::back_inserter(row), " {:.9g}", b);
  row += '\n';
  return row;
}

void WaveformWriter::write(const std::vector<WaveformRecord>& waveforms) {
  std::string buf;
  for (const auto& wf : waveforms) {
    if (!wf.bins.empty()) buf += formatWaveformRow(wf);
  }
  sink_.write(buf);
}

void writeWaveformAscii(const std::vector<WaveformRecord>& waveforms, const std::filesystem::path& path, bool zip) {
  WaveformWriter w(path, zip);
  w.write(waveforms);
  w.close();
}

void writeTrajectory(const std::vector<TrajectoryRecord>& records, const std::filesystem::path& path, bool zip) {
  TextSink sink(path, zip);
  std::string buf = "# time x y z roll pitch yaw\n";
  for (const auto& r : records) {
    fmt::format_to(std::back_inserter(buf), "{:.9g} {:.9g} {:.9g} {:.9g} {:.9g} {:.9g} {:.9g}\n", r.time,
                   r.position.x(), r.position.y(), r.position.z(), r.roll, r.pitch, r.yaw);
  }
  sink.write(buf);
  sink.close();
}

namespace {

class ByteBuffer {
public:
  template <class T>
  void put(T v) {
    const auto* p = reinterpret_cast<const unsigned char*>(&v);
    bytes_.insert(bytes_.end(), p, p + sizeof(T));
  }
  void putText(const std::string& s, std::size_t width) {
    for (std::size_t i = 0; i < width; ++i) bytes_.push_back(i < s.size() ? static_cast<unsigned char>(s[i]) : 0);
  }
  void putZeros(std::size_t n) { bytes_.insert(bytes_.end(), n, 0); }
  std::size_t size() const { return bytes_.size(); }
  const std::vector<unsigned char>& bytes() const { return bytes_; }

private:
  std::vector<unsigned char> bytes_;
};

constexpr std::uint16_t kLasHeaderSize = 227;
constexpr std::uint16_t kLasRecordLength = 28;

std::int32_t quantize(double v, double offset, const std::filesystem::path& path) {
  const double q = std::round((v - offset) / kLasScale);
  if (q < std::numeric_limits<std::int32_t>::min() || q > std::numeric_limits<std::int32_t>::max()) {
    throw ConfigError(path.string() + ": coordinate " + std::to_string(v) +
                      " does not fit a 32-bit integer at scale 0.0001; use a larger scale");
  }
  return static_cast<std::int32_t>(q);
}

}  // namespace

void writeLAS(const std::vector<MeasurementRecord>& points, const std::filesystem::path& path) {
  Vec3 offset = Vec3::Zero();
  if (!points.empty()) {
    Vec3 lo = points.front().position;
    for (const auto& p : points) lo = lo.cwiseMin(p.position);
    offset = Vec3(std::floor(lo.x()), std::floor(lo.y()), std::floor(lo.z()));
  }
  double maxIntensity = 0.0;
  for (const auto& p : points) maxIntensity = std::max(maxIntensity, p.intensity);

  ByteBuffer records;
  std::array<std::uint32_t, 5> byReturn{};
  Vec3 qmin = Vec3::Constant(std::numeric_limits<double>::infinity());
  Vec3 qmax = -qmin;
  for (const auto& p : points) {
    std::array<std::int32_t, 3> xyz{};
    for (int a = 0; a < 3; ++a) {
      xyz[a] = quantize(p.position[a], offset[a], path);
      const double back = xyz[a] * kLasScale + offset[a];
      qmin[a] = std::min(qmin[a], back);
      qmax[a] = std::max(qmax[a], back);
      records.put(xyz[a]);
    }
    const double scaled = maxIntensity > 0.0 ? p.intensity / maxIntensity * 65535.0 : 0.0;
    records.put(static_cast<std::uint16_t>(std::clamp(std::round(scaled), 0.0, 65535.0)));
    const int ret = std::clamp(p.returnNumber, 1, 7);
    const int total = std::clamp(p.totalReturns, 1, 7);
    records.put(static_cast<std::uint8_t>(ret | (total << 3)));
    records.put(static_cast<std::uint8_t>(std::clamp(p.classification, 0, 31)));
    const double angleDeg = std::round(p.scanAngle * 180.0 / 3.14159265358979323846);
    records.put(static_cast<std::int8_t>(std::clamp(angleDeg, -90.0, 90.0)));
    records.put(static_cast<std::uint8_t>(0));   // file marker
    records.put(static_cast<std::uint16_t>(0));  // user bit field
    records.put(p.gpsTime);
    if (ret <= 5) ++byReturn[ret - 1];
  }
  if (points.empty()) {
    qmin = Vec3::Zero();
    qmax = Vec3::Zero();
  }

  ByteBuffer h;
  h.putText("LASF", 4);
  h.put(std::uint32_t{0});  // reserved
  h.putZeros(16);           // project GUID
  h.put(std::uint8_t{1});
  h.put(std::uint8_t{0});
  h.putText("VLS", 32);
  h.putText("vls", 32);
  h.put(std::uint16_t{0});  // flight day of year
  h.put(std::uint16_t{0});  // year
  h.put(kLasHeaderSize);
  h.put(std::uint32_t{kLasHeaderSize + 2});  // point data follows the 0xCCDD start signature
  h.put(std::uint32_t{0});                   // variable length records
  h.put(std::uint8_t{1});
  h.put(kLasRecordLength);
  h.put(static_cast<std::uint32_t>(points.size()));
  for (auto n : byReturn) h.put(n);
  for (int a = 0; a < 3; ++a) h.put(kLasScale);
  for (int a = 0; a < 3; ++a) h.put(offset[a]);
  for (int a = 0; a < 3; ++a) {
    h.put(qmax[a]);
    h.put(qmin[a]);
  }
  if (h.size() != kLasHeaderSize) throw IoError("internal: LAS header size mismatch");
  h.put(std::uint8_t{0xDD});
  h.put(std::uint8_t{0xCC});

  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  out.write(reinterpret_cast<const char*>(h.bytes().data()), static_cast<std::streamsize>(h.size()));
  out.write(reinterpret_cast<const char*>(records.bytes().data()), static_cast<std::streamsize>(records.size()));
  if (!out) throw IoError("write failed: " + path.string());
}

void LasPointWriter::close() { writeLAS(points_, path_); }

void unzipFile(const std::filesystem::path& in, const std::filesystem::path& out) {
  gzFile gz = gzopen(in.string().c_str(), "rb");
  if (gz == nullptr) throw IoError("cannot open " + in.string());
  std::ofstream dst(out, std::ios::binary);
  if (!dst) {
    gzclose(gz);
    throw IoError("cannot open " + out.string() + " for writing");
  }
  std::array<char, 1 << 16> buf{};
  while (true) {
    const int n = gzread(gz, buf.data(), static_cast<unsigned>(buf.size()));
    if (n < 0) {
      gzclose(gz);
      throw IoError("corrupt gzip stream: " + in.string());
    }
    if (n == 0) break;
    dst.write(buf.data(), n);
  }
  gzclose(gz);
  if (!dst) throw IoError("write failed: " + out.string());
}

}  // namespace vls

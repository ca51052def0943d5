#pragma once

#include "vls/survey/records.hpp"
#include "vls/waveform/waveform.hpp"

#include <cstdio>
#include <filesystem>
#include <memory>
#include <string>
#include <vector>

namespace vls {

/// `# x y z intensity returnNumber totalReturns gpsTime fullwaveIndex partIndex classification`
std::string asciiPointHeader();
/// One space-separated row, numbers with 9 significant digits.
std::string formatPointRow(const MeasurementRecord& p);

/// Streams text to a plain or gzip-compressed file.
class TextSink {
public:
  TextSink(const std::filesystem::path& path, bool gzip);
  ~TextSink();
  TextSink(const TextSink&) = delete;
  TextSink& operator=(const TextSink&) = delete;

  void write(const std::string& text);
  void close();
  const std::filesystem::path& path() const { return path_; }

private:
  std::filesystem::path path_;
  bool gzip_ = false;
  std::FILE* file_ = nullptr;
  void* gz_ = nullptr;
};

class AsciiPointWriter {
public:
  AsciiPointWriter(const std::filesystem::path& path, bool gzip);
  void write(const std::vector<MeasurementRecord>& points);
  void close() { sink_.close(); }

private:
  TextSink sink_;
};

/// Collects points and writes LAS 1.0, point format 1, on close.
class LasPointWriter {
public:
  explicit LasPointWriter(std::filesystem::path path) : path_(std::move(path)) {}
  void write(const std::vector<MeasurementRecord>& points) { points_.insert(points_.end(), points.begin(), points.end()); }
  void close();

private:
  std::filesystem::path path_;
  std::vector<MeasurementRecord> points_;
};

/// fullwaveIndex, origin xyz, direction xyz, minTimeNs, binWidthNs, bins...
std::string formatWaveformRow(const WaveformRecord& wf);

class WaveformWriter {
public:
  WaveformWriter(const std::filesystem::path& path, bool gzip) : sink_(path, gzip) {}
  void write(const std::vector<WaveformRecord>& waveforms);
  void close() { sink_.close(); }

private:
  TextSink sink_;
};

void writeAscii(const std::vector<MeasurementRecord>& points, const std::filesystem::path& path, bool zip);

inline constexpr double kLasScale = 0.0001;

/// LAS 1.0 point format 1: 227-byte header, 28-byte records, scale 0.0001 m, offset floor(min).
/// Intensity is scaled to 0..65535 by the largest intensity. Throws ConfigError when a
/// coordinate does not fit int32 after scaling.
void writeLAS(const std::vector<MeasurementRecord>& points, const std::filesystem::path& path);

/// Only waveforms with bins are written.
void writeWaveformAscii(const std::vector<WaveformRecord>& waveforms, const std::filesystem::path& path, bool zip = false);

/// Rows `time x y z roll pitch yaw`.
void writeTrajectory(const std::vector<TrajectoryRecord>& records, const std::filesystem::path& path, bool zip = false);

/// Decompresses a gzip file.
void unzipFile(const std::filesystem::path& in, const std::filesystem::path& out);

}  // namespace vls

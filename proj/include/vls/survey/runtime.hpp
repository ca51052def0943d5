#pragma once

#include "vls/survey/records.hpp"
#include "vls/survey/survey.hpp"
#include "vls/waveform/waveform.hpp"

#include <cstddef>
#include <filesystem>
#include <functional>
#include <optional>
#include <vector>

namespace vls {

/// Measurements of a run of consecutive pulses handed to a callback. A copy; nothing in
/// it refers to runtime buffers.
struct PulseBatch {
  std::size_t firstPulse = 0;
  std::size_t pulseCount = 0;
  std::vector<MeasurementRecord> points;
};

struct RunCallback {
  std::size_t everyNPulses = 1;
  std::function<void(const PulseBatch&)> onBatch;
};

struct RunOptions {
  /// 0 picks the hardware concurrency.
  unsigned workers = 0;
  /// One worker and pulse-ordered output; forced worker count is reported with a warning.
  bool deterministic = false;
  /// Files are written here when set; the directory is created if needed.
  std::optional<std::filesystem::path> outputDir;
  /// Keep all points in the result (numeric-array access).
  bool collectPoints = false;
  std::optional<RunCallback> callback;
};

struct RunReport {
  std::size_t pulses = 0;
  std::size_t points = 0;
  std::size_t waveforms = 0;  // pulses with at least one subray hit
  double wallSeconds = 0.0;
  unsigned workers = 1;
  std::vector<std::filesystem::path> files;
};

struct RunResult {
  RunReport report;
  std::vector<MeasurementRecord> points;
  std::vector<TrajectoryRecord> trajectory;
};

/// Everything one pulse produced.
struct PulseResult {
  std::vector<MeasurementRecord> points;
  std::optional<WaveformRecord> waveform;
};

/// Pulse schedule and platform motion of a survey, shared read-only by the workers.
class SurveyPlan {
public:
  explicit SurveyPlan(const Survey& survey);

  std::size_t pulseCount() const { return totalPulses_; }
  const std::vector<LegTrajectory>& trajectories() const { return trajectories_; }
  /// Survey time at which each leg starts.
  const std::vector<double>& legStartTimes() const { return legStart_; }
  /// Platform samples every `interval` seconds per leg, endpoints included, times strictly increasing.
  std::vector<TrajectoryRecord> sampleTrajectory(double interval) const;

  /// Simulates pulse `globalIndex` drawing randomness from the stream of (seed, worker, pulse).
  PulseResult simulatePulse(std::size_t globalIndex, std::size_t workerIndex) const;

private:
  struct LegPlan {
    ScannerSpec scanner;
    SubrayPattern pattern;
    std::size_t firstPulse = 0;
    std::size_t pulses = 0;
  };

  const Survey& survey_;
  std::uint64_t masterSeed_ = 0;
  std::vector<LegTrajectory> trajectories_;
  std::vector<double> legStart_;
  std::vector<LegPlan> legs_;
  std::size_t totalPulses_ = 0;
};

/// Runs every leg. Points are emitted in pulse order. The callback, when given, sees each
/// block of everyNPulses pulses (and the final partial block) in order; an exception thrown
/// by it aborts the run and propagates.
RunResult runSurvey(const Survey& survey, const RunOptions& options = {});

/// Traces one subray through the scene. Transmissive voxels are crossed until a
/// stochastic return or an opaque surface stops the subray.
std::optional<SubrayEcho> traceSubray(const Scene& scene, const Ray& ray, const ScannerSpec& scanner,
                                      const Subray& subray, RandomStream& rng);

}  // namespace vls

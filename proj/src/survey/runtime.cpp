#include "vls/survey/runtime.hpp"

#include "vls/beam/pulse.hpp"
#include "vls/common/error.hpp"
#include "vls/survey/output.hpp"
#include "vls/waveform/lad_lut.hpp"

#include <spdlog/spdlog.h>
#include <tbb/blocked_range.h>
#include <tbb/global_control.h>
#include <tbb/parallel_for.h>
#include <tbb/task_arena.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <thread>

namespace vls {

namespace {
constexpr int kMaxVoxelCrossings = 100000;
}

std::optional<SubrayEcho> traceSubray(const Scene& scene, const Ray& ray, const ScannerSpec& scanner,
                                      const Subray& subray, RandomStream& rng) {
  IntensityModelParams params;
  params.lambdaFactor = scanner.atmosphericEfficiency;
  params.receiverDiameterSq = scanner.receiverDiameter * scanner.receiverDiameter;
  params.beamDivergenceSq = scanner.beamDivergence * scanner.beamDivergence;

  Ray current = ray;
  double travelled = 0.0;
  for (int crossing = 0; crossing < kMaxVoxelCrossings; ++crossing) {
    const auto hit = scene.nearestHit(current);
    if (!hit) return std::nullopt;
    const Primitive& prim = *hit->primitive;
    double range = 0.0;
    double intensity = 0.0;
    if (const auto* dv = std::get_if<DetailedVoxel>(&prim.shape)) {
      const double sigma = extinctionCoefficient(dv->pad, scene.luts()[dv->lutIndex], current.direction);
      const double tExit = hit->tExit.value_or(hit->tEnter);
      const auto s = sampleTransmissiveReturn(sigma, tExit - hit->tEnter, rng);
      if (!s) {
        travelled += tExit + 1e-5;
        current = continueRay(current, tExit);
        continue;
      }
      range = travelled + hit->tEnter + *s;
      if (!(range > 0.0)) return std::nullopt;
      intensity = receivedIntensityVegetation(scanner.peakPower, range, sigma, params);
    } else {
      range = travelled + hit->tEnter;
      if (!(range > 0.0)) return std::nullopt;
      const double reflectance = prim.material ? prim.material->reflectance : 0.5;
      intensity = receivedIntensityOpaque(scanner.peakPower, range, reflectance, hit->incidenceAngle, params);
    }
    SubrayEcho echo;
    echo.range = range;
    echo.intensity = intensity;
    echo.primitiveId = prim.id;
    // Gaussian beam profile at the hit range.
    const double w = beamWidthAtRange(scanner.waistRadius(), scanner.wavelengthM(), range, scanner.focusingRange);
    const double r = range * std::tan(subray.offsetAngle);
    echo.weight = w > 0.0 ? std::exp(-2.0 * r * r / (w * w)) : (subray.ring == 0 ? 1.0 : 0.0);
    return echo;
  }
  spdlog::warn("subray crossed more than {} voxels, dropped", kMaxVoxelCrossings);
  return std::nullopt;
}

SurveyPlan::SurveyPlan(const Survey& survey) : survey_(survey), masterSeed_(hashSeedText(survey.seedText)) {
  if (!survey.scene) throw ConfigError("survey '" + survey.name + "' has no scene loaded");
  trajectories_ = simulateLegs(survey.platform, survey.legs, survey.scene.get());
  double t = 0.0;
  for (std::size_t i = 0; i < survey.legs.size(); ++i) {
    legStart_.push_back(t);
    LegPlan lp;
    lp.scanner = survey.scannerForLeg(i);
    lp.pattern = generateSubrays(lp.scanner.beamSampleQuality, lp.scanner.beamDivergence);
    lp.firstPulse = totalPulses_;
    const double duration = trajectories_[i].duration();
    lp.pulses = survey.legs[i].scanner.active ? vls::pulseCount(lp.scanner.pulseFreqHz, duration) : 0;
    totalPulses_ += lp.pulses;
    legs_.push_back(std::move(lp));
    t += duration;
  }
}

std::vector<TrajectoryRecord> SurveyPlan::sampleTrajectory(double interval) const {
  std::vector<TrajectoryRecord> out;
  if (!(interval > 0.0)) return out;
  for (std::size_t i = 0; i < trajectories_.size(); ++i) {
    const auto& traj = trajectories_[i];
    const double duration = traj.duration();
    const auto n = static_cast<std::size_t>(std::floor(duration / interval * (1.0 + 1e-12)));
    for (std::size_t k = 0; k <= n; ++k) {
      const double lt = std::min(duration, static_cast<double>(k) * interval);
      const double time = legStart_[i] + lt;
      if (!out.empty() && time <= out.back().time + 1e-12) continue;
      const PlatformState s = traj.at(lt);
      out.push_back({time, s.position, s.roll, s.pitch, s.yaw});
    }
  }
  return out;
}

PulseResult SurveyPlan::simulatePulse(std::size_t globalIndex, std::size_t workerIndex) const {
  PulseResult result;
  const auto it = std::upper_bound(legs_.begin(), legs_.end(), globalIndex,
                                   [](std::size_t g, const LegPlan& lp) { return g < lp.firstPulse; });
  const std::size_t legIndex = static_cast<std::size_t>(it - legs_.begin()) - 1;
  const LegPlan& leg = legs_[legIndex];
  const ScannerSpec& scanner = leg.scanner;
  const double t = pulseTime(globalIndex - leg.firstPulse, scanner.pulseFreqHz);

  RandomStream rng(deriveSeed(masterSeed_, workerIndex, globalIndex));
  PlatformState state = trajectories_[legIndex].at(t);
  state = applyPositionNoise(state, rng, survey_.platform.positionNoiseStd);
  const double head = scanner.headRotateStart + scanner.headRotatePerSec * t;
  const BeamPose pose =
      composeBeam(state.position, attitudeMatrix(state.roll, state.pitch, state.yaw), head, scanner, t);
  const Vec3 central = pose.centralDirection();

  std::vector<SubrayEcho> echoes;
  for (const Subray& sr : leg.pattern.subrays) {
    const Ray ray(pose.origin, pose.subrayDirection(sr));
    if (auto echo = traceSubray(*survey_.scene, ray, scanner, sr, rng)) echoes.push_back(*echo);
  }
  if (echoes.empty()) return result;

  WaveformSettings ws;
  ws.tauNs = scanner.tauNs();
  ws.binWidthNs = survey_.binWidthNs;
  ws.maxFullwaveRangeNs = survey_.maxFullwaveRangeNs;
  WaveformRecord wf = accumulateWaveform(echoes, ws);
  wf.fullwaveIndex = static_cast<std::int64_t>(globalIndex);
  wf.beamOrigin = pose.origin;
  wf.beamDirection = central;

  const auto peaks = detectPeaks(wf, 0.01, scanner.maxReturns);
  const auto& primitives = survey_.scene->tree().primitives();
  const double scanAngle = deflectorAngle(scanner.deflector, t).acrossTrack;
  for (const auto& peak : peaks) {
    MeasurementRecord m;
    m.range = applyRangeError(peak.range, rng, scanner.rangeErrorStd);
    m.position = pose.origin + m.range * central;
    m.intensity = peak.power;
    m.returnNumber = peak.returnNumber;
    m.totalReturns = peak.totalReturns;
    m.gpsTime = legStart_[legIndex] + t;
    m.fullwaveIndex = wf.fullwaveIndex;
    m.scanAngle = scanAngle;
    const std::uint32_t source = attributePeak(echoes, peak, wf.pulsePeakDelayNs);
    if (source != kNoPrimitive) {
      const Primitive& prim = primitives[source];
      m.partIndex = prim.partIndex;
      m.classification = prim.material ? prim.material->classification : 0;
    }
    if (survey_.outputs.calcEchowidth) {
      if (const auto fit = fitEchoWidth(wf, peak, 3.0 * scanner.pulseLengthNs)) m.echoWidthNs = fit->sigmaNs;
    }
    result.points.push_back(m);
  }
  result.waveform = std::move(wf);
  return result;
}

namespace {

struct OutputFiles {
  std::unique_ptr<AsciiPointWriter> ascii;
  std::unique_ptr<LasPointWriter> las;
  std::unique_ptr<WaveformWriter> waveform;
  std::filesystem::path trajectoryPath;
};

std::string suffix(bool zip) { return zip ? ".gz" : ""; }

}  // namespace

RunResult runSurvey(const Survey& survey, const RunOptions& options) {
  const auto started = std::chrono::steady_clock::now();
  RunResult result;

  unsigned workers = options.workers != 0 ? options.workers : std::max(1u, std::thread::hardware_concurrency());
  if (options.deterministic && workers != 1) {
    spdlog::warn("deterministic mode: using 1 worker instead of {}", workers);
    workers = 1;
  }
  result.report.workers = workers;

  const SurveyPlan plan(survey);
  result.trajectory = plan.sampleTrajectory(survey.trajectoryIntervalS);

  OutputFiles files;
  if (options.outputDir) {
    std::filesystem::create_directories(*options.outputDir);
    const auto& dir = *options.outputDir;
    const bool zip = survey.outputs.zipOutput;
    if (survey.outputs.lasOutput) {
      files.las = std::make_unique<LasPointWriter>(dir / "points.las");
      result.report.files.push_back(dir / "points.las");
    } else {
      files.ascii = std::make_unique<AsciiPointWriter>(dir / ("points.xyz" + suffix(zip)), zip);
      result.report.files.push_back(dir / ("points.xyz" + suffix(zip)));
    }
    if (survey.outputs.writeWaveform) {
      files.waveform = std::make_unique<WaveformWriter>(dir / ("fullwave.txt" + suffix(zip)), zip);
      result.report.files.push_back(dir / ("fullwave.txt" + suffix(zip)));
    }
    if (survey.trajectoryIntervalS > 0.0) {
      files.trajectoryPath = dir / ("trajectory.txt" + suffix(zip));
      writeTrajectory(result.trajectory, files.trajectoryPath, zip);
      result.report.files.push_back(files.trajectoryPath);
    }
  }

  const std::size_t total = plan.pulseCount();
  const std::size_t every = options.callback ? std::max<std::size_t>(1, options.callback->everyNPulses) : 0;
  const std::size_t chunk = every > 0 ? every : 4096;
  std::optional<tbb::global_control> parallelism;
  std::optional<tbb::task_arena> arena;
  if (workers > 1) {
    // TBB otherwise caps its thread pool at the core count and ignores the requested workers.
    parallelism.emplace(tbb::global_control::max_allowed_parallelism, workers);
    arena.emplace(static_cast<int>(workers));
  }

  std::vector<PulseResult> slots;
  for (std::size_t begin = 0; begin < total; begin += chunk) {
    const std::size_t end = std::min(total, begin + chunk);
    slots.assign(end - begin, PulseResult{});
    try {
      if (arena) {
        arena->execute([&] {
          tbb::parallel_for(tbb::blocked_range<std::size_t>(begin, end), [&](const tbb::blocked_range<std::size_t>& r) {
            const int worker = tbb::this_task_arena::current_thread_index();
            for (std::size_t g = r.begin(); g != r.end(); ++g) {
              slots[g - begin] = plan.simulatePulse(g, static_cast<std::size_t>(std::max(0, worker)));
            }
          });
        });
      } else {
        for (std::size_t g = begin; g < end; ++g) slots[g - begin] = plan.simulatePulse(g, 0);
      }
    } catch (const SimulationError&) {
      throw;
    } catch (const std::exception& e) {
      throw SimulationError("survey '" + survey.name + "' aborted near pulse " + std::to_string(begin) + ": " + e.what());
    }

    PulseBatch batch;
    batch.firstPulse = begin;
    batch.pulseCount = end - begin;
    std::vector<WaveformRecord> waveforms;
    for (auto& s : slots) {
      batch.points.insert(batch.points.end(), s.points.begin(), s.points.end());
      if (s.waveform) {
        ++result.report.waveforms;
        if (files.waveform) waveforms.push_back(std::move(*s.waveform));
      }
    }
    result.report.pulses += batch.pulseCount;
    result.report.points += batch.points.size();
    if (files.ascii) files.ascii->write(batch.points);
    if (files.las) files.las->write(batch.points);
    if (files.waveform) files.waveform->write(waveforms);
    if (options.collectPoints) result.points.insert(result.points.end(), batch.points.begin(), batch.points.end());
    if (options.callback && options.callback->onBatch) options.callback->onBatch(batch);
  }

  if (files.ascii) files.ascii->close();
  if (files.las) files.las->close();
  if (files.waveform) files.waveform->close();
  result.report.wallSeconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
  return result;
}

}  // namespace vls

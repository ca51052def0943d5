#pragma once

#include "vls/common/random.hpp"
#include "vls/raycast/geometry.hpp"

#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <vector>

namespace vls {

/// Parameters of the received-power model shared by vegetation and opaque targets.
struct IntensityModelParams {
  double lambdaFactor = 0.9;          // atmospheric factor times scanner efficiency
  double receiverDiameterSq = 0.0225; // m^2
  double beamDivergenceSq = 9e-8;     // rad^2
};

/// I = lambda * sigma * P * alpha^2 / (4 pi d^4 beta^2). Throws DomainError when d <= 0.
double receivedIntensityVegetation(double power, double distance, double sigma, const IntensityModelParams& params);

/// Lambertian opaque target: sigma replaced by reflectance * cos(incidence).
double receivedIntensityOpaque(double power, double distance, double reflectance, double incidenceAngle,
                               const IntensityModelParams& params);

/// Stochastic return inside a transmissive voxel. Draws R in [0,1), s = -ln(R) / sigma.
/// Returns the distance past the voxel entry, or nullopt when the subray passes through
/// (sigma == 0 or s > pathLength).
std::optional<double> sampleTransmissiveReturn(double sigma, double pathLength, RandomStream& rng);

/// range + N(0, sigma).
double applyRangeError(double range, RandomStream& rng, double sigma);

inline constexpr std::uint32_t kNoPrimitive = std::numeric_limits<std::uint32_t>::max();

/// One subray's contribution: its target range, received intensity and beam-profile weight.
struct SubrayEcho {
  double range = 0.0;
  double intensity = 0.0;
  double weight = 1.0;
  std::uint32_t primitiveId = kNoPrimitive;
};

struct WaveformSettings {
  double tauNs = 4.0 / 1.75;
  double binWidthNs = 1.0;
  double maxFullwaveRangeNs = 200.0;
};

/// Time-binned received power of one pulse. Bin k spans
/// [minTimeNs + k * binWidthNs, minTimeNs + (k+1) * binWidthNs) after emission.
struct WaveformRecord {
  std::int64_t fullwaveIndex = -1;
  Vec3 beamOrigin = Vec3::Zero();
  Vec3 beamDirection = -Vec3::UnitZ();
  double binWidthNs = 1.0;
  double minTimeNs = 0.0;
  double pulsePeakDelayNs = 0.0;  // time from echo onset to the pulse maximum (2 tau)
  std::vector<double> bins;

  double binCentreNs(std::size_t k) const { return minTimeNs + (static_cast<double>(k) + 0.5) * binWidthNs; }
  bool empty() const { return bins.empty(); }
};

/// Pulse samples older than this many tau after onset are dropped (below 2e-6 of the peak).
inline constexpr double kPulseSupportTau = 20.0;

/// Sums the temporal pulse of every echo, shifted by its two-way travel time 2R/c and
/// scaled by weight * intensity, sampled at bin centres. The window starts at the first
/// echo's bin and holds at most floor(maxFullwaveRangeNs / binWidthNs) bins; later
/// contributions are discarded and trailing zero bins are dropped. Throws ConfigError when
/// binWidthNs <= 0.
WaveformRecord accumulateWaveform(std::span<const SubrayEcho> echoes, const WaveformSettings& settings);

/// Two-way travel time in ns for a target range in metres.
double rangeToTimeNs(double range);

struct EchoCandidate {
  std::size_t bin = 0;
  double timeNs = 0.0;  // bin centre of the local maximum
  double range = 0.0;   // c/2 * (timeNs - pulse peak delay)
  double power = 0.0;
  std::optional<double> echoWidthNs;
  int returnNumber = 1;
  int totalReturns = 1;
  std::uint32_t sourcePrimitive = kNoPrimitive;
};

/// Strict local maxima at or above minPowerFraction * max bin, in time order. When
/// maxReturns > 0 only the first maxReturns peaks are kept.
std::vector<EchoCandidate> detectPeaks(const WaveformRecord& wf, double minPowerFraction = 0.01,
                                       int maxReturns = 0);

/// Picks the echo whose pulse maximum falls closest to the peak; ties go to the stronger
/// contribution.
std::uint32_t attributePeak(std::span<const SubrayEcho> echoes, const EchoCandidate& peak, double pulsePeakDelayNs);

struct EchoWidthFit {
  double sigmaNs = 0.0;
  double amplitude = 0.0;
  double centreNs = 0.0;
  bool degenerate = false;
  int iterations = 0;
};

/// Least-squares fit of A exp(-(t-mu)^2 / 2 s^2) to the bins within +-windowHalfNs of the
/// peak (Eigen's Levenberg-Marquardt). A single-bin spike yields a degenerate fit with
/// s = binWidth / 2. Returns nullopt when the fit does not converge within maxIterations
/// residual evaluations.
std::optional<EchoWidthFit> fitEchoWidth(const WaveformRecord& wf, const EchoCandidate& peak, double windowHalfNs,
                                         int maxIterations = 100);

}  // namespace vls

#include "vls/waveform/waveform.hpp"

#include "vls/beam/pulse.hpp"
#include "vls/common/error.hpp"

#include <Eigen/Dense>
#include <unsupported/Eigen/LevenbergMarquardt>

#include <algorithm>
#include <cmath>
#include <numbers>

namespace vls {

double receivedIntensityVegetation(double power, double distance, double sigma, const IntensityModelParams& p) {
  if (!(distance > 0.0)) throw DomainError("received intensity needs a target distance > 0");
  const double d2 = distance * distance;
  return p.lambdaFactor * sigma * power * p.receiverDiameterSq /
         (4.0 * std::numbers::pi * d2 * d2 * p.beamDivergenceSq);
}

double receivedIntensityOpaque(double power, double distance, double reflectance, double incidenceAngle,
                               const IntensityModelParams& p) {
  const double c = incidenceAngle >= 0.5 * std::numbers::pi ? 0.0 : std::max(0.0, std::cos(incidenceAngle));
  return receivedIntensityVegetation(power, distance, reflectance * c, p);
}

std::optional<double> sampleTransmissiveReturn(double sigma, double pathLength, RandomStream& rng) {
  const double r = rng.uniform01();
  if (sigma <= 0.0) return std::nullopt;
  if (r <= 0.0) return std::nullopt;  // -ln(0) is an infinite free path
  const double s = -std::log(r) / sigma;
  if (s > pathLength) return std::nullopt;
  return s;
}

double applyRangeError(double range, RandomStream& rng, double sigma) {
  if (sigma <= 0.0) return range;
  return range + rng.normal(0.0, sigma);
}

double rangeToTimeNs(double range) { return 2.0 * range / kSpeedOfLightMPerNs; }

WaveformRecord accumulateWaveform(std::span<const SubrayEcho> echoes, const WaveformSettings& s) {
  if (!(s.binWidthNs > 0.0)) throw ConfigError("waveform bin width must be > 0");
  if (!(s.tauNs > 0.0)) throw ConfigError("pulse tau must be > 0");

  WaveformRecord wf;
  wf.binWidthNs = s.binWidthNs;
  wf.pulsePeakDelayNs = 2.0 * s.tauNs;
  if (echoes.empty()) return wf;

  double firstShift = std::numeric_limits<double>::infinity();
  for (const auto& e : echoes) firstShift = std::min(firstShift, rangeToTimeNs(e.range));
  wf.minTimeNs = std::floor(firstShift / s.binWidthNs) * s.binWidthNs;
  const auto nBins = static_cast<std::size_t>(std::max(1.0, std::floor(s.maxFullwaveRangeNs / s.binWidthNs)));
  wf.bins.assign(nBins, 0.0);

  const double decay = std::exp(-s.binWidthNs / s.tauNs);
  for (const auto& e : echoes) {
    const double scale = e.weight * e.intensity;
    if (scale == 0.0) continue;
    const double shift = rangeToTimeNs(e.range);
    // First bin whose centre is at or after the onset.
    const double kStart = std::ceil((shift - wf.minTimeNs) / s.binWidthNs - 0.5);
    if (kStart >= static_cast<double>(nBins)) continue;
    auto k = static_cast<std::size_t>(std::max(0.0, kStart));
    double x = (wf.binCentreNs(k) - shift) / s.tauNs;
    if (x < 0.0) {
      ++k;
      x += s.binWidthNs / s.tauNs;
    }
    double ex = std::exp(-x);
    const double dx = s.binWidthNs / s.tauNs;
    for (; k < nBins && x <= kPulseSupportTau; ++k) {
      wf.bins[k] += scale * x * x * ex;
      x += dx;
      ex *= decay;
    }
  }
  while (wf.bins.size() > 1 && wf.bins.back() == 0.0) wf.bins.pop_back();
  return wf;
}

std::vector<EchoCandidate> detectPeaks(const WaveformRecord& wf, double minPowerFraction, int maxReturns) {
  std::vector<EchoCandidate> peaks;
  if (wf.bins.empty()) return peaks;
  const double maxPower = *std::max_element(wf.bins.begin(), wf.bins.end());
  if (!(maxPower > 0.0)) return peaks;
  const double threshold = minPowerFraction * maxPower;

  const std::size_t n = wf.bins.size();
  for (std::size_t k = 0; k < n; ++k) {
    const double v = wf.bins[k];
    const double left = k > 0 ? wf.bins[k - 1] : 0.0;
    const double right = k + 1 < n ? wf.bins[k + 1] : 0.0;
    if (!(v > left && v > right) || v < threshold) continue;
    EchoCandidate c;
    c.bin = k;
    c.timeNs = wf.binCentreNs(k);
    c.range = 0.5 * kSpeedOfLightMPerNs * (c.timeNs - wf.pulsePeakDelayNs);
    c.power = v;
    peaks.push_back(c);
    if (maxReturns > 0 && static_cast<int>(peaks.size()) == maxReturns) break;
  }
  const int total = static_cast<int>(peaks.size());
  for (int i = 0; i < total; ++i) {
    peaks[i].returnNumber = i + 1;
    peaks[i].totalReturns = total;
  }
  return peaks;
}

std::uint32_t attributePeak(std::span<const SubrayEcho> echoes, const EchoCandidate& peak, double pulsePeakDelayNs) {
  std::uint32_t best = kNoPrimitive;
  double bestDt = std::numeric_limits<double>::infinity();
  double bestStrength = -1.0;
  for (const auto& e : echoes) {
    const double dt = std::abs(rangeToTimeNs(e.range) + pulsePeakDelayNs - peak.timeNs);
    const double strength = e.weight * e.intensity;
    if (dt < bestDt - 1e-9 || (std::abs(dt - bestDt) <= 1e-9 && strength > bestStrength)) {
      best = e.primitiveId;
      bestDt = dt;
      bestStrength = strength;
    }
  }
  return best;
}

namespace {

/// Residuals A exp(-(t-mu)^2 / 2 s^2) - y over the fit window, parameters (A, mu, s).
struct GaussianResidual : Eigen::DenseFunctor<double> {
  GaussianResidual(const std::vector<double>& t, const std::vector<double>& y)
      : Eigen::DenseFunctor<double>(3, static_cast<int>(t.size())), t_(t), y_(y) {}

  int operator()(const InputType& p, ValueType& r) const {
    for (std::size_t i = 0; i < t_.size(); ++i) {
      const double d = t_[i] - p[1];
      r[static_cast<Eigen::Index>(i)] = p[0] * std::exp(-d * d / (2.0 * p[2] * p[2])) - y_[i];
    }
    return 0;
  }

  int df(const InputType& p, JacobianType& j) const {
    const double s2 = p[2] * p[2];
    for (std::size_t i = 0; i < t_.size(); ++i) {
      const auto row = static_cast<Eigen::Index>(i);
      const double d = t_[i] - p[1];
      const double e = std::exp(-d * d / (2.0 * s2));
      j(row, 0) = e;
      j(row, 1) = p[0] * e * d / s2;
      j(row, 2) = p[0] * e * d * d / (s2 * p[2]);
    }
    return 0;
  }

  const std::vector<double>& t_;
  const std::vector<double>& y_;
};

}  // namespace

std::optional<EchoWidthFit> fitEchoWidth(const WaveformRecord& wf, const EchoCandidate& peak, double windowHalfNs,
                                         int maxIterations) {
  std::vector<double> ts;
  std::vector<double> ys;
  for (std::size_t k = 0; k < wf.bins.size(); ++k) {
    const double t = wf.binCentreNs(k);
    if (std::abs(t - peak.timeNs) <= windowHalfNs) {
      ts.push_back(t);
      ys.push_back(wf.bins[k]);
    }
  }
  const auto nonZero = std::count_if(ys.begin(), ys.end(), [](double y) { return y > 0.0; });
  if (nonZero <= 1) {
    EchoWidthFit fit;
    fit.sigmaNs = 0.5 * wf.binWidthNs;
    fit.amplitude = peak.power;
    fit.centreNs = peak.timeNs;
    fit.degenerate = true;
    return fit;
  }

  // Initial width from the second moment around the peak.
  double m0 = 0.0;
  double m2 = 0.0;
  for (std::size_t i = 0; i < ts.size(); ++i) {
    m0 += ys[i];
    m2 += ys[i] * (ts[i] - peak.timeNs) * (ts[i] - peak.timeNs);
  }
  GaussianResidual f(ts, ys);
  Eigen::VectorXd p(3);
  p << peak.power, peak.timeNs, std::max(0.5 * wf.binWidthNs, std::sqrt(m2 / m0));
  Eigen::LevenbergMarquardt<GaussianResidual> lm(f);
  lm.setMaxfev(maxIterations);
  lm.setXtol(1e-12);
  lm.setFtol(1e-14);
  const auto status = lm.minimize(p);
  using Eigen::LevenbergMarquardtSpace::Status;
  if (status == Status::ImproperInputParameters || status == Status::TooManyFunctionEvaluation ||
      !std::isfinite(p.sum()) || p[2] == 0.0) {
    return std::nullopt;
  }
  return EchoWidthFit{std::abs(p[2]), p[0], p[1], false, static_cast<int>(lm.iterations())};
}

}  // namespace vls

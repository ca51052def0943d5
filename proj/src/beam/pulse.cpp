#include "vls/beam/pulse.hpp"

#include "vls/common/error.hpp"

#include <cmath>
#include <numbers>

namespace vls {

double radialIntensity(double i0, double r, double w) {
  if (!(w > 0.0)) throw DomainError("beam width must be > 0");
  return i0 * std::exp(-2.0 * r * r / (w * w));
}

double beamWidthAtRange(double w0, double lambda, double range, double focusRange) {
  if (!(w0 > 0.0) || !(lambda > 0.0)) throw DomainError("beam waist and wavelength must be > 0");
  const double denom = std::numbers::pi * w0 * w0;
  const double omega = lambda * range / denom;
  const double omega0 = lambda * focusRange / denom;
  return w0 * std::sqrt(omega0 * omega0 + omega * omega);
}

double pulsePower(double intensity, double tNs, double tauNs) {
  if (!(tauNs > 0.0)) throw DomainError("pulse tau must be > 0");
  if (tNs < 0.0) return 0.0;
  const double x = tNs / tauNs;
  return intensity * x * x * std::exp(-x);
}

std::size_t pulseCount(double pulseFreqHz, double legDurationS) {
  if (!(pulseFreqHz > 0.0)) throw ConfigError("pulse frequency must be > 0");
  if (!(legDurationS > 0.0)) return 0;
  // Products such as 0.1 * 30 land just under an integer.
  const double n = legDurationS * pulseFreqHz;
  return static_cast<std::size_t>(std::floor(n * (1.0 + 1e-12)));
}

std::vector<double> schedulePulses(double pulseFreqHz, double legDurationS) {
  const std::size_t n = pulseCount(pulseFreqHz, legDurationS);
  std::vector<double> times(n);
  for (std::size_t k = 0; k < n; ++k) times[k] = pulseTime(k, pulseFreqHz);
  return times;
}

}  // namespace vls

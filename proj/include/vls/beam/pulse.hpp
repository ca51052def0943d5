#pragma once

#include <cstddef>
#include <vector>

namespace vls {

inline constexpr double kSpeedOfLight = 299792458.0;        // m/s
inline constexpr double kSpeedOfLightMPerNs = 0.299792458;  // m/ns
inline constexpr double kPulseLengthToTau = 1.75;

/// Gaussian radial power profile: I0 * exp(-2 r^2 / w^2).
double radialIntensity(double i0, double r, double w);

/// Local beam radius at range R from the waist radius w0, wavelength and focusing range
/// (all in metres): w0 * sqrt(omega0^2 + omega^2), omega = lambda R / (pi w0^2).
double beamWidthAtRange(double w0, double lambda, double range, double focusRange);

/// Temporal pulse shape P(t) = I (t/tau)^2 exp(-t/tau); zero for t < 0.
double pulsePower(double intensity, double tNs, double tauNs);

/// tau = pulse length / 1.75.
constexpr double tauFromPulseLength(double pulseLengthNs) { return pulseLengthNs / kPulseLengthToTau; }

/// Emission times k / pulseFreq for k in [0, floor(legDuration * pulseFreq)).
std::vector<double> schedulePulses(double pulseFreqHz, double legDurationS);
std::size_t pulseCount(double pulseFreqHz, double legDurationS);
inline double pulseTime(std::size_t k, double pulseFreqHz) { return static_cast<double>(k) / pulseFreqHz; }

}  // namespace vls

#include "vls/beam/scanner.hpp"

#include "vls/beam/pulse.hpp"
#include "vls/common/error.hpp"

#include <Eigen/Geometry>

#include <cmath>
#include <numbers>

namespace vls {

namespace {
double frac(double x) { return x - std::floor(x); }
}  // namespace

void DeflectorSpec::validate() const {
  if (!(scanFreqHz > 0.0)) throw ConfigError("deflector scan frequency must be > 0");
  if (kind == DeflectorKind::Palmer) {
    if (!(palmerOffNadir > 0.0 && palmerOffNadir < std::numbers::pi / 2)) {
      throw ConfigError("Palmer off-nadir angle must lie in (0, 90) degrees");
    }
  } else if (!(scanAngleMax > 0.0 && scanAngleMax < std::numbers::pi / 2)) {
    throw ConfigError("deflector scan angle must lie in (0, 90) degrees");
  }
}

DeflectorAngles deflectorAngle(const DeflectorSpec& spec, double t) {
  const double phase = frac(t * spec.scanFreqHz);
  switch (spec.kind) {
    case DeflectorKind::RotatingPolygon:
    case DeflectorKind::FibreOptic:
      return {-spec.scanAngleMax + 2.0 * spec.scanAngleMax * phase, 0.0};
    case DeflectorKind::Oscillating:
      return {spec.scanAngleMax * std::sin(2.0 * std::numbers::pi * spec.scanFreqHz * t), 0.0};
    case DeflectorKind::Palmer:
      return {spec.palmerOffNadir, 2.0 * std::numbers::pi * phase};
  }
  return {};
}

Eigen::Matrix3d deflectorRotation(const DeflectorSpec& spec, double t) {
  const auto a = deflectorAngle(spec, t);
  const Eigen::Matrix3d across = Eigen::AngleAxisd(a.acrossTrack, Vec3::UnitX()).toRotationMatrix();
  if (spec.kind != DeflectorKind::Palmer) return across;
  return Eigen::AngleAxisd(a.azimuth, Vec3::UnitZ()).toRotationMatrix() * across;
}

double ScannerSpec::tauNs() const { return tauFromPulseLength(pulseLengthNs); }

double ScannerSpec::waistRadius() const {
  if (beamWaistRadius) return *beamWaistRadius;
  return wavelengthM() / (std::numbers::pi * beamDivergence);
}

void ScannerSpec::validate() const {
  auto positive = [&](double v, const char* what) {
    if (!(v > 0.0)) throw ConfigError(std::string("scanner '") + id + "': " + what + " must be > 0");
  };
  positive(pulseFreqHz, "pulse frequency");
  positive(beamDivergence, "beam divergence");
  positive(wavelengthNm, "wavelength");
  positive(pulseLengthNs, "pulse length");
  positive(peakPower, "peak power");
  positive(receiverDiameter, "receiver diameter");
  positive(atmosphericEfficiency, "atmospheric efficiency");
  if (beamWaistRadius) positive(*beamWaistRadius, "beam waist radius");
  if (focusingRange < 0.0) throw ConfigError("scanner '" + id + "': focusing range must be >= 0");
  if (rangeErrorStd < 0.0) throw ConfigError("scanner '" + id + "': range error must be >= 0");
  if (maxReturns < 1) throw ConfigError("scanner '" + id + "': maxReturns must be >= 1");
  if (beamSampleQuality < 1) throw ConfigError("scanner '" + id + "': beamSampleQuality must be >= 1");
  deflector.validate();
}

Eigen::Matrix3d attitudeMatrix(double roll, double pitch, double yaw) {
  return (Eigen::AngleAxisd(yaw, Vec3::UnitZ()) * Eigen::AngleAxisd(pitch, Vec3::UnitY()) *
          Eigen::AngleAxisd(roll, Vec3::UnitX()))
      .toRotationMatrix();
}

BeamPose composeBeam(const Vec3& platformPosition, const Eigen::Matrix3d& platformAttitude, double headAngle,
                     const ScannerSpec& scanner, double legTime) {
  BeamPose pose;
  const Eigen::Matrix3d head = Eigen::AngleAxisd(headAngle, Vec3::UnitZ()).toRotationMatrix();
  pose.frame = platformAttitude * head * scanner.mountRotation * deflectorRotation(scanner.deflector, legTime);
  pose.origin = platformPosition + platformAttitude * scanner.mountOffset;
  return pose;
}

}  // namespace vls

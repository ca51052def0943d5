#pragma once

#include "vls/beam/subrays.hpp"
#include "vls/raycast/geometry.hpp"

#include <Eigen/Core>

#include <optional>
#include <string>

namespace vls {

enum class DeflectorKind { RotatingPolygon, FibreOptic, Oscillating, Palmer };

struct DeflectorSpec {
  DeflectorKind kind = DeflectorKind::RotatingPolygon;
  double scanFreqHz = 100.0;
  double scanAngleMax = 0.3;     // rad, half of the swath
  double palmerOffNadir = 0.26;  // rad, cone half-angle of a Palmer scanner

  void validate() const;
};

struct DeflectorAngles {
  double acrossTrack = 0.0;  // rad off nadir about the scanner X axis (Palmer: the cone angle)
  double azimuth = 0.0;      // rad around nadir; only non-zero for Palmer
};

/// Rotating polygon and fibre optic: sawtooth -A + 2A frac(f t).
/// Oscillating: A sin(2 pi f t). Palmer: constant off-nadir angle, azimuth 2 pi frac(f t).
DeflectorAngles deflectorAngle(const DeflectorSpec& spec, double t);

/// Rotation taking the scanner-frame nadir (-Z) to the deflected beam direction.
Eigen::Matrix3d deflectorRotation(const DeflectorSpec& spec, double t);

struct ScannerSpec {
  std::string id = "scanner";
  std::string name;
  double pulseFreqHz = 100000.0;
  double beamDivergence = 3e-4;  // rad, half-angle at 1/e^2
  double wavelengthNm = 1064.0;
  std::optional<double> beamWaistRadius;  // m; derived from divergence when absent
  double focusingRange = 0.0;            // m
  double pulseLengthNs = 4.0;
  double peakPower = 1.0;                // I0, relative
  double rangeErrorStd = 0.0;            // m
  double receiverDiameter = 0.15;        // m
  double atmosphericEfficiency = 0.9;    // product of atmospheric factor and efficiency
  int maxReturns = 4;
  int beamSampleQuality = 3;
  DeflectorSpec deflector;

  Eigen::Matrix3d mountRotation = Eigen::Matrix3d::Identity();
  Vec3 mountOffset = Vec3::Zero();
  double headRotatePerSec = 0.0;  // rad/s about the platform up axis
  double headRotateStart = 0.0;   // rad
  double headRotateStop = 0.0;    // rad

  double tauNs() const;
  double wavelengthM() const { return wavelengthNm * 1e-9; }
  /// Gaussian beam waist: the configured value or lambda / (pi * divergence).
  double waistRadius() const;
  /// Throws ConfigError on non-positive required parameters.
  void validate() const;
};

/// Orientation and position of one emitted pulse.
struct BeamPose {
  Vec3 origin = Vec3::Zero();
  Eigen::Matrix3d frame = Eigen::Matrix3d::Identity();  // beam frame -> world; central ray is frame * (-Z)

  Vec3 centralDirection() const { return -frame.col(2); }
  Vec3 subrayDirection(const Subray& s) const { return frame * subrayLocalDirection(s); }
};

/// Platform attitude from roll, pitch, yaw (yaw about +Z, 0 = +X east, counterclockwise).
Eigen::Matrix3d attitudeMatrix(double roll, double pitch, double yaw);

/// Composes platform attitude, scanner head rotation, mount and deflector into a beam pose.
BeamPose composeBeam(const Vec3& platformPosition, const Eigen::Matrix3d& platformAttitude, double headAngle,
                     const ScannerSpec& scanner, double legTime);

}  // namespace vls

#pragma once

#include "vls/common/random.hpp"
#include "vls/raycast/geometry.hpp"

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace vls {

class Scene;

enum class PlatformKind { LinearPath, Multicopter, GroundVehicle, Static };
enum class TurnMode { TurnOnSpot, Smooth };

PlatformKind parsePlatformKind(std::string_view text);
TurnMode parseTurnMode(std::string_view text);

inline constexpr double kGravity = 9.80665;  // m/s^2

/// Yaw 0 faces +x (east) and grows counterclockwise. Angles are kept in (-pi, pi].
struct PlatformState {
  Vec3 position = Vec3::Zero();
  double roll = 0.0;
  double pitch = 0.0;
  double yaw = 0.0;
  double speed = 0.0;  // m/s, >= 0
  int direction = 1;   // -1 while a ground vehicle reverses
  double time = 0.0;   // s since the start of the leg

  double signedSpeed() const { return direction * speed; }
};

struct PlatformSpec {
  std::string id = "platform";
  std::string name;
  PlatformKind kind = PlatformKind::Static;
  double maxAccel = 2.0;                  // m/s^2, multicopter
  TurnMode turnMode = TurnMode::Smooth;   // multicopter
  double bankLimit = 0.5235987755982988;  // rad, smooth turns
  double yawRate = 1.5707963267948966;    // rad/s, turning on the spot
  double maxTurnRadius = 5.0;             // m, ground vehicle
  double mountHeight = 0.0;               // m above ground, ground vehicle
  double positionNoiseStd = 0.0;          // m
  double tick = 1e-3;                     // s

  bool moving() const { return kind != PlatformKind::Static; }
  void validate() const;
};

/// Per-leg scanner settings that replace the scanner defaults when present.
struct ScannerOverrides {
  std::optional<double> pulseFreqHz;
  std::optional<double> scanFreqHz;
  std::optional<double> scanAngleMax;  // rad
  std::optional<double> headRotatePerSec;
  std::optional<double> headRotateStart;
  std::optional<double> headRotateStop;
  bool active = true;
};

struct Leg {
  Vec3 waypoint = Vec3::Zero();
  double speed = 0.0;             // m/s
  std::optional<double> altitude;  // replaces waypoint z for airborne platforms
  std::optional<double> startYaw;  // rad
  std::optional<double> endYaw;    // rad
  std::optional<double> durationS;  // static platforms
  ScannerOverrides scanner;

  Vec3 target() const;
};

double wrapAngle(double a);
/// Heading of the horizontal part of `d`.
double bearing(const Vec3& d);

/// States of one leg on the kinematics tick. The last state may fall between ticks.
class LegTrajectory {
public:
  LegTrajectory() = default;
  explicit LegTrajectory(std::vector<PlatformState> states);

  const std::vector<PlatformState>& states() const { return states_; }
  double duration() const { return states_.empty() ? 0.0 : states_.back().time; }
  const PlatformState& front() const { return states_.front(); }
  const PlatformState& back() const { return states_.back(); }
  /// Linear interpolation of position and speed; angles along the shorter arc.
  PlatformState at(double t) const;

private:
  std::vector<PlatformState> states_;
};

/// One tick of the linear-path model: constant speed toward the waypoint, clamped on arrival.
PlatformState advanceLinearPath(const PlatformState& state, double dt, const Vec3& target, double speed);

/// Simulates every leg. Moving platforms travel from waypoint i to i+1 during leg i and
/// the final leg has zero duration; a static platform stays at each waypoint for the
/// leg's duration. `scene` is needed for ground vehicles. Throws SimulationError when a
/// ground vehicle finds no ground, naming the leg.
std::vector<LegTrajectory> simulateLegs(const PlatformSpec& spec, std::span<const Leg> legs, const Scene* scene);

/// Adds independent N(0, sigma) offsets per axis.
PlatformState applyPositionNoise(const PlatformState& state, RandomStream& rng, double sigma);

/// Duration of a static leg: `durationS`, else the head rotation span over its rate.
double staticLegDuration(const Leg& leg, double headRotatePerSec, double headRotateStart, double headRotateStop);

}  // namespace vls

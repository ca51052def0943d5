#include "vls/platform/platform.hpp"

#include "vls/common/error.hpp"
#include "vls/scene/scene.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace vls {

namespace {
constexpr double kPi = std::numbers::pi;
constexpr double kArrivalEps = 1e-9;
}  // namespace

PlatformKind parsePlatformKind(std::string_view text) {
  if (text == "linearPath") return PlatformKind::LinearPath;
  if (text == "multicopter") return PlatformKind::Multicopter;
  if (text == "groundVehicle") return PlatformKind::GroundVehicle;
  if (text == "static") return PlatformKind::Static;
  throw ConfigError("unknown platform type '" + std::string(text) + "'");
}

TurnMode parseTurnMode(std::string_view text) {
  if (text == "smooth") return TurnMode::Smooth;
  if (text == "turnOnSpot") return TurnMode::TurnOnSpot;
  throw ConfigError("unknown turn mode '" + std::string(text) + "'");
}

void PlatformSpec::validate() const {
  if (!(tick > 0.0)) throw ConfigError("platform tick must be > 0");
  if (positionNoiseStd < 0.0) throw ConfigError("position noise std must be >= 0");
  if (kind == PlatformKind::Multicopter) {
    if (!(maxAccel > 0.0)) throw ConfigError("multicopter maxAccel must be > 0");
    if (!(bankLimit > 0.0 && bankLimit < kPi / 2)) throw ConfigError("bank limit must be in (0, 90) degrees");
    if (!(yawRate > 0.0)) throw ConfigError("yaw rate must be > 0");
  }
  if (kind == PlatformKind::GroundVehicle && !(maxTurnRadius > 0.0)) {
    throw ConfigError("ground vehicle maxTurnRadius must be > 0");
  }
}

Vec3 Leg::target() const {
  Vec3 t = waypoint;
  if (altitude) t.z() = *altitude;
  return t;
}

double wrapAngle(double a) {
  a = std::fmod(a, 2.0 * kPi);
  if (a <= -kPi) a += 2.0 * kPi;
  if (a > kPi) a -= 2.0 * kPi;
  return a;
}

double bearing(const Vec3& d) { return std::atan2(d.y(), d.x()); }

LegTrajectory::LegTrajectory(std::vector<PlatformState> states) : states_(std::move(states)) {
  if (states_.empty()) throw ConfigError("a leg trajectory needs at least one state");
}

PlatformState LegTrajectory::at(double t) const {
  if (t <= states_.front().time) return states_.front();
  if (t >= states_.back().time) return states_.back();
  auto it = std::upper_bound(states_.begin(), states_.end(), t,
                             [](double v, const PlatformState& s) { return v < s.time; });
  const PlatformState& b = *it;
  const PlatformState& a = *(it - 1);
  const double span = b.time - a.time;
  const double f = span > 0.0 ? (t - a.time) / span : 0.0;
  PlatformState s = a;
  s.time = t;
  s.position = a.position + f * (b.position - a.position);
  s.speed = a.speed + f * (b.speed - a.speed);
  s.roll = wrapAngle(a.roll + f * wrapAngle(b.roll - a.roll));
  s.pitch = wrapAngle(a.pitch + f * wrapAngle(b.pitch - a.pitch));
  s.yaw = wrapAngle(a.yaw + f * wrapAngle(b.yaw - a.yaw));
  return s;
}

PlatformState advanceLinearPath(const PlatformState& state, double dt, const Vec3& target, double speed) {
  PlatformState next = state;
  next.time = state.time + dt;
  next.roll = 0.0;
  next.pitch = 0.0;
  next.speed = speed;
  next.direction = 1;
  const Vec3 d = target - state.position;
  const double dist = d.norm();
  if (Vec3(d.x(), d.y(), 0.0).norm() > kArrivalEps) next.yaw = bearing(d);
  if (speed * dt >= dist) {
    next.position = target;
  } else {
    next.position = state.position + (speed * dt / dist) * d;
  }
  return next;
}

PlatformState applyPositionNoise(const PlatformState& state, RandomStream& rng, double sigma) {
  if (sigma <= 0.0) return state;
  PlatformState s = state;
  for (int a = 0; a < 3; ++a) s.position[a] += rng.normal(0.0, sigma);
  return s;
}

double staticLegDuration(const Leg& leg, double headRotatePerSec, double headRotateStart, double headRotateStop) {
  if (leg.durationS) return *leg.durationS;
  if (headRotatePerSec != 0.0) return std::abs((headRotateStop - headRotateStart) / headRotatePerSec);
  return 0.0;
}

namespace {

/// Caps runaway legs (a pursuit that can never reach its target).
std::size_t stepBudget(double distance, double speed, double tick) {
  const double expected = speed > 0.0 ? distance / speed : 0.0;
  return static_cast<std::size_t>(std::min(1e8, 20.0 * expected / tick + 1e6));
}

void checkBudget(std::size_t steps, std::size_t budget, std::size_t legIndex) {
  if (steps > budget) {
    throw SimulationError("leg " + std::to_string(legIndex) + ": platform did not reach its waypoint");
  }
}

std::vector<PlatformState> linearPathLeg(const PlatformSpec& spec, PlatformState s, const Leg& leg, const Vec3& target,
                                         std::size_t legIndex) {
  if (!(leg.speed > 0.0)) throw ConfigError("leg " + std::to_string(legIndex) + ": speed must be > 0");
  std::vector<PlatformState> out;
  s.time = 0.0;
  s.speed = leg.speed;
  if (Vec3(target - s.position).head<2>().norm() > kArrivalEps) s.yaw = bearing(target - s.position);
  out.push_back(s);
  const std::size_t budget = stepBudget((target - s.position).norm(), leg.speed, spec.tick);
  while ((s.position - target).norm() > kArrivalEps) {
    const double dist = (target - s.position).norm();
    const double dt = std::min(spec.tick, dist / leg.speed);
    s = advanceLinearPath(s, dt, target, leg.speed);
    out.push_back(s);
    checkBudget(out.size(), budget, legIndex);
  }
  return out;
}

/// Rotates on the spot toward `yaw` at the configured yaw rate, shedding any residual speed.
void rotateOnSpot(const PlatformSpec& spec, PlatformState& s, double yaw, std::vector<PlatformState>& out) {
  const double step = spec.yawRate * spec.tick;
  while (std::abs(wrapAngle(yaw - s.yaw)) > 1e-12 || s.speed > 0.0) {
    const double err = wrapAngle(yaw - s.yaw);
    s.yaw = wrapAngle(s.yaw + std::clamp(err, -step, step));
    s.speed = std::max(0.0, s.speed - spec.maxAccel * spec.tick);
    s.roll = 0.0;
    s.time += spec.tick;
    out.push_back(s);
  }
}

struct CornerPlan {
  double exitSpeed = 0.0;
  double switchDistance = 0.0;  // distance before the waypoint where the turn starts
  bool smooth = false;
};

CornerPlan planCorner(const PlatformSpec& spec, const Vec3& from, const Vec3& via, const Vec3* to, double speedIn,
                      double speedOut) {
  CornerPlan plan;
  if (spec.turnMode != TurnMode::Smooth || to == nullptr || !(speedOut > 0.0)) return plan;
  const Vec3 in = via - from;
  const Vec3 out = *to - via;
  const double lin = in.head<2>().norm();
  const double lout = out.head<2>().norm();
  if (lin < kArrivalEps || lout < kArrivalEps) return plan;
  const double delta = std::abs(wrapAngle(bearing(out) - bearing(in)));
  // Near-reversals cannot be flown as a banked arc; stop and turn instead.
  if (delta > 170.0 * kPi / 180.0) return plan;
  const double gTan = kGravity * std::tan(spec.bankLimit);
  const double halfTan = std::tan(0.5 * delta);
  double vCorner = std::numeric_limits<double>::infinity();
  if (halfTan > 1e-12) {
    const double fitRadius = 0.5 * std::min(lin, lout) / halfTan;
    vCorner = std::sqrt(gTan * fitRadius);
  }
  plan.smooth = true;
  plan.exitSpeed = std::min({speedIn, speedOut, vCorner});
  plan.switchDistance = plan.exitSpeed * plan.exitSpeed / gTan * halfTan;
  return plan;
}

std::vector<PlatformState> multicopterLeg(const PlatformSpec& spec, PlatformState s, std::span<const Leg> legs,
                                          std::size_t i) {
  const Leg& leg = legs[i];
  const Vec3 target = legs[i + 1].target();
  if (!(leg.speed > 0.0)) throw ConfigError("leg " + std::to_string(i) + ": speed must be > 0");
  const Vec3 nextTarget = i + 2 < legs.size() ? legs[i + 2].target() : Vec3::Zero();
  const CornerPlan plan = planCorner(spec, legs[i].target(), target, i + 2 < legs.size() ? &nextTarget : nullptr,
                                     leg.speed, legs[i + 1].speed);
  const double gTan = kGravity * std::tan(spec.bankLimit);
  const double dt = spec.tick;

  std::vector<PlatformState> out;
  s.time = 0.0;
  s.direction = 1;
  out.push_back(s);

  const bool smooth = spec.turnMode == TurnMode::Smooth;
  if (!smooth) {
    // Stopped at the previous waypoint: face the leg, then fly it.
    const Vec3 d = target - s.position;
    const double legYaw = leg.startYaw.value_or(d.head<2>().norm() > kArrivalEps ? bearing(d) : s.yaw);
    rotateOnSpot(spec, s, legYaw, out);
  } else if (s.speed == 0.0 && (target - s.position).head<2>().norm() > kArrivalEps) {
    s.yaw = bearing(target - s.position);
    out.back().yaw = s.yaw;
  }

  const std::size_t budget = stepBudget((target - s.position).norm(), leg.speed, dt);
  while (true) {
    const Vec3 d = target - s.position;
    const double dist = d.norm();
    const double remaining = dist - plan.switchDistance;
    if (remaining <= kArrivalEps) break;

    // Largest speed that can still be shed to exitSpeed over what is left after this tick.
    const double aDt = spec.maxAccel * dt;
    const double brake =
        std::sqrt(aDt * aDt + plan.exitSpeed * plan.exitSpeed + 2.0 * spec.maxAccel * remaining) - aDt;
    const double v = std::max(s.speed - spec.maxAccel * dt, std::min({leg.speed, s.speed + spec.maxAccel * dt, brake}));
    PlatformState n = s;
    n.time = s.time + dt;
    n.speed = std::max(0.0, v);
    const double step = n.speed * dt;

    if (smooth) {
      const double desired = d.head<2>().norm() > kArrivalEps ? bearing(d) : s.yaw;
      const double err = wrapAngle(desired - s.yaw);
      const double maxTurn = n.speed > 0.0 ? gTan / n.speed * dt : kPi;
      const double turn = std::clamp(err, -maxTurn, maxTurn);
      n.yaw = wrapAngle(s.yaw + turn);
      // Coordinated turn: tan(roll) = v * yawRate / g, right wing down for a right turn.
      n.roll = -std::atan(n.speed * (turn / dt) / kGravity);
      const double horiz = d.head<2>().norm();
      const double climb = horiz > kArrivalEps ? d.z() * std::min(1.0, step / horiz) : d.z();
      if (!plan.smooth && step >= dist) {
        n.position = target;
      } else {
        n.position = s.position + Vec3(step * std::cos(n.yaw), step * std::sin(n.yaw), climb);
      }
      if (std::abs(turn) < 1e-15 && horiz > kArrivalEps && step < dist) {
        // Aligned with the target: fly straight at it so the arrival is exact.
        n.position = s.position + (step / dist) * d;
      }
    } else {
      n.roll = 0.0;
      n.position = step >= dist ? target : Vec3(s.position + (step / dist) * d);
    }
    s = n;
    out.push_back(s);
    checkBudget(out.size(), budget, i);
    if (!plan.smooth && (s.position - target).norm() <= kArrivalEps) break;
  }

  if (!plan.smooth) {
    s.position = target;
    s.speed = 0.0;
    out.back() = s;
  }
  if (!smooth && leg.endYaw) rotateOnSpot(spec, s, *leg.endYaw, out);
  return out;
}

struct GroundContext {
  const PlatformSpec& spec;
  const Scene& scene;
  std::size_t legIndex;

  double groundZ(const Vec3& p) const {
    const auto z = scene.groundHeight(p.x(), p.y());
    if (!z) {
      throw SimulationError("leg " + std::to_string(legIndex) + ": no ground below (" + std::to_string(p.x()) + ", " +
                            std::to_string(p.y()) + ")");
    }
    return *z + spec.mountHeight;
  }
};

/// Whether a forward arc of radius R on the side of `err` can never reach `target`.
bool insideTurningCircle(const PlatformState& s, const Vec3& target, double radius, double err) {
  const double side = err >= 0.0 ? 1.0 : -1.0;
  const Vec3 centre = s.position + side * radius * Vec3(-std::sin(s.yaw), std::cos(s.yaw), 0.0);
  return (target - centre).head<2>().norm() < radius - 1e-9;
}

std::vector<PlatformState> groundVehicleLeg(const PlatformSpec& spec, PlatformState s, std::span<const Leg> legs,
                                            std::size_t i, const Scene& scene) {
  const Leg& leg = legs[i];
  if (!(leg.speed > 0.0)) throw ConfigError("leg " + std::to_string(i) + ": speed must be > 0");
  const GroundContext ground{spec, scene, i};
  Vec3 target = legs[i + 1].waypoint;
  const double v = leg.speed;
  const double dt = spec.tick;
  const double radius = spec.maxTurnRadius;
  const double maxTurn = v * dt / radius;

  std::vector<PlatformState> out;
  s.time = 0.0;
  s.speed = v;
  s.direction = 1;
  s.roll = s.pitch = 0.0;
  s.position.z() = ground.groundZ(s.position);
  out.push_back(s);

  auto moveArc = [&](int direction, double turnSign, double headingChange) {
    double turned = 0.0;
    while (turned < headingChange - 1e-12) {
      const double dYaw = std::min(maxTurn, headingChange - turned);
      const double step = dYaw / maxTurn * v * dt;
      PlatformState n = s;
      n.time = s.time + dt * dYaw / maxTurn;
      n.direction = direction;
      n.yaw = wrapAngle(s.yaw + turnSign * dYaw);
      const double mid = s.yaw + 0.5 * turnSign * dYaw;
      n.position += direction * step * Vec3(std::cos(mid), std::sin(mid), 0.0);
      n.position.z() = ground.groundZ(n.position);
      turned += dYaw;
      s = n;
      out.push_back(s);
    }
  };

  const std::size_t budget = stepBudget((target - s.position).head<2>().norm() + 4.0 * kPi * radius, v, dt);
  int manoeuvres = 0;
  while (true) {
    const Vec3 d = target - s.position;
    const double dist = d.head<2>().norm();
    if (dist <= kArrivalEps) break;
    const double err = wrapAngle(bearing(d) - s.yaw);
    const bool wideTurn = std::abs(err) > 120.0 * kPi / 180.0 && dist < 2.0 * radius;
    if ((wideTurn || insideTurningCircle(s, target, radius, err)) && std::abs(err) > maxTurn) {
      if (++manoeuvres > 8) {
        throw SimulationError("leg " + std::to_string(i) + ": waypoint unreachable within the turn radius");
      }
      // Three-point turn: forward, reverse with opposite lock, forward; heading keeps turning one way.
      const double sign = err >= 0.0 ? 1.0 : -1.0;
      const double part = std::abs(err) / 3.0;
      moveArc(1, sign, part);
      moveArc(-1, sign, part);
      moveArc(1, sign, part);
      continue;
    }
    PlatformState n = s;
    n.direction = 1;
    n.yaw = wrapAngle(s.yaw + std::clamp(err, -maxTurn, maxTurn));
    const double step = v * dt;
    if (step >= dist && std::abs(err) < 0.5 * kPi) {
      n.time = s.time + dist / v;
      n.position = target;
    } else {
      n.time = s.time + dt;
      n.position += step * Vec3(std::cos(n.yaw), std::sin(n.yaw), 0.0);
    }
    n.position.z() = ground.groundZ(n.position);
    s = n;
    out.push_back(s);
    checkBudget(out.size(), budget, i);
  }
  return out;
}

}  // namespace

std::vector<LegTrajectory> simulateLegs(const PlatformSpec& spec, std::span<const Leg> legs, const Scene* scene) {
  spec.validate();
  if (legs.empty()) throw ConfigError("survey has no legs");
  std::vector<LegTrajectory> result;
  result.reserve(legs.size());

  if (spec.kind == PlatformKind::Static) {
    for (std::size_t i = 0; i < legs.size(); ++i) {
      PlatformState s;
      s.position = legs[i].target();
      s.yaw = wrapAngle(legs[i].startYaw.value_or(0.0));
      const double duration = legs[i].durationS.value_or(0.0);
      if (duration < 0.0) throw ConfigError("leg " + std::to_string(i) + ": duration must be >= 0");
      PlatformState e = s;
      e.time = duration;
      result.emplace_back(duration > 0.0 ? std::vector<PlatformState>{s, e} : std::vector<PlatformState>{s});
    }
    return result;
  }

  if (spec.kind == PlatformKind::GroundVehicle) {
    if (scene == nullptr) throw ConfigError("ground vehicle needs a scene");
    if (!scene->hasGround()) throw ConfigError("ground vehicle needs ground-flagged scene parts");
  }

  PlatformState s;
  s.position = legs.front().target();
  if (legs.size() > 1) {
    const Vec3 d = legs[1].target() - s.position;
    s.yaw = legs.front().startYaw.value_or(d.head<2>().norm() > kArrivalEps ? bearing(d) : 0.0);
  }
  for (std::size_t i = 0; i + 1 < legs.size(); ++i) {
    std::vector<PlatformState> states;
    switch (spec.kind) {
      case PlatformKind::LinearPath:
        states = linearPathLeg(spec, s, legs[i], legs[i + 1].target(), i);
        break;
      case PlatformKind::Multicopter:
        states = multicopterLeg(spec, s, legs, i);
        break;
      case PlatformKind::GroundVehicle:
        states = groundVehicleLeg(spec, s, legs, i, *scene);
        break;
      case PlatformKind::Static:
        break;
    }
    s = states.back();
    result.emplace_back(std::move(states));
  }
  // The last waypoint ends the survey: a single state with no scanning time.
  PlatformState last = s;
  last.time = 0.0;
  result.emplace_back(std::vector<PlatformState>{last});
  return result;
}

}  // namespace vls

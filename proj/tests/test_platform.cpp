#include "vls/common/error.hpp"
#include "vls/platform/platform.hpp"
#include "vls/scene/scene.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

using namespace vls;

namespace {

constexpr double kPi = std::numbers::pi;

Leg leg(double x, double y, double z, double speed) {
  Leg l;
  l.waypoint = Vec3(x, y, z);
  l.speed = speed;
  return l;
}

Scene flatGround(double z, double half) {
  auto mat = std::make_shared<Material>();
  mat->isGround = true;
  ScenePart part;
  part.id = "ground";
  Primitive a{Triangle(Vec3(-half, -half, z), Vec3(half, -half, z), Vec3(half, half, z)), mat};
  Primitive b{Triangle(Vec3(-half, -half, z), Vec3(half, half, z), Vec3(-half, half, z)), mat};
  part.primitives = {a, b};
  return Scene("flat", {part});
}

std::vector<PlatformState> flatten(const std::vector<LegTrajectory>& legs) {
  std::vector<PlatformState> out;
  for (const auto& l : legs) out.insert(out.end(), l.states().begin(), l.states().end());
  return out;
}

}  // namespace

TEST_CASE("angle helpers") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-50.0, 50.0);
  for (int i = 0; i < 10000; ++i) {
    const double a = u(rng);
    const double w = wrapAngle(a);
    CHECK(w > -kPi);
    CHECK(w <= kPi);
    CHECK(std::abs(std::remainder(a - w, 2.0 * kPi)) < 1e-9);
  }
  CHECK(wrapAngle(-kPi) == doctest::Approx(kPi));
  CHECK(bearing(Vec3(0, 1, 5)) == doctest::Approx(kPi / 2));
  CHECK(bearing(Vec3(-1, 0, 0)) == doctest::Approx(kPi));
}

TEST_CASE("trajectory interpolation") {
  PlatformState a, b;
  a.yaw = kPi - 0.1;
  b.yaw = -kPi + 0.1;
  b.time = 1.0;
  b.position = Vec3(2, 0, 0);
  b.speed = 4.0;
  const LegTrajectory t({a, b});
  const auto mid = t.at(0.5);
  CHECK(std::abs(wrapAngle(mid.yaw - kPi)) < 1e-12);
  CHECK(mid.position.x() == doctest::Approx(1.0));
  CHECK(mid.speed == doctest::Approx(2.0));
  CHECK(t.at(-1.0).position == a.position);
  CHECK(t.at(5.0).position == b.position);
  CHECK_THROWS_AS(LegTrajectory(std::vector<PlatformState>{}), ConfigError);
}

TEST_CASE("linear path") {
  PlatformSpec spec;
  spec.kind = PlatformKind::LinearPath;
  spec.tick = 0.01;

  SUBCASE("single tick examples") {
    PlatformState s;
    const auto n = advanceLinearPath(s, 0.5, Vec3(10, 0, 0), 4.0);
    CHECK((n.position - Vec3(2, 0, 0)).norm() < 1e-12);
    CHECK(n.time == 0.5);
    const auto arrive = advanceLinearPath(n, 10.0, Vec3(10, 0, 0), 4.0);
    CHECK(arrive.position == Vec3(10, 0, 0));
    const auto diag = advanceLinearPath(s, 1.0, Vec3(3, 4, 0), 2.5);
    CHECK((diag.position - Vec3(1.5, 2.0, 0)).norm() < 1e-12);
    CHECK(diag.yaw == doctest::Approx(std::atan2(4.0, 3.0)));
  }

  SUBCASE("constant speed along a polyline") {
    const std::vector<Leg> legs{leg(0, 0, 100, 50), leg(1000, 0, 100, 50), leg(1000, 300, 120, 25), leg(0, 0, 0, 0)};
    const auto traj = simulateLegs(spec, legs, nullptr);
    REQUIRE(traj.size() == 4);
    CHECK(traj[0].duration() == doctest::Approx(20.0).epsilon(1e-9));
    CHECK(traj[1].duration() == doctest::Approx(Vec3(0, 300, 20).norm() / 50.0).epsilon(1e-9));
    CHECK(traj[3].states().size() == 1);
    for (std::size_t l = 0; l < 2; ++l) {
      const auto& st = traj[l].states();
      for (std::size_t k = 1; k < st.size(); ++k) {
        const double v = (st[k].position - st[k - 1].position).norm() / (st[k].time - st[k - 1].time);
        CHECK(v == doctest::Approx(50.0).epsilon(1e-9));
      }
      CHECK((st.back().position - legs[l + 1].target()).norm() < 1e-9);
    }
    const auto quarter = traj[0].at(5.0);
    CHECK((quarter.position - Vec3(250, 0, 100)).norm() < 1e-9);
  }

  SUBCASE("altitude replaces the waypoint height") {
    Leg a = leg(0, 0, 0, 10), b = leg(100, 0, 0, 10);
    a.altitude = 500.0;
    b.altitude = 500.0;
    const auto traj = simulateLegs(spec, std::vector<Leg>{a, b}, nullptr);
    for (const auto& s : traj[0].states()) CHECK(s.position.z() == 500.0);
  }

  SUBCASE("zero speed is rejected") {
    CHECK_THROWS_AS(simulateLegs(spec, std::vector<Leg>{leg(0, 0, 0, 0), leg(1, 0, 0, 0)}, nullptr), ConfigError);
  }
}

TEST_CASE("static platform") {
  PlatformSpec spec;
  Leg a = leg(1, 2, 3, 0);
  a.durationS = 2.5;
  a.startYaw = 0.5;
  Leg b = leg(-4, 0, 1.5, 0);
  b.durationS = 0.0;
  const auto traj = simulateLegs(spec, std::vector<Leg>{a, b}, nullptr);
  REQUIRE(traj.size() == 2);
  CHECK(traj[0].duration() == 2.5);
  for (double t : {0.0, 0.7, 2.5, 9.0}) {
    CHECK(traj[0].at(t).position == Vec3(1, 2, 3));
    CHECK(traj[0].at(t).yaw == 0.5);
    CHECK(traj[0].at(t).speed == 0.0);
  }
  CHECK(traj[1].duration() == 0.0);
  CHECK(traj[1].front().position == Vec3(-4, 0, 1.5));

  Leg spin;
  CHECK(staticLegDuration(spin, 0.5, 0.0, kPi) == doctest::Approx(2.0 * kPi));
  spin.durationS = 3.0;
  CHECK(staticLegDuration(spin, 0.5, 0.0, kPi) == 3.0);
  Leg bad = a;
  bad.durationS = -1.0;
  CHECK_THROWS_AS(simulateLegs(spec, std::vector<Leg>{bad}, nullptr), ConfigError);
}

TEST_CASE("multicopter turning on the spot") {
  PlatformSpec spec;
  spec.kind = PlatformKind::Multicopter;
  spec.turnMode = TurnMode::TurnOnSpot;
  spec.maxAccel = 2.0;
  spec.tick = 0.01;
  const std::vector<Leg> legs{leg(0, 0, 50, 8), leg(100, 0, 50, 8), leg(100, 100, 50, 8), leg(0, 0, 50, 0)};
  const auto traj = simulateLegs(spec, legs, nullptr);
  REQUIRE(traj.size() == 4);

  // Starts from rest: v = a t while accelerating.
  for (const auto& s : traj[0].states()) {
    if (s.time > 3.5) break;
    CHECK(s.speed == doctest::Approx(2.0 * s.time).epsilon(1e-9));
  }
  for (std::size_t l = 0; l < 3; ++l) {
    const auto& st = traj[l].states();
    for (std::size_t k = 1; k < st.size(); ++k) {
      const double dt = st[k].time - st[k - 1].time;
      CHECK(st[k].speed <= 8.0 + 1e-12);
      CHECK(std::abs(st[k].speed - st[k - 1].speed) <= 2.0 * dt + 1e-9);
      CHECK(st[k].roll == 0.0);
    }
    CHECK(st.back().speed == 0.0);
    CHECK((st.back().position - legs[l + 1].target()).norm() < 1e-9);
  }
  // Leg 1 begins with a 90 degree rotation in place.
  const auto& st = traj[1].states();
  CHECK(st.front().yaw == doctest::Approx(0.0));
  const auto moving = std::find_if(st.begin(), st.end(), [](const PlatformState& s) { return s.speed > 0.0; });
  REQUIRE(moving != st.begin());
  REQUIRE(moving != st.end());
  const auto& turned = *(moving - 1);
  CHECK(turned.yaw == doctest::Approx(kPi / 2));
  CHECK((turned.position - Vec3(100, 0, 50)).norm() < 1e-9);
  CHECK(turned.time == doctest::Approx(kPi / 2 / spec.yawRate).epsilon(0.01));
}

TEST_CASE("multicopter smooth corner radius") {
  PlatformSpec spec;
  spec.kind = PlatformKind::Multicopter;
  spec.turnMode = TurnMode::Smooth;
  spec.bankLimit = 30.0 * kPi / 180.0;
  spec.maxAccel = 3.0;
  spec.tick = 0.005;
  const double v = 10.0;
  const std::vector<Leg> legs{leg(0, 0, 50, v), leg(300, 0, 50, v), leg(300, 300, 50, v), leg(0, 0, 0, 0)};
  const auto traj = simulateLegs(spec, legs, nullptr);
  const auto all = flatten(traj);

  std::vector<double> radii;
  double maxRoll = 0.0;
  for (std::size_t k = 1; k < all.size(); ++k) {
    const double dt = all[k].time - all[k - 1].time;
    if (dt <= 0.0) continue;
    const double dyaw = std::abs(wrapAngle(all[k].yaw - all[k - 1].yaw));
    const double ds = (all[k].position - all[k - 1].position).head<2>().norm();
    if (dyaw > 1e-9 && all[k].speed > 0.5 * v) radii.push_back(ds / dyaw);
    maxRoll = std::max(maxRoll, std::abs(all[k].roll));
  }
  REQUIRE(radii.size() > 10);
  std::sort(radii.begin(), radii.end());
  const double expected = v * v / (kGravity * std::tan(spec.bankLimit));
  CHECK(expected == doctest::Approx(17.66).epsilon(0.01));
  CHECK(radii[radii.size() / 2] == doctest::Approx(expected).epsilon(0.05));
  CHECK(radii.front() >= 0.95 * expected);
  CHECK(maxRoll <= spec.bankLimit + 1e-9);

  // The corner is cut: the path never reaches the corner waypoint itself.
  double closest = 1e9;
  for (const auto& s : all) closest = std::min(closest, (s.position - Vec3(300, 0, 50)).norm());
  CHECK(closest > 1.0);
  // Speed stays bounded and acceleration limited over the whole flight.
  for (std::size_t k = 1; k < all.size(); ++k) {
    const double dt = all[k].time - all[k - 1].time;
    CHECK(all[k].speed <= v + 1e-12);
    if (dt > 0.0) CHECK(std::abs(all[k].speed - all[k - 1].speed) <= spec.maxAccel * dt + 1e-9);
  }
  CHECK((all.back().position - Vec3(0, 0, 0)).norm() < 1e-6);
}

TEST_CASE("ground vehicle") {
  PlatformSpec spec;
  spec.kind = PlatformKind::GroundVehicle;
  spec.maxTurnRadius = 15.0;
  spec.mountHeight = 1.5;
  spec.tick = 0.01;
  const Scene ground = flatGround(2.0, 100.0);

  SUBCASE("follows the ground at mount height with bounded curvature") {
    const std::vector<Leg> legs{leg(-50, -50, 0, 5), leg(50, -40, 0, 5), leg(40, 60, 0, 5), leg(-60, 0, 0, 0)};
    const auto all = flatten(simulateLegs(spec, legs, &ground));
    for (std::size_t k = 1; k < all.size(); ++k) {
      CHECK(all[k].position.z() == doctest::Approx(3.5).epsilon(1e-12));
      const double ds = (all[k].position - all[k - 1].position).head<2>().norm();
      const double dyaw = std::abs(wrapAngle(all[k].yaw - all[k - 1].yaw));
      if (ds > 1e-9) CHECK(dyaw / ds <= 1.0 / spec.maxTurnRadius * (1.0 + 1e-6));
    }
    CHECK((all.back().position.head<2>() - Vec3(-60, 0, 0).head<2>()).norm() < 1e-6);
  }

  SUBCASE("a reversal needs a multi-point turn") {
    const std::vector<Leg> legs{leg(0, 0, 0, 3), leg(20, 0, 0, 3), leg(0, 0, 0, 0)};
    const auto traj = simulateLegs(spec, legs, &ground);
    const auto& st = traj[1].states();
    CHECK(std::any_of(st.begin(), st.end(), [](const PlatformState& s) { return s.direction == -1; }));
    CHECK(std::abs(std::abs(wrapAngle(st.back().yaw)) - kPi) < 0.5);
    CHECK(st.back().position.head<2>().norm() < 1e-6);
    for (std::size_t k = 1; k < st.size(); ++k) {
      const double ds = (st[k].position - st[k - 1].position).head<2>().norm();
      const double dyaw = std::abs(wrapAngle(st[k].yaw - st[k - 1].yaw));
      if (ds > 1e-9) CHECK(dyaw / ds <= 1.0 / spec.maxTurnRadius * (1.0 + 1e-6));
    }
  }

  SUBCASE("missing ground names the leg") {
    const std::vector<Leg> legs{leg(0, 0, 0, 5), leg(50, 0, 0, 5), leg(200, 0, 0, 0)};
    try {
      simulateLegs(spec, legs, &ground);
      FAIL("expected a simulation error");
    } catch (const SimulationError& e) {
      CHECK(std::string(e.what()).find("leg 1") != std::string::npos);
    }
  }

  SUBCASE("needs a scene with ground") {
    const std::vector<Leg> legs{leg(0, 0, 0, 5), leg(5, 0, 0, 0)};
    CHECK_THROWS_AS(simulateLegs(spec, legs, nullptr), ConfigError);
  }
}

TEST_CASE("position noise") {
  PlatformState s;
  s.position = Vec3(1, 2, 3);
  RandomStream a(77), b(77);
  double sum = 0.0, sum2 = 0.0;
  const int n = 20000;
  for (int i = 0; i < n; ++i) {
    const auto na = applyPositionNoise(s, a, 0.05);
    const auto nb = applyPositionNoise(s, b, 0.05);
    CHECK(na.position == nb.position);
    const double dx = na.position.x() - 1.0;
    sum += dx;
    sum2 += dx * dx;
  }
  const double mean = sum / n;
  const double sd = std::sqrt(sum2 / n - mean * mean);
  CHECK(sd >= 0.045);
  CHECK(sd <= 0.055);
  CHECK(std::abs(mean) < 4.0 * 0.05 / std::sqrt(n));
  RandomStream c(1);
  CHECK(applyPositionNoise(s, c, 0.0).position == s.position);
}

TEST_CASE("platform validation") {
  CHECK(parsePlatformKind("multicopter") == PlatformKind::Multicopter);
  CHECK_THROWS_AS(parsePlatformKind("balloon"), ConfigError);
  CHECK_THROWS_AS(parseTurnMode("wobble"), ConfigError);
  PlatformSpec spec;
  spec.kind = PlatformKind::Multicopter;
  spec.bankLimit = kPi / 2;
  CHECK_THROWS_AS(spec.validate(), ConfigError);
  spec.bankLimit = 0.3;
  spec.tick = 0.0;
  CHECK_THROWS_AS(spec.validate(), ConfigError);
  CHECK_THROWS_AS(simulateLegs(PlatformSpec{}, std::vector<Leg>{}, nullptr), ConfigError);
}

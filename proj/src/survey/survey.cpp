#include "vls/survey/survey.hpp"

#include "vls/common/error.hpp"
#include "vls/common/random.hpp"
#include "vls/common/xml.hpp"

#include <spdlog/spdlog.h>

#include <cmath>
#include <numbers>

namespace vls {

namespace {

constexpr double kDeg = std::numbers::pi / 180.0;

std::optional<double> optDegrees(const xml::Element& e, std::string_view key) {
  if (auto v = e.optNumber(key)) return *v * kDeg;
  return std::nullopt;
}

DeflectorKind parseDeflectorKind(const xml::Element& e, const std::string& text) {
  if (text == "rotatingPolygon") return DeflectorKind::RotatingPolygon;
  if (text == "fibreOptic" || text == "fiberOptic") return DeflectorKind::FibreOptic;
  if (text == "oscillating") return DeflectorKind::Oscillating;
  if (text == "palmer") return DeflectorKind::Palmer;
  e.fail("unknown deflector '" + text + "'");
}

}  // namespace

ScannerSpec parseScanner(const xml::Element& e) {
  e.warnUnknownAttributes({"id", "name", "pulseFreq_hz", "beamDivergence_rad", "wavelength_nm", "beamWaistRadius_m",
                           "focusingRange_m", "pulseLength_ns", "peakPower", "rangeError_m", "receiverDiameter_m",
                           "atmosphericEfficiency", "maxReturns", "beamSampleQuality", "deflector", "scanFreq_hz",
                           "scanAngleMax_deg", "palmerOffNadir_deg", "headRotatePerSec_deg", "headRotateStart_deg",
                           "headRotateStop_deg"});
  e.warnUnknownChildren({"mount"});
  ScannerSpec s;
  s.id = e.attr("id").value_or(s.id);
  s.name = e.attr("name").value_or(s.id);
  s.pulseFreqHz = e.number("pulseFreq_hz", s.pulseFreqHz);
  s.beamDivergence = e.number("beamDivergence_rad", s.beamDivergence);
  s.wavelengthNm = e.number("wavelength_nm", s.wavelengthNm);
  s.beamWaistRadius = e.optNumber("beamWaistRadius_m");
  s.focusingRange = e.number("focusingRange_m", s.focusingRange);
  s.pulseLengthNs = e.number("pulseLength_ns", s.pulseLengthNs);
  s.peakPower = e.number("peakPower", s.peakPower);
  s.rangeErrorStd = e.number("rangeError_m", s.rangeErrorStd);
  s.receiverDiameter = e.number("receiverDiameter_m", s.receiverDiameter);
  s.atmosphericEfficiency = e.number("atmosphericEfficiency", s.atmosphericEfficiency);
  s.maxReturns = static_cast<int>(e.integer("maxReturns", s.maxReturns));
  s.beamSampleQuality = static_cast<int>(e.integer("beamSampleQuality", s.beamSampleQuality));
  if (auto d = e.attr("deflector")) s.deflector.kind = parseDeflectorKind(e, *d);
  s.deflector.scanFreqHz = e.number("scanFreq_hz", s.deflector.scanFreqHz);
  s.deflector.scanAngleMax = optDegrees(e, "scanAngleMax_deg").value_or(s.deflector.scanAngleMax);
  s.deflector.palmerOffNadir = optDegrees(e, "palmerOffNadir_deg").value_or(s.deflector.palmerOffNadir);
  s.headRotatePerSec = optDegrees(e, "headRotatePerSec_deg").value_or(0.0);
  s.headRotateStart = optDegrees(e, "headRotateStart_deg").value_or(0.0);
  s.headRotateStop = optDegrees(e, "headRotateStop_deg").value_or(0.0);
  if (auto mount = e.child("mount")) {
    const PartTransform t = parseTransform(*mount);
    s.mountRotation = t.rotationMatrix();
    s.mountOffset = t.translation;
  }
  try {
    s.validate();
  } catch (const ConfigError& err) {
    e.fail(err.what());
  }
  return s;
}

PlatformSpec parsePlatform(const xml::Element& e) {
  e.warnUnknownAttributes({"id", "name", "type", "maxAccel_mps2", "turnMode", "bankLimit_deg", "yawRate_degps",
                           "maxTurnRadius_m", "mountHeight_m", "positionNoise_m", "tick_s"});
  e.warnUnknownChildren({});
  PlatformSpec p;
  p.id = e.attr("id").value_or(p.id);
  p.name = e.attr("name").value_or(p.id);
  try {
    p.kind = parsePlatformKind(e.requireAttr("type"));
    if (auto m = e.attr("turnMode")) p.turnMode = parseTurnMode(*m);
  } catch (const ConfigError& err) {
    e.fail(err.what());
  }
  p.maxAccel = e.number("maxAccel_mps2", p.maxAccel);
  p.bankLimit = optDegrees(e, "bankLimit_deg").value_or(p.bankLimit);
  p.yawRate = optDegrees(e, "yawRate_degps").value_or(p.yawRate);
  p.maxTurnRadius = e.number("maxTurnRadius_m", p.maxTurnRadius);
  p.mountHeight = e.number("mountHeight_m", p.mountHeight);
  p.positionNoiseStd = e.number("positionNoise_m", p.positionNoiseStd);
  p.tick = e.number("tick_s", p.tick);
  try {
    p.validate();
  } catch (const ConfigError& err) {
    e.fail(err.what());
  }
  return p;
}

Leg parseLeg(const xml::Element& e) {
  e.warnUnknownAttributes({"position", "x", "y", "z", "speed_mps", "altitude_m", "startYaw_deg", "endYaw_deg",
                           "duration_s", "active", "pulseFreq_hz", "scanFreq_hz", "scanAngleMax_deg",
                           "headRotatePerSec_deg", "headRotateStart_deg", "headRotateStop_deg"});
  e.warnUnknownChildren({});
  Leg leg;
  if (auto p = e.optVec3("position")) {
    leg.waypoint = *p;
  } else {
    leg.waypoint = Vec3(e.number("x", 0.0), e.number("y", 0.0), e.number("z", 0.0));
  }
  leg.speed = e.number("speed_mps", 0.0);
  leg.altitude = e.optNumber("altitude_m");
  leg.startYaw = optDegrees(e, "startYaw_deg");
  leg.endYaw = optDegrees(e, "endYaw_deg");
  leg.durationS = e.optNumber("duration_s");
  if (leg.durationS && *leg.durationS < 0.0) e.fail("duration_s must be >= 0");
  auto& o = leg.scanner;
  o.active = e.boolean("active", true);
  o.pulseFreqHz = e.optNumber("pulseFreq_hz");
  o.scanFreqHz = e.optNumber("scanFreq_hz");
  o.scanAngleMax = optDegrees(e, "scanAngleMax_deg");
  o.headRotatePerSec = optDegrees(e, "headRotatePerSec_deg");
  o.headRotateStart = optDegrees(e, "headRotateStart_deg");
  o.headRotateStop = optDegrees(e, "headRotateStop_deg");
  return leg;
}

std::map<std::string, ScannerSpec> loadScannerCatalogue(const std::filesystem::path& path) {
  std::map<std::string, ScannerSpec> out;
  for (const auto& e : xml::topLevel(xml::loadDocument(path), "scanner")) {
    auto s = parseScanner(e);
    out.emplace(s.id, std::move(s));
  }
  return out;
}

ScannerSpec Survey::scannerForLeg(std::size_t legIndex) const {
  ScannerSpec s = scanner;
  const auto& o = legs.at(legIndex).scanner;
  if (o.pulseFreqHz) s.pulseFreqHz = *o.pulseFreqHz;
  if (o.scanFreqHz) s.deflector.scanFreqHz = *o.scanFreqHz;
  if (o.scanAngleMax) s.deflector.scanAngleMax = *o.scanAngleMax;
  if (o.headRotatePerSec) s.headRotatePerSec = *o.headRotatePerSec;
  if (o.headRotateStart) s.headRotateStart = *o.headRotateStart;
  if (o.headRotateStop) s.headRotateStop = *o.headRotateStop;
  return s;
}

void Survey::validate() const {
  if (legs.empty()) throw ConfigError(sourcePath.string() + ": survey has no legs");
  if (!(binWidthNs > 0.0)) throw ConfigError(sourcePath.string() + ": binWidth_ns must be > 0");
  if (!(maxFullwaveRangeNs >= binWidthNs)) {
    throw ConfigError(sourcePath.string() + ": maxFullwaveRange_ns must be at least one bin");
  }
  if (trajectoryIntervalS < 0.0) throw ConfigError(sourcePath.string() + ": trajectoryInterval_s must be >= 0");
  if (platform.moving() && legs.size() < 2) {
    throw ConfigError(sourcePath.string() + ": a moving platform needs at least two legs");
  }
  for (std::size_t i = 0; i < legs.size(); ++i) {
    const ScannerSpec s = scannerForLeg(i);
    try {
      s.validate();
    } catch (const ConfigError& err) {
      throw ConfigError(sourcePath.string() + ": leg " + std::to_string(i) + ": " + err.what());
    }
  }
}

Survey parseSurvey(const std::filesystem::path& path, const SurveyLoadOptions& options) {
  const auto doc = xml::loadDocument(path);
  const auto surveys = xml::topLevel(doc, "survey");
  if (surveys.size() != 1) {
    throw ConfigError(path.string() + ": expected exactly one <survey>, found " + std::to_string(surveys.size()));
  }
  const xml::Element& e = surveys.front();
  e.warnUnknownAttributes({"id", "name", "scanner", "platform", "scene", "seed", "trajectoryInterval_s", "binWidth_ns",
                           "binSize_ns", "maxFullwaveRange_ns", "beamSampleQuality", "lasOutput", "writeWaveform",
                           "calcEchowidth", "zipOutput"});
  e.warnUnknownChildren({"leg"});

  Survey survey;
  survey.sourcePath = path;
  survey.name = e.attr("name").value_or(path.stem().string());

  const auto scannerEl = xml::resolveReference(xml::parseReference(e.requireAttr("scanner"), path), "scanner", e, "scanner");
  survey.scanner = parseScanner(scannerEl);
  if (auto q = e.optInteger("beamSampleQuality")) survey.scanner.beamSampleQuality = static_cast<int>(*q);

  const auto platformEl =
      xml::resolveReference(xml::parseReference(e.requireAttr("platform"), path), "platform", e, "platform");
  survey.platform = parsePlatform(platformEl);

  if (options.seedOverride) survey.seedText = *options.seedOverride;
  else if (auto s = e.attr("seed")) survey.seedText = *s;
  else survey.seedText = timeSeedText();

  survey.trajectoryIntervalS = e.number("trajectoryInterval_s", survey.trajectoryIntervalS);
  survey.binWidthNs = e.optNumber("binWidth_ns").value_or(e.number("binSize_ns", survey.binWidthNs));
  survey.maxFullwaveRangeNs = e.number("maxFullwaveRange_ns", survey.maxFullwaveRangeNs);
  survey.outputs.lasOutput = e.boolean("lasOutput", false);
  survey.outputs.writeWaveform = e.boolean("writeWaveform", false);
  survey.outputs.calcEchowidth = e.boolean("calcEchowidth", false);
  survey.outputs.zipOutput = e.boolean("zipOutput", false);

  for (const auto& legEl : e.children("leg")) survey.legs.push_back(parseLeg(legEl));

  if (survey.platform.kind == PlatformKind::Static) {
    for (std::size_t i = 0; i < survey.legs.size(); ++i) {
      auto& leg = survey.legs[i];
      if (!leg.durationS) {
        const ScannerSpec s = survey.scannerForLeg(i);
        leg.durationS = staticLegDuration(leg, s.headRotatePerSec, s.headRotateStart, s.headRotateStop);
      }
    }
  }
  survey.validate();

  const auto sceneRef = xml::parseReference(e.requireAttr("scene"), path);
  if (options.loadScene) {
    const auto sceneEl = xml::resolveReference(sceneRef, "scene", e, "scene");
    SceneLoadOptions so;
    so.seed = hashSeedText(survey.seedText);
    survey.scene = std::make_shared<const Scene>(loadScene(sceneEl, so));
  }
  return survey;
}

}  // namespace vls

#pragma once

#include "vls/beam/scanner.hpp"
#include "vls/platform/platform.hpp"
#include "vls/scene/scene.hpp"

#include <filesystem>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace vls {

namespace xml {
class Element;
}

struct OutputFlags {
  bool lasOutput = false;
  bool writeWaveform = false;
  bool calcEchowidth = false;
  bool zipOutput = false;
};

struct Survey {
  std::string name = "survey";
  std::filesystem::path sourcePath;
  ScannerSpec scanner;
  PlatformSpec platform;
  std::shared_ptr<const Scene> scene;
  std::vector<Leg> legs;
  std::string seedText;  // resolved: command line, then XML, then wall clock
  OutputFlags outputs;
  double trajectoryIntervalS = 0.1;
  double binWidthNs = 0.25;
  double maxFullwaveRangeNs = 100.0;

  /// Scanner with the leg's overrides applied.
  ScannerSpec scannerForLeg(std::size_t legIndex) const;
  void validate() const;
};

ScannerSpec parseScanner(const xml::Element& element);
PlatformSpec parsePlatform(const xml::Element& element);
Leg parseLeg(const xml::Element& element);

/// Every `<scanner>` of a file keyed by id.
std::map<std::string, ScannerSpec> loadScannerCatalogue(const std::filesystem::path& path);

struct SurveyLoadOptions {
  /// Replaces the seed given in the XML.
  std::optional<std::string> seedOverride;
  /// Skips scene loading (for inspecting configuration only).
  bool loadScene = true;
};

/// Reads a survey and everything it references (`file#id`, relative to the referencing file).
Survey parseSurvey(const std::filesystem::path& path, const SurveyLoadOptions& options = {});

}  // namespace vls

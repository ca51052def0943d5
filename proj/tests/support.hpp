#pragma once

#include <atomic>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <system_error>

namespace vls::test {

/// Scratch directory removed on destruction.
class TempDir {
public:
  explicit TempDir(const std::string& tag = "vls") {
    static std::atomic<int> counter{0};
    std::random_device rd;
    path_ = std::filesystem::temp_directory_path() /
            (tag + "_" + std::to_string(rd()) + "_" + std::to_string(counter++));
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

private:
  std::filesystem::path path_;
};

inline void writeText(const std::filesystem::path& path, const std::string& text) {
  std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  out << text;
}

inline std::string readText(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

/// Square ground plane of half-width `half` at height z, two triangles.
inline void writeGroundObj(const std::filesystem::path& path, double z, double half = 50.0,
                           const std::string& material = "ground") {
  std::ostringstream o;
  o.precision(17);
  o << "mtllib ground.mtl\n";
  o << "v " << -half << ' ' << -half << ' ' << z << '\n';
  o << "v " << half << ' ' << -half << ' ' << z << '\n';
  o << "v " << half << ' ' << half << ' ' << z << '\n';
  o << "v " << -half << ' ' << half << ' ' << z << '\n';
  o << "usemtl " << material << "\n";
  o << "f 1 2 3\nf 1 3 4\n";
  writeText(path, o.str());
  writeText(path.parent_path() / "ground.mtl",
            "newmtl ground\nKd 0.5 0.5 0.5\nisGround true\nclassification 2\n");
}

struct FixtureOptions {
  std::string platform = R"(<platform id="p" type="static"/>)";
  std::string scannerAttrs = R"(pulseFreq_hz="1000" beamDivergence_rad="0.0003" wavelength_nm="1064" pulseLength_ns="4"
            rangeError_m="0" receiverDiameter_m="0.1" maxReturns="4" beamSampleQuality="1" deflector="oscillating"
            scanFreq_hz="10" scanAngleMax_deg="20")";
  std::string sceneParts = R"(<part id="ground" type="obj" file="ground.obj"/>)";
  std::string legs = R"(<leg position="0 0 10" duration_s="1"/>)";
  std::string surveyAttrs = R"(seed="42")";
  double groundZ = 0.0;
};

/// Writes scanner.xml, platform.xml, scene.xml, ground.obj and survey.xml into `dir` and
/// returns the survey path.
inline std::filesystem::path writeFixture(const std::filesystem::path& dir, const FixtureOptions& o = {}) {
  writeGroundObj(dir / "ground.obj", o.groundZ);
  writeText(dir / "scanner.xml", "<document><scanner id=\"s\" " + o.scannerAttrs + "/></document>\n");
  writeText(dir / "platform.xml", "<document>" + o.platform + "</document>\n");
  writeText(dir / "scene.xml", "<document><scene id=\"sc\">" + o.sceneParts + "</scene></document>\n");
  writeText(dir / "survey.xml", "<document><survey name=\"fixture\" scanner=\"scanner.xml#s\" "
                                "platform=\"platform.xml#p\" scene=\"scene.xml#sc\" " +
                                    o.surveyAttrs + ">" + o.legs + "</survey></document>\n");
  return dir / "survey.xml";
}

}  // namespace vls::test

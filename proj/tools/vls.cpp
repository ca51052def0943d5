#include "vls/common/error.hpp"
#include "vls/survey/output.hpp"
#include "vls/survey/runtime.hpp"
#include "vls/survey/survey.hpp"

#include <CLI11.hpp>
#include <fmt/format.h>
#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include <cstdlib>
#include <iostream>
#include <string>
#include <vector>

namespace {

std::filesystem::path defaultOutputDir() {
  if (const char* env = std::getenv("VLS_OUTPUT_DIR"); env != nullptr && *env != '\0') return env;
  return "output";
}

}  // namespace

int main(int argc, char** argv) {
  spdlog::set_default_logger(spdlog::stderr_color_mt("vls"));
  spdlog::set_pattern("[%l] %v");

  CLI::App app{"vls: virtual laser scanning simulator"};
  app.require_subcommand(0, 1);

  std::vector<std::string> unzipArgs;
  app.add_option("--unzip", unzipArgs, "Decompress a gzip output file: --unzip <in> <out>")->expected(2);

  auto* run = app.add_subcommand("run", "Run a survey");
  std::string surveyPath;
  bool lasOutput = false, writeWaveform = false, calcEchowidth = false, zipOutput = false, deterministic = false;
  bool verbose = false;
  std::optional<std::string> seed;
  unsigned workers = 0;
  std::string outputDir;
  run->add_option("survey", surveyPath, "Survey XML file")->required();
  run->add_flag("--lasOutput", lasOutput, "Write points as LAS 1.0 instead of ASCII");
  run->add_flag("--writeWaveform", writeWaveform, "Write the full waveform file");
  run->add_flag("--calcEchowidth", calcEchowidth, "Fit a Gaussian echo width to every return");
  run->add_flag("--zipOutput", zipOutput, "Compress ASCII outputs with gzip");
  run->add_option("--seed", seed, "Seed text for all random streams");
  run->add_option("--workers", workers, "Worker threads (default: all cores)");
  run->add_flag("--deterministic", deterministic, "Single worker, reproducible output");
  run->add_option("--output", outputDir, "Output directory (default: $VLS_OUTPUT_DIR or ./output)");
  run->add_flag("-v,--verbose", verbose, "Debug logging");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n\n" << app.help();
    return 2;
  }

  try {
    if (!unzipArgs.empty()) {
      vls::unzipFile(unzipArgs[0], unzipArgs[1]);
      return 0;
    }
    if (!run->parsed()) {
      std::cerr << app.help();
      return 2;
    }
    if (verbose) spdlog::set_level(spdlog::level::debug);

    vls::SurveyLoadOptions loadOptions;
    loadOptions.seedOverride = seed;
    vls::Survey survey = vls::parseSurvey(surveyPath, loadOptions);
    survey.outputs.lasOutput |= lasOutput;
    survey.outputs.writeWaveform |= writeWaveform;
    survey.outputs.calcEchowidth |= calcEchowidth;
    survey.outputs.zipOutput |= zipOutput;
    if (survey.outputs.lasOutput && survey.outputs.zipOutput) {
      spdlog::warn("--zipOutput compresses ASCII files only; the LAS file is written uncompressed");
    }

    vls::RunOptions runOptions;
    runOptions.workers = workers;
    runOptions.deterministic = deterministic;
    runOptions.outputDir = outputDir.empty() ? defaultOutputDir() : std::filesystem::path(outputDir);

    spdlog::info("survey '{}': {} legs, {} primitives, seed '{}'", survey.name, survey.legs.size(),
                 survey.scene->tree().primitives().size(), survey.seedText);
    const auto result = vls::runSurvey(survey, runOptions);
    const auto& r = result.report;
    fmt::print("pulses {}  points {}  waveforms {}  workers {}  wall {:.3f} s\n", r.pulses, r.points, r.waveforms,
               r.workers, r.wallSeconds);
    for (const auto& f : r.files) fmt::print("wrote {}\n", f.string());
    return 0;
  } catch (const std::exception& e) {
    spdlog::error("{}", e.what());
    return 1;
  }
}

#pragma once

#include <complex>
#include <filesystem>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "ratgmp/io.hpp"
#include "ratgmp/orf.hpp"

namespace ratgmp {

inline constexpr int kConfigSchemaVersion = 1;

struct CesaroConfig {
  io::json jacobi;         // {"a": [...], "b": [...]} or {"generator": ..., "length": L}
  std::string torus = "free";
  std::vector<int> n = {100, 1000, 10000};
  int horizon = 40;
};

struct PipelineConfig {
  int schema_version = kConfigSchemaVersion;
  io::json measure;                  // inline measure document
  io::json poles;                    // array, or "ahlfors"
  std::optional<FiniteGapSet> set;   // defaults to the measure's essential support
  int n_max = 20;
  PrecisionPolicy policy;
  int nodes = kDefaultNodesPerBand;
  std::vector<std::complex<double>> z_grid;
  std::vector<int> zero_ns;
  std::optional<CesaroConfig> cesaro;
  std::optional<io::json> magic_seed;  // {"p": [...], "q": [...]}
  std::vector<std::string> stages;
  std::filesystem::path output_dir = "out";
};

// Stage order used by the pipeline.
const std::vector<std::string>& all_stages();

// Parses a config document; relative measure_file paths resolve against base_dir.
PipelineConfig parse_config(const io::json& j, const std::filesystem::path& base_dir = ".");
PipelineConfig load_config(const std::filesystem::path& p);

struct PipelineOutcome {
  int exit_code = 0;
  io::json report;
};

// Runs the configured stages in order, writing artifacts to output_dir. A failing
// stage writes error.json with its name and error kind and stops the run.
PipelineOutcome run_pipeline(const PipelineConfig& cfg, std::ostream& log);

}  // namespace ratgmp

// Command line front end: each subcommand runs the pipeline restricted to one stage
// and the stages it depends on.
#include <CLI11.hpp>

#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include "ratgmp/errors.hpp"
#include "ratgmp/io.hpp"
#include "ratgmp/pipeline.hpp"

namespace {

using ratgmp::io::json;

struct Flags {
  std::string config;
  std::optional<int> n_max;
  std::optional<int> precision_bits;
  std::optional<std::string> out;
  std::optional<int> nodes;
};

bool poles_have_infinity(const json& j) {
  if (!j.contains("poles")) return true;
  const json& p = j.at("poles");
  if (p.is_string()) return true;
  for (const auto& x : p)
    if (x.is_string()) return true;
  return false;
}

bool has_measure(const json& j) { return j.contains("measure") || j.contains("measure_file"); }

std::vector<std::string> stages_for(const std::string& cmd, const json& j) {
  const bool gmp = has_measure(j) && poles_have_infinity(j);
  if (cmd == "orthonormalize") return {"orthonormalize"};
  if (cmd == "gmp") return {"orthonormalize", "gmp"};
  if (cmd == "potential") return {"potential"};
  if (cmd == "discriminant") {
    if (gmp) return {"orthonormalize", "gmp", "potential", "discriminant"};
    return {"potential", "discriminant"};
  }
  if (cmd == "regularity") {
    if (gmp) return {"orthonormalize", "gmp", "potential", "regularity"};
    return {"orthonormalize", "potential", "regularity"};
  }
  if (cmd == "cesaro") return {"cesaro"};
  return {};  // pipeline: config decides
}

void write_error(const std::filesystem::path& dir, const std::string& kind, int code, const std::string& msg) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) return;
  try {
    ratgmp::io::write_json(dir / "error.json", {{"stage", "config"}, {"kind", kind}, {"message", msg}, {"exit_code", code}});
  } catch (const std::exception&) {
  }
}

int run(const std::string& cmd, const Flags& f) {
  std::filesystem::path out = f.out.value_or("out");
  ratgmp::PipelineConfig cfg;
  try {
    json j = json::object();
    std::filesystem::path base = ".";
    if (!f.config.empty()) {
      const std::filesystem::path p = f.config;
      if (!std::filesystem::exists(p)) throw ratgmp::ConfigError("config file not found: " + p.string());
      j = ratgmp::io::read_json(p);
      if (p.has_parent_path()) base = p.parent_path();
    }
    if (!j.is_object()) throw ratgmp::ConfigError("config must be a JSON object");
    if (!f.out && j.contains("output_dir")) out = j.at("output_dir").get<std::string>();
    if (f.out) j["output_dir"] = *f.out;
    if (f.n_max) j["n_max"] = *f.n_max;
    if (f.nodes) j["nodes"] = *f.nodes;
    if (f.precision_bits) {
      json& p = j["precision"];
      if (!p.is_object()) p = json::object();
      p["start_bits"] = *f.precision_bits;
      if (p.value("max_bits", 0) < *f.precision_bits) p["max_bits"] = std::max(*f.precision_bits, 1024);
    }
    if (cmd != "pipeline") j["stages"] = stages_for(cmd, j);
    cfg = ratgmp::parse_config(j, base);
  } catch (const ratgmp::Error& e) {
    write_error(out, "config", ratgmp::exit_code(e.kind()), e.what());
    std::cerr << "config error: " << e.what() << "\n";
    return ratgmp::exit_code(e.kind());
  } catch (const std::exception& e) {
    const int code = ratgmp::exit_code(ratgmp::ErrorKind::Config);
    write_error(out, "config", code, e.what());
    std::cerr << "config error: " << e.what() << "\n";
    return code;
  }
  return ratgmp::run_pipeline(cfg, std::cerr).exit_code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Orthogonal rational functions, GMP matrices and finite gap regularity diagnostics"};
  app.require_subcommand(1);
  Flags flags;
  std::string chosen;
  for (const char* name : {"orthonormalize", "gmp", "potential", "discriminant", "regularity", "cesaro", "pipeline"}) {
    CLI::App* sub = app.add_subcommand(name);
    sub->add_option("--config", flags.config, "JSON config file");
    sub->add_option("--n-max", flags.n_max, "highest basis index")->check(CLI::PositiveNumber);
    sub->add_option("--precision-bits", flags.precision_bits, "starting precision in bits")->check(CLI::PositiveNumber);
    sub->add_option("--out", flags.out, "output directory");
    sub->add_option("--nodes", flags.nodes, "quadrature nodes per band")->check(CLI::PositiveNumber);
    sub->callback([&chosen, name] { chosen = name; });
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : ratgmp::exit_code(ratgmp::ErrorKind::Config);
  }
  return run(chosen, flags);
}

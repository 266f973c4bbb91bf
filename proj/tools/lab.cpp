// lab: run, list and validate experiment configs.
//
//   lab catalog [--json]
//   lab validate <config.json>
//   lab run <config.json> [--seed S] [--trials N] [--out file.csv] [--threads T]
//
// Exit codes: 0 ok, 1 runtime error, 2 invalid config, 3 runtime cap exceeded.

#include "noiselab/lab/catalog.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

namespace {

using namespace noiselab;

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot read config " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

struct Overrides {
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> trials;
  std::optional<std::string> out;
};

// Overrides go through the same validation as the file itself.
ExperimentConfig load(const std::string& path, const Overrides& o) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(read_file(path));
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  if (j.is_object()) {
    if (o.seed) j["seed"] = *o.seed;
    if (o.trials) j["trials"] = *o.trials;
    if (o.out) j["output"] = *o.out;
  }
  return parse_config(j);
}

void print_catalog(bool as_json) {
  if (as_json) {
    nlohmann::json a = nlohmann::json::array();
    for (const auto& d : catalog()) a.push_back(d.to_json());
    std::cout << a.dump(2) << '\n';
    return;
  }
  for (const auto& d : catalog()) {
    std::cout << d.id << "\n  " << d.anchor << "\n  trials: " << d.trials_meaning << " (default " << d.default_trials
              << ")\n";
    for (const auto& p : d.params)
      std::cout << "  " << p.name << " : " << param_type_name(p.type) << " = " << p.default_value.dump() << "  "
                << p.help << '\n';
    std::cout << "  columns:";
    for (const auto& c : d.columns) std::cout << ' ' << c;
    std::cout << "\n\n";
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"noise experiment lab"};
  app.require_subcommand(1);

  bool as_json = false;
  auto* cat = app.add_subcommand("catalog", "list experiments, parameters and defaults");
  cat->add_flag("--json", as_json, "print descriptors as JSON");

  std::string vpath;
  auto* val = app.add_subcommand("validate", "check a config without running it");
  val->add_option("config", vpath, "config JSON")->required();

  std::string rpath;
  Overrides ov;
  unsigned threads = 1;
  auto* run_cmd = app.add_subcommand("run", "run a config");
  run_cmd->add_option("config", rpath, "config JSON")->required();
  run_cmd->add_option("--seed", ov.seed, "override master seed");
  run_cmd->add_option("--trials", ov.trials, "override trial count")->check(CLI::PositiveNumber);
  run_cmd->add_option("--out", ov.out, "CSV output path (default $LAB_OUT_DIR or ./lab_out)");
  run_cmd->add_option("--threads", threads, "worker threads; output does not depend on this")->check(CLI::PositiveNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : static_cast<int>(ExitCode::invalid);
  }

  try {
    if (*cat) {
      print_catalog(as_json);
      return 0;
    }
    if (*val) {
      const auto c = load(vpath, {});
      std::cout << "ok " << c.experiment << " " << c.hash() << '\n' << c.to_json().dump(2) << '\n';
      return 0;
    }
    const auto c = load(rpath, ov);
    const RunRecord r = run(c, threads);
    std::cerr << c.experiment << ": " << r.status << ", " << r.rows << " rows -> " << r.csv_path << '\n';
    if (!r.error.empty()) std::cerr << "error: " << r.error << '\n';
    std::cout << r.summary_path << '\n';
    return static_cast<int>(r.exit);
  } catch (const ConfigError& e) {
    std::cerr << "invalid config: " << e.what() << '\n';
    return static_cast<int>(ExitCode::invalid);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return static_cast<int>(ExitCode::error);
  }
}

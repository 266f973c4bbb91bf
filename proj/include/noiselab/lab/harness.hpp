#pragma once

// Experiment configs, descriptors and the run loop.
//
// Config file:
//   {"experiment": "haar-height", "seed": 7, "trials": 200,
//    "output": "out/haar.csv", "time_limit_s": 600, "params": {"n": 6}}
// Only "experiment" is required. Unknown fields are rejected at both levels.
//
// A run writes the CSV incrementally and, at the end, a summary JSON next to
// it (<stem>.summary.json, schema kSummarySchema). Timestamps live only in the
// summary so CSV bodies are byte-stable for a fixed config.

#include "noiselab/core/csv.hpp"
#include "noiselab/core/random.hpp"
#include "noiselab/lab/parallel.hpp"

#include <json.hpp>

#include <chrono>
#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>

namespace noiselab {

inline constexpr const char* kToolVersion = "0.1.0";
inline constexpr const char* kSummarySchema = "noiselab.run/1";
inline constexpr double kDefaultTimeLimit = 600.0;

enum class ExitCode { ok = 0, error = 1, invalid = 2, runtime_cap = 3 };

struct RuntimeCapExceeded : std::runtime_error {
  using std::runtime_error::runtime_error;
};

enum class ParamType { integer, real, string, int_list, real_list, string_list };

inline const char* param_type_name(ParamType t) {
  switch (t) {
    case ParamType::integer: return "int";
    case ParamType::real: return "real";
    case ParamType::string: return "string";
    case ParamType::int_list: return "int[]";
    case ParamType::real_list: return "real[]";
    case ParamType::string_list: return "string[]";
  }
  return "?";
}

struct ParamSpec {
  std::string name;
  ParamType type;
  nlohmann::json default_value;
  std::string help;
};

inline bool param_matches(ParamType t, const nlohmann::json& v) {
  auto all = [&](auto pred) {
    if (!v.is_array() || v.empty()) return false;
    for (const auto& x : v)
      if (!pred(x)) return false;
    return true;
  };
  switch (t) {
    case ParamType::integer: return v.is_number_integer();
    case ParamType::real: return v.is_number();
    case ParamType::string: return v.is_string();
    case ParamType::int_list: return all([](const auto& x) { return x.is_number_integer(); });
    case ParamType::real_list: return all([](const auto& x) { return x.is_number(); });
    case ParamType::string_list: return all([](const auto& x) { return x.is_string(); });
  }
  return false;
}

class RunContext;

struct ExperimentDescriptor {
  std::string id;
  std::string anchor;  // the claim the experiment reproduces
  std::string description;
  std::size_t default_trials = 1;
  std::string trials_meaning;
  std::vector<ParamSpec> params;
  std::vector<std::string> columns;  // frozen CSV column order
  std::function<void(const nlohmann::json&)> check;  // semantic checks on resolved params
  std::function<nlohmann::json(RunContext&)> run;     // returns summary statistics

  nlohmann::json defaults() const {
    nlohmann::json d = nlohmann::json::object();
    for (const auto& p : params) d[p.name] = p.default_value;
    return d;
  }

  nlohmann::json to_json() const {
    nlohmann::json ps = nlohmann::json::array();
    for (const auto& p : params)
      ps.push_back({{"name", p.name}, {"type", param_type_name(p.type)}, {"default", p.default_value}, {"help", p.help}});
    return {{"id", id}, {"anchor", anchor}, {"description", description}, {"default_trials", default_trials},
            {"trials", trials_meaning}, {"params", ps}, {"columns", columns}};
  }
};

struct ExperimentConfig {
  std::string experiment;
  std::uint64_t seed = 1;
  std::size_t trials = 0;
  std::optional<std::string> output;
  double time_limit_s = kDefaultTimeLimit;
  nlohmann::json params = nlohmann::json::object();  // fully resolved after validation

  // The numeric identity of a run: output path and limits do not enter.
  nlohmann::json identity() const {
    return {{"experiment", experiment}, {"seed", seed}, {"trials", trials}, {"params", params}};
  }

  std::string hash() const {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(fnv1a64(identity().dump())));
    return buf;
  }

  nlohmann::json to_json() const {
    nlohmann::json j = identity();
    j["time_limit_s"] = time_limit_s;
    if (output) j["output"] = *output;
    return j;
  }
};

struct ConfigError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

inline void config_require(bool ok, const std::string& msg) {
  if (!ok) throw ConfigError(msg);
}

// Fills defaults and type-checks params against the descriptor.
inline void resolve_params(const ExperimentDescriptor& d, ExperimentConfig& c, const nlohmann::json& given) {
  config_require(given.is_object(), "params must be an object");
  for (const auto& [key, _] : given.items()) {
    const bool known = std::any_of(d.params.begin(), d.params.end(), [&](const ParamSpec& p) { return p.name == key; });
    config_require(known, "unknown parameter for " + d.id + ": " + key);
  }
  c.params = nlohmann::json::object();
  for (const auto& p : d.params) {
    const nlohmann::json& v = given.contains(p.name) ? given.at(p.name) : p.default_value;
    config_require(param_matches(p.type, v),
                   "parameter " + p.name + " must be of type " + param_type_name(p.type) + ", got " + v.dump());
    c.params[p.name] = v;
  }
  if (c.trials == 0) c.trials = d.default_trials;
  try {
    if (d.check) d.check(c.params);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(d.id + ": " + e.what());
  }
}

// Experiment lookup is passed in so the harness does not depend on the catalog.
using CatalogLookup = std::function<const ExperimentDescriptor*(const std::string&)>;

inline ExperimentConfig parse_config(const nlohmann::json& j, const CatalogLookup& find) {
  config_require(j.is_object(), "config must be a JSON object");
  for (const auto& [key, _] : j.items()) {
    config_require(key == "experiment" || key == "seed" || key == "trials" || key == "output" || key == "params" ||
                       key == "time_limit_s",
                   "unknown config field: " + key);
  }
  config_require(j.contains("experiment"), "missing required field: experiment");
  config_require(j.at("experiment").is_string(), "experiment must be a string");
  ExperimentConfig c;
  c.experiment = j.at("experiment").get<std::string>();
  const ExperimentDescriptor* d = find(c.experiment);
  config_require(d != nullptr, "unknown experiment: " + c.experiment);
  if (j.contains("seed")) {
    config_require(j.at("seed").is_number_unsigned() || (j.at("seed").is_number_integer() && j.at("seed").get<std::int64_t>() >= 0),
                   "seed must be a non-negative integer");
    c.seed = j.at("seed").get<std::uint64_t>();
  }
  if (j.contains("trials")) {
    config_require(j.at("trials").is_number_integer() && j.at("trials").get<std::int64_t>() > 0,
                   "trials must be a positive integer");
    c.trials = j.at("trials").get<std::size_t>();
  }
  if (j.contains("output")) {
    config_require(j.at("output").is_string() && !j.at("output").get<std::string>().empty(),
                   "output must be a non-empty string");
    c.output = j.at("output").get<std::string>();
  }
  if (j.contains("time_limit_s")) {
    config_require(j.at("time_limit_s").is_number() && j.at("time_limit_s").get<double>() > 0,
                   "time_limit_s must be positive");
    c.time_limit_s = j.at("time_limit_s").get<double>();
  }
  resolve_params(*d, c, j.value("params", nlohmann::json::object()));
  return c;
}

inline ExperimentConfig parse_config_text(const std::string& text, const CatalogLookup& find) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  return parse_config(j, find);
}

class RunContext {
 public:
  using Clock = std::chrono::steady_clock;

  RunContext(const ExperimentConfig& c, CsvWriter& out, unsigned threads)
      : config_(c), out_(&out), threads_(std::max(1U, threads)),
        deadline_(Clock::now() + std::chrono::duration_cast<Clock::duration>(std::chrono::duration<double>(c.time_limit_s))) {}

  const nlohmann::json& params() const { return config_.params; }
  std::size_t trials() const { return config_.trials; }
  unsigned threads() const { return threads_; }

  template <typename T>
  T param(const std::string& name) const {
    return config_.params.at(name).get<T>();
  }

  // Seed for one call site: (master seed, experiment, labels...).
  template <typename... Labels>
  std::uint64_t seed_for(const Labels&... labels) const {
    return derive_seed(config_.seed, std::string_view(config_.experiment), labels...);
  }

  template <typename... Labels>
  Rng rng(const Labels&... labels) const {
    return Rng(seed_for(labels...));
  }

  void check_time() const {
    if (Clock::now() > deadline_) throw RuntimeCapExceeded("runtime cap of " + fmt_real(config_.time_limit_s) + " s exceeded");
  }

  void write(const CsvRow& row) {
    check_time();
    out_->write(row);
  }

  std::size_t rows() const { return out_->rows(); }

  // parallel_map with the deadline checked before every item.
  template <typename R, typename Fn>
  std::vector<R> map(std::size_t count, Fn&& fn) const {
    return parallel_map<R>(count, threads_, [&](std::size_t i) {
      check_time();
      return fn(i);
    });
  }

 private:
  const ExperimentConfig& config_;
  CsvWriter* out_;
  unsigned threads_;
  Clock::time_point deadline_;
};

struct RunRecord {
  std::string config_hash;
  std::string tool_version = kToolVersion;
  std::string started_at;
  std::string finished_at;
  std::string csv_path;
  std::string summary_path;
  std::size_t rows = 0;
  bool complete = false;
  std::string status;
  std::string error;
  nlohmann::json summary;
  ExitCode exit = ExitCode::ok;
};

inline std::string utc_timestamp(std::chrono::system_clock::time_point t = std::chrono::system_clock::now()) {
  const std::time_t tt = std::chrono::system_clock::to_time_t(t);
  std::tm tm{};
  gmtime_r(&tt, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

inline constexpr const char* kOutDirEnv = "LAB_OUT_DIR";

inline std::filesystem::path default_output_dir() {
  const char* env = std::getenv(kOutDirEnv);
  return env && *env ? std::filesystem::path(env) : std::filesystem::path("lab_out");
}

inline std::filesystem::path csv_path_for(const ExperimentConfig& c) {
  if (c.output) return *c.output;
  return default_output_dir() / (c.experiment + "-" + c.hash().substr(0, 8) + ".csv");
}

inline std::filesystem::path summary_path_for(const std::filesystem::path& csv) {
  std::filesystem::path p = csv;
  return p.replace_extension(".summary.json");
}

inline nlohmann::json record_to_json(const RunRecord& r, const ExperimentConfig& c) {
  return {{"schema", kSummarySchema},
          {"tool_version", r.tool_version},
          {"config_hash", r.config_hash},
          {"config", c.to_json()},
          {"started_at", r.started_at},
          {"finished_at", r.finished_at},
          {"csv", r.csv_path},
          {"rows", r.rows},
          {"complete", r.complete},
          {"status", r.status},
          {"error", r.error},
          {"summary", r.summary}};
}

// Runs one validated config. Never throws for experiment failures: the
// outcome is in RunRecord::exit and the summary file.
inline RunRecord execute(const ExperimentDescriptor& d, const ExperimentConfig& c, unsigned threads) {
  RunRecord r;
  r.config_hash = c.hash();
  r.started_at = utc_timestamp();
  const auto csv = csv_path_for(c);
  if (csv.has_parent_path()) std::filesystem::create_directories(csv.parent_path());
  r.csv_path = csv.string();
  r.summary_path = summary_path_for(csv).string();
  {
    std::ofstream os(csv, std::ios::binary | std::ios::trunc);
    if (!os) throw std::runtime_error("cannot open output " + r.csv_path);
    CsvWriter w(os, d.columns);
    RunContext ctx(c, w, threads);
    try {
      r.summary = d.run(ctx);
      r.complete = true;
      r.status = "ok";
    } catch (const RuntimeCapExceeded& e) {
      r.status = "runtime_cap_exceeded";
      r.error = e.what();
      r.exit = ExitCode::runtime_cap;
    } catch (const std::exception& e) {
      r.status = "error";
      r.error = e.what();
      r.exit = ExitCode::error;
    }
    r.rows = w.rows();
  }
  r.finished_at = utc_timestamp();
  std::ofstream js(r.summary_path, std::ios::binary | std::ios::trunc);
  js << record_to_json(r, c).dump(2) << '\n';
  return r;
}

}  // namespace noiselab

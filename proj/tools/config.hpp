#pragma once

#include <cstdint>
#include <nlohmann/json.hpp>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace ergomean::cli {

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

enum class Command { SpaceCheck, Mean, Karcher, Ergodic, Holbrook, Mollify };

std::string command_name(Command c);
std::optional<Command> parse_command(const std::string& name);

struct SpaceSpec {
  enum class Kind { Euclid, Spd, Hyperboloid, Broken };
  Kind kind = Kind::Euclid;
  int dim = 1;
};
std::optional<SpaceSpec> parse_space_spec(const std::string& text);
std::string to_string(const SpaceSpec& s);

struct SystemSpec {
  enum class Kind { Torus, Cyclic };
  Kind kind = Kind::Torus;
  int dim = 1;  // torus dimension or cyclic order
  std::vector<double> alpha;
  bool alpha_is_golden = false;
  std::int64_t generator = 1;
  bool assume_ergodic = false;
};
std::optional<SystemSpec> parse_system_spec(const std::string& text);
std::string to_string(const SystemSpec& s);

struct FunctionSpec {
  std::string name;  // sin | identity | exp-sin-diag | step-spd | step-euclid
  std::vector<double> diag = {1.0, 0.5, -0.5};
  double cut = 0.37;
  double jump = 1.0;
  double freq = 1.0;
};

struct AssertSpec {
  std::optional<double> final_delta_max;
  std::optional<double> final_delta_min;
  std::optional<double> rel_diameter_max;  // vs exact atom diameter (holbrook)
  std::optional<double> decay_ratio_max;   // final vs checkpoint n = 100
  int allow_failures = 0;
  bool expect_violations = false;  // negative-control space checks
  std::optional<double> slack_min;
  std::optional<double> l1_final_max;
  bool strict_decrease = false;
  std::optional<double> stability_epsilon;
  double stability_eta = 0.1;
};

struct ExperimentConfig {
  Command command = Command::SpaceCheck;
  SpaceSpec space;
  std::optional<SystemSpec> system;
  std::optional<FunctionSpec> function;
  std::int64_t n_max = 1000;
  std::int64_t samples = 1000;
  std::int64_t atoms = 3;
  std::int64_t quadrature_n = 10000;
  std::int64_t k = 10;
  std::int64_t m = 10;
  double tol = -1.0;  // < 0: space default
  double cond_cap = 1e4;
  std::uint64_t seed = 1;
  int repeats = 1;
  std::vector<std::uint64_t> seeds;  // explicit list; overrides seed/repeats
  int starts = 0;  // > 0: Haar-random starts; otherwise the explicit start
  std::vector<double> start;
  std::vector<double> eta_schedule = {0.2, 0.1, 0.05, 0.01};
  std::int64_t samples_per_eval = 64;
  std::string reference = "auto";  // "auto" or "explicit" (+ reference_values)
  std::vector<double> reference_values;
  bool reverse_control = false;
  AssertSpec asserts;
  std::string csv_path;   // empty: derived from the command name
  std::string json_path;  // empty: derived from the command name
};

// Throws ConfigError on malformed JSON values; unknown keys are diagnosed by
// validate(), not here.
ExperimentConfig config_from_json(const nlohmann::json& j);
ExperimentConfig load_config_file(const std::string& path);

nlohmann::json config_to_json(const ExperimentConfig& cfg);

// Diagnostics naming the offending fields; empty iff the config is runnable.
// Pure: never mutates state.
std::vector<std::string> validate(const ExperimentConfig& cfg);

// The seed list a command iterates: the explicit `seeds` when given,
// otherwise seed, seed+1, ..., seed+repeats-1.
std::vector<std::uint64_t> effective_seeds(const ExperimentConfig& cfg);

}  // namespace ergomean::cli

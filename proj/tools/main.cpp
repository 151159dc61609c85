#include <CLI11.hpp>
#include <cstdlib>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "config.hpp"
#include "ergomean/version.hpp"
#include "runner.hpp"

namespace {

using ergomean::cli::Command;
using ergomean::cli::ConfigError;
using ergomean::cli::ExperimentConfig;

std::vector<double> parse_double_list(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    out.push_back(std::stod(item));
  }
  return out;
}

// Raw flag values; only flags the user actually passed override the config
// file, so the merge order is defaults < --config < explicit flags.
struct Flags {
  std::string config_path;
  bool validate_only = false;
  std::string space;
  std::string system;
  std::string alpha;
  std::int64_t generator = 1;
  bool assume_ergodic = false;
  std::string function;
  std::string fn_diag;
  double fn_cut = 0.37;
  double fn_jump = 1.0;
  double fn_freq = 1.0;
  std::int64_t n_max = 1000;
  std::int64_t samples = 1000;
  std::int64_t atoms = 3;
  std::int64_t quadrature = 10000;
  std::int64_t k = 10;
  std::int64_t m = 10;
  double tol = -1.0;
  double cond_cap = 1e4;
  std::uint64_t seed = 1;
  int repeats = 1;
  int starts = 0;
  std::string start;
  std::string eta_schedule;
  std::int64_t samples_per_eval = 64;
  bool reverse_control = false;
  double assert_final_max = 0.0;
  double assert_final_min = 0.0;
  double assert_rel_diameter_max = 0.0;
  double assert_decay_ratio = 0.0;
  int allow_failures = 0;
  bool expect_violations = false;
  double slack_min = -1e-6;
  double assert_l1_max = 0.0;
  bool assert_strict_decrease = false;
  double stability_epsilon = 0.0;
  double stability_eta = 0.1;
  std::string csv;
  std::string json;
};

void add_common_options(CLI::App* sub, Flags& f) {
  sub->add_option("--config", f.config_path, "JSON config file; flags override its fields");
  sub->add_flag("--validate-only", f.validate_only, "report config diagnostics and exit");
  sub->add_option("--space", f.space, "space spec: euclid:D | spd:N | hyperboloid:D | broken:D");
  sub->add_option("--system", f.system, "system spec: torus:D | cyclic:D");
  sub->add_option("--alpha", f.alpha, "torus rotation: 'golden' or comma-separated values");
  sub->add_option("--generator", f.generator, "cyclic group generator");
  sub->add_flag("--assume-ergodic", f.assume_ergodic,
                "assert rational independence of the torus rotation");
  sub->add_option("--function", f.function,
                  "orbit function: sin | identity | step-euclid | exp-sin-diag | step-spd");
  sub->add_option("--fn-diag", f.fn_diag, "diagonal for exp-sin-diag (comma-separated)");
  sub->add_option("--fn-cut", f.fn_cut, "cut location for step functions");
  sub->add_option("--fn-jump", f.fn_jump, "jump size for step functions");
  sub->add_option("--fn-freq", f.fn_freq, "frequency for the sin function");
  sub->add_option("--n-max", f.n_max, "number of orbit/sequence steps");
  sub->add_option("--samples", f.samples, "number of random samples");
  sub->add_option("--atoms", f.atoms, "atoms per measure / cyclic period");
  sub->add_option("--quadrature", f.quadrature, "quadrature grid size");
  sub->add_option("--k", f.k, "prefix length bound for the lemma checks");
  sub->add_option("--m", f.m, "window length bound for the lemma checks");
  sub->add_option("--tol", f.tol, "barycenter tolerance (omit for the space default)");
  sub->add_option("--cond-cap", f.cond_cap, "condition-number cap for SPD sampling");
  sub->add_option("--seed", f.seed, "base seed");
  sub->add_option("--repeats", f.repeats, "number of seeded repetitions (seed, seed+1, ...)");
  sub->add_option("--starts", f.starts, "number of Haar-random starting points");
  sub->add_option("--start", f.start, "explicit start (comma-separated coordinates)");
  sub->add_option("--eta-schedule", f.eta_schedule, "mollifier radii (comma-separated)");
  sub->add_option("--samples-per-eval", f.samples_per_eval,
                  "neighborhood grid size per mollifier evaluation");
  sub->add_flag("--reverse-control", f.reverse_control,
                "compare against the reversed-order inductive mean");
  sub->add_option("--assert-final-max", f.assert_final_max, "require final delta <= this");
  sub->add_option("--assert-final-min", f.assert_final_min, "require final delta >= this");
  sub->add_option("--assert-rel-diameter-max", f.assert_rel_diameter_max,
                  "require final delta <= this times the atom diameter");
  sub->add_option("--assert-decay-ratio", f.assert_decay_ratio,
                  "require final delta < this times the delta at n = 100");
  sub->add_option("--allow-failures", f.allow_failures, "tolerated over-threshold runs");
  sub->add_flag("--expect-violations", f.expect_violations,
                "negative control: succeed only if violations occur");
  sub->add_option("--slack-min", f.slack_min, "violation floor for checker slacks");
  sub->add_option("--assert-l1-max", f.assert_l1_max, "require final l1 estimate <= this");
  sub->add_flag("--assert-strict-decrease", f.assert_strict_decrease,
                "require the l1 estimates to strictly decrease along the schedule");
  sub->add_option("--stability-epsilon", f.stability_epsilon,
                  "uniform stability tolerance for the mollifier check");
  sub->add_option("--stability-eta", f.stability_eta, "eta used by the stability check");
  sub->add_option("--csv", f.csv, "CSV output filename (relative to --out-dir)");
  sub->add_option("--json", f.json, "metadata JSON filename (relative to --out-dir)");
}

ExperimentConfig build_config(CLI::App* sub, const Flags& f,
                              std::optional<Command> command) {
  ExperimentConfig cfg;
  if (!f.config_path.empty()) cfg = ergomean::cli::load_config_file(f.config_path);
  if (command) cfg.command = *command;

  const auto passed = [&](const std::string& name) { return sub->count(name) > 0; };

  if (passed("--space")) {
    const auto spec = ergomean::cli::parse_space_spec(f.space);
    if (!spec) throw ConfigError("unparseable space '" + f.space + "'");
    cfg.space = *spec;
  }
  if (passed("--system")) {
    const auto spec = ergomean::cli::parse_system_spec(f.system);
    if (!spec) throw ConfigError("unparseable system '" + f.system + "'");
    if (!cfg.system) {
      cfg.system = *spec;
    } else {
      cfg.system->kind = spec->kind;
      cfg.system->dim = spec->dim;
    }
  }
  if (passed("--alpha")) {
    if (!cfg.system) cfg.system = ergomean::cli::SystemSpec{};
    if (f.alpha == "golden") {
      cfg.system->alpha_is_golden = true;
      cfg.system->alpha.clear();
      cfg.system->assume_ergodic = true;
    } else {
      cfg.system->alpha_is_golden = false;
      cfg.system->alpha = parse_double_list(f.alpha);
    }
  }
  if (passed("--generator")) {
    if (!cfg.system) cfg.system = ergomean::cli::SystemSpec{};
    cfg.system->generator = f.generator;
  }
  if (passed("--assume-ergodic")) {
    if (!cfg.system) cfg.system = ergomean::cli::SystemSpec{};
    cfg.system->assume_ergodic = true;
  }
  if (passed("--function")) {
    if (!cfg.function) cfg.function = ergomean::cli::FunctionSpec{};
    cfg.function->name = f.function;
  }
  if (passed("--fn-diag")) {
    if (!cfg.function) cfg.function = ergomean::cli::FunctionSpec{};
    cfg.function->diag = parse_double_list(f.fn_diag);
  }
  if (passed("--fn-cut")) {
    if (!cfg.function) cfg.function = ergomean::cli::FunctionSpec{};
    cfg.function->cut = f.fn_cut;
  }
  if (passed("--fn-jump")) {
    if (!cfg.function) cfg.function = ergomean::cli::FunctionSpec{};
    cfg.function->jump = f.fn_jump;
  }
  if (passed("--fn-freq")) {
    if (!cfg.function) cfg.function = ergomean::cli::FunctionSpec{};
    cfg.function->freq = f.fn_freq;
  }
  if (passed("--n-max")) cfg.n_max = f.n_max;
  if (passed("--samples")) cfg.samples = f.samples;
  if (passed("--atoms")) cfg.atoms = f.atoms;
  if (passed("--quadrature")) cfg.quadrature_n = f.quadrature;
  if (passed("--k")) cfg.k = f.k;
  if (passed("--m")) cfg.m = f.m;
  if (passed("--tol")) cfg.tol = f.tol;
  if (passed("--cond-cap")) cfg.cond_cap = f.cond_cap;
  if (passed("--seed")) cfg.seed = f.seed;
  if (passed("--repeats")) cfg.repeats = f.repeats;
  if (passed("--starts")) cfg.starts = f.starts;
  if (passed("--start")) cfg.start = parse_double_list(f.start);
  if (passed("--eta-schedule")) cfg.eta_schedule = parse_double_list(f.eta_schedule);
  if (passed("--samples-per-eval")) cfg.samples_per_eval = f.samples_per_eval;
  if (passed("--reverse-control")) cfg.reverse_control = true;
  if (passed("--assert-final-max")) cfg.asserts.final_delta_max = f.assert_final_max;
  if (passed("--assert-final-min")) cfg.asserts.final_delta_min = f.assert_final_min;
  if (passed("--assert-rel-diameter-max")) {
    cfg.asserts.rel_diameter_max = f.assert_rel_diameter_max;
  }
  if (passed("--assert-decay-ratio")) cfg.asserts.decay_ratio_max = f.assert_decay_ratio;
  if (passed("--allow-failures")) cfg.asserts.allow_failures = f.allow_failures;
  if (passed("--expect-violations")) cfg.asserts.expect_violations = true;
  if (passed("--slack-min")) cfg.asserts.slack_min = f.slack_min;
  if (passed("--assert-l1-max")) cfg.asserts.l1_final_max = f.assert_l1_max;
  if (passed("--assert-strict-decrease")) cfg.asserts.strict_decrease = true;
  if (passed("--stability-epsilon")) cfg.asserts.stability_epsilon = f.stability_epsilon;
  if (passed("--stability-eta")) cfg.asserts.stability_eta = f.stability_eta;
  if (passed("--csv")) cfg.csv_path = f.csv;
  if (passed("--json")) cfg.json_path = f.json;
  return cfg;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"barycenters and inductive means in CAT(0) spaces"};
  app.set_version_flag("--version", std::string(ergomean::kVersion));
  app.require_subcommand(1);

  std::string out_dir = "out";
  app.add_option("--out-dir", out_dir, "output directory for CSV/JSON artifacts")
      ->envname("ERGOMEAN_OUT_DIR");

  struct SubEntry {
    CLI::App* sub;
    std::optional<Command> command;
    Flags flags;
  };
  std::vector<SubEntry> subs;
  subs.reserve(8);  // CLI11 binds to Flags addresses; no reallocation allowed
  const auto add_sub = [&](const std::string& name, const std::string& desc,
                           std::optional<Command> cmd) {
    auto* sub = app.add_subcommand(name, desc);
    sub->fallthrough();
    subs.push_back({sub, cmd, Flags{}});
    add_common_options(sub, subs.back().flags);
  };

  add_sub("space-check", "verify the metric-space inequalities on random samples",
          Command::SpaceCheck);
  add_sub("mean", "inductive mean of a seeded random sequence vs its reference",
          Command::Mean);
  add_sub("karcher", "barycenter solves plus the inequality suite around them",
          Command::Karcher);
  add_sub("ergodic", "inductive means along torus orbits vs the pushforward barycenter",
          Command::Ergodic);
  add_sub("holbrook", "periodic SPD orbit converging to the joint mean", Command::Holbrook);
  add_sub("mollify", "neighborhood averaging of an orbit function over an eta schedule",
          Command::Mollify);
  add_sub("run", "run a config file (the command comes from its 'command' field)",
          std::nullopt);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 2;
  }

  for (auto& entry : subs) {
    if (!entry.sub->parsed()) continue;
    try {
      if (!entry.command && entry.flags.config_path.empty()) {
        std::cerr << "config error: 'run' needs --config\n";
        return 2;
      }
      const ExperimentConfig cfg = build_config(entry.sub, entry.flags, entry.command);
      if (entry.flags.validate_only) {
        const auto diagnostics = ergomean::cli::validate(cfg);
        for (const auto& d : diagnostics) std::cout << d << "\n";
        return diagnostics.empty() ? 0 : 2;
      }
      return ergomean::cli::run_experiment(cfg, out_dir, std::cout, std::cerr);
    } catch (const ConfigError& e) {
      std::cerr << "config error: " << e.what() << "\n";
      return 2;
    }
  }
  std::cerr << "usage error: no subcommand\n";
  return 2;
}

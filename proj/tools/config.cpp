#include "config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

namespace ergomean::cli {

namespace {

std::optional<int> parse_int_suffix(const std::string& text, const std::string& prefix) {
  if (text.rfind(prefix + ":", 0) != 0) return std::nullopt;
  try {
    std::size_t used = 0;
    const std::string tail = text.substr(prefix.size() + 1);
    const int v = std::stoi(tail, &used);
    if (used != tail.size() || v < 1) return std::nullopt;
    return v;
  } catch (const std::exception&) {
    return std::nullopt;
  }
}

template <typename T>
T get_number(const nlohmann::json& j, const std::string& key, T fallback) {
  if (!j.contains(key)) return fallback;
  if (!j.at(key).is_number()) throw ConfigError("config field '" + key + "' must be a number");
  return j.at(key).get<T>();
}

bool get_bool(const nlohmann::json& j, const std::string& key, bool fallback) {
  if (!j.contains(key)) return fallback;
  if (!j.at(key).is_boolean()) throw ConfigError("config field '" + key + "' must be a boolean");
  return j.at(key).get<bool>();
}

std::vector<double> get_double_array(const nlohmann::json& j, const std::string& key,
                                     std::vector<double> fallback) {
  if (!j.contains(key)) return fallback;
  if (!j.at(key).is_array()) throw ConfigError("config field '" + key + "' must be an array");
  std::vector<double> out;
  for (const auto& v : j.at(key)) {
    if (!v.is_number()) throw ConfigError("config field '" + key + "' must hold numbers");
    out.push_back(v.get<double>());
  }
  return out;
}

}  // namespace

std::string command_name(Command c) {
  switch (c) {
    case Command::SpaceCheck: return "space-check";
    case Command::Mean: return "mean";
    case Command::Karcher: return "karcher";
    case Command::Ergodic: return "ergodic";
    case Command::Holbrook: return "holbrook";
    case Command::Mollify: return "mollify";
  }
  return "unknown";
}

std::optional<Command> parse_command(const std::string& name) {
  if (name == "space-check") return Command::SpaceCheck;
  if (name == "mean") return Command::Mean;
  if (name == "karcher") return Command::Karcher;
  if (name == "ergodic") return Command::Ergodic;
  if (name == "holbrook") return Command::Holbrook;
  if (name == "mollify") return Command::Mollify;
  return std::nullopt;
}

std::optional<SpaceSpec> parse_space_spec(const std::string& text) {
  for (const auto& [prefix, kind] :
       {std::pair{std::string("euclid"), SpaceSpec::Kind::Euclid},
        std::pair{std::string("spd"), SpaceSpec::Kind::Spd},
        std::pair{std::string("hyperboloid"), SpaceSpec::Kind::Hyperboloid},
        std::pair{std::string("broken"), SpaceSpec::Kind::Broken}}) {
    if (auto dim = parse_int_suffix(text, prefix)) return SpaceSpec{kind, *dim};
  }
  return std::nullopt;
}

std::string to_string(const SpaceSpec& s) {
  switch (s.kind) {
    case SpaceSpec::Kind::Euclid: return "euclid:" + std::to_string(s.dim);
    case SpaceSpec::Kind::Spd: return "spd:" + std::to_string(s.dim);
    case SpaceSpec::Kind::Hyperboloid: return "hyperboloid:" + std::to_string(s.dim);
    case SpaceSpec::Kind::Broken: return "broken:" + std::to_string(s.dim);
  }
  return "unknown";
}

std::optional<SystemSpec> parse_system_spec(const std::string& text) {
  if (auto d = parse_int_suffix(text, "torus")) {
    SystemSpec s;
    s.kind = SystemSpec::Kind::Torus;
    s.dim = *d;
    return s;
  }
  if (auto d = parse_int_suffix(text, "cyclic")) {
    SystemSpec s;
    s.kind = SystemSpec::Kind::Cyclic;
    s.dim = *d;
    return s;
  }
  return std::nullopt;
}

std::string to_string(const SystemSpec& s) {
  return (s.kind == SystemSpec::Kind::Torus ? "torus:" : "cyclic:") + std::to_string(s.dim);
}

ExperimentConfig config_from_json(const nlohmann::json& j) {
  ExperimentConfig cfg;
  if (!j.is_object()) throw ConfigError("config root must be a JSON object");

  if (j.contains("command")) {
    const auto name = j.at("command").get<std::string>();
    const auto cmd = parse_command(name);
    if (!cmd) throw ConfigError("unknown command '" + name + "'");
    cfg.command = *cmd;
  }
  if (j.contains("space")) {
    const auto text = j.at("space").get<std::string>();
    const auto spec = parse_space_spec(text);
    if (!spec) throw ConfigError("unparseable space '" + text + "'");
    cfg.space = *spec;
  }
  if (j.contains("system")) {
    const auto& js = j.at("system");
    if (!js.is_object()) throw ConfigError("config field 'system' must be an object");
    SystemSpec sys;
    const auto type = js.value("type", std::string("torus"));
    if (type == "torus") {
      sys.kind = SystemSpec::Kind::Torus;
    } else if (type == "cyclic") {
      sys.kind = SystemSpec::Kind::Cyclic;
    } else {
      throw ConfigError("unknown system type '" + type + "'");
    }
    sys.dim = get_number<int>(js, "d", 1);
    if (js.contains("alpha")) {
      if (js.at("alpha").is_string()) {
        if (js.at("alpha").get<std::string>() != "golden") {
          throw ConfigError("system.alpha string must be 'golden'");
        }
        sys.alpha_is_golden = true;
        sys.assume_ergodic = true;
      } else {
        sys.alpha = get_double_array(js, "alpha", {});
      }
    }
    sys.generator = get_number<std::int64_t>(js, "generator", 1);
    sys.assume_ergodic = get_bool(js, "assume_ergodic", sys.assume_ergodic);
    cfg.system = sys;
  }
  if (j.contains("function")) {
    const auto& jf = j.at("function");
    if (!jf.is_object()) throw ConfigError("config field 'function' must be an object");
    FunctionSpec fn;
    fn.name = jf.value("name", std::string(""));
    fn.diag = get_double_array(jf, "diag", fn.diag);
    fn.cut = get_number<double>(jf, "cut", fn.cut);
    fn.jump = get_number<double>(jf, "jump", fn.jump);
    fn.freq = get_number<double>(jf, "freq", fn.freq);
    cfg.function = fn;
  }

  cfg.n_max = get_number<std::int64_t>(j, "n_max", cfg.n_max);
  cfg.samples = get_number<std::int64_t>(j, "samples", cfg.samples);
  cfg.atoms = get_number<std::int64_t>(j, "atoms", cfg.atoms);
  cfg.quadrature_n = get_number<std::int64_t>(j, "quadrature_n", cfg.quadrature_n);
  cfg.k = get_number<std::int64_t>(j, "k", cfg.k);
  cfg.m = get_number<std::int64_t>(j, "m", cfg.m);
  cfg.tol = get_number<double>(j, "tol", cfg.tol);
  cfg.cond_cap = get_number<double>(j, "cond_cap", cfg.cond_cap);
  cfg.seed = get_number<std::uint64_t>(j, "seed", cfg.seed);
  cfg.repeats = get_number<int>(j, "repeats", cfg.repeats);
  if (j.contains("seeds")) {
    if (!j.at("seeds").is_array()) throw ConfigError("config field 'seeds' must be an array");
    for (const auto& v : j.at("seeds")) {
      if (!v.is_number()) throw ConfigError("config field 'seeds' must hold numbers");
      cfg.seeds.push_back(v.get<std::uint64_t>());
    }
  }
  cfg.starts = get_number<int>(j, "starts", cfg.starts);
  cfg.start = get_double_array(j, "start", cfg.start);
  cfg.eta_schedule = get_double_array(j, "eta_schedule", cfg.eta_schedule);
  cfg.samples_per_eval = get_number<std::int64_t>(j, "samples_per_eval", cfg.samples_per_eval);
  if (j.contains("reference")) {
    if (j.at("reference").is_string()) {
      cfg.reference = j.at("reference").get<std::string>();
    } else if (j.at("reference").is_array()) {
      cfg.reference = "explicit";
      cfg.reference_values = get_double_array(j, "reference", {});
    } else {
      throw ConfigError("config field 'reference' must be 'auto' or an array of numbers");
    }
  }
  cfg.reverse_control = get_bool(j, "reverse_control", cfg.reverse_control);

  if (j.contains("assert")) {
    const auto& ja = j.at("assert");
    if (!ja.is_object()) throw ConfigError("config field 'assert' must be an object");
    auto opt = [&](const char* key) -> std::optional<double> {
      if (!ja.contains(key)) return std::nullopt;
      if (!ja.at(key).is_number()) throw ConfigError(std::string("assert.") + key + " must be a number");
      return ja.at(key).get<double>();
    };
    cfg.asserts.final_delta_max = opt("final_delta_max");
    cfg.asserts.final_delta_min = opt("final_delta_min");
    cfg.asserts.rel_diameter_max = opt("rel_diameter_max");
    cfg.asserts.decay_ratio_max = opt("decay_ratio_max");
    cfg.asserts.allow_failures = get_number<int>(ja, "allow_failures", 0);
    cfg.asserts.expect_violations = get_bool(ja, "expect_violations", false);
    cfg.asserts.slack_min = opt("slack_min");
    cfg.asserts.l1_final_max = opt("l1_final_max");
    cfg.asserts.strict_decrease = get_bool(ja, "strict_decrease", false);
    cfg.asserts.stability_epsilon = opt("stability_epsilon");
    cfg.asserts.stability_eta = get_number<double>(ja, "stability_eta", cfg.asserts.stability_eta);
  }

  if (j.contains("output")) {
    const auto& jo = j.at("output");
    if (!jo.is_object()) throw ConfigError("config field 'output' must be an object");
    cfg.csv_path = jo.value("csv", std::string(""));
    cfg.json_path = jo.value("json", std::string(""));
  }
  return cfg;
}

ExperimentConfig load_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError("config file " + path + " is not valid JSON: " + e.what());
  }
  return config_from_json(j);
}

nlohmann::json config_to_json(const ExperimentConfig& cfg) {
  nlohmann::json j;
  j["command"] = command_name(cfg.command);
  j["space"] = to_string(cfg.space);
  if (cfg.system) {
    nlohmann::json js;
    js["type"] = cfg.system->kind == SystemSpec::Kind::Torus ? "torus" : "cyclic";
    js["d"] = cfg.system->dim;
    if (cfg.system->alpha_is_golden) {
      js["alpha"] = "golden";
    } else if (!cfg.system->alpha.empty()) {
      js["alpha"] = cfg.system->alpha;
    }
    js["generator"] = cfg.system->generator;
    js["assume_ergodic"] = cfg.system->assume_ergodic;
    j["system"] = js;
  }
  if (cfg.function) {
    j["function"] = {{"name", cfg.function->name},
                     {"diag", cfg.function->diag},
                     {"cut", cfg.function->cut},
                     {"jump", cfg.function->jump},
                     {"freq", cfg.function->freq}};
  }
  j["n_max"] = cfg.n_max;
  j["samples"] = cfg.samples;
  j["atoms"] = cfg.atoms;
  j["quadrature_n"] = cfg.quadrature_n;
  j["k"] = cfg.k;
  j["m"] = cfg.m;
  j["tol"] = cfg.tol;
  j["cond_cap"] = cfg.cond_cap;
  j["seed"] = cfg.seed;
  j["repeats"] = cfg.repeats;
  if (!cfg.seeds.empty()) j["seeds"] = cfg.seeds;
  j["starts"] = cfg.starts;
  j["start"] = cfg.start;
  j["eta_schedule"] = cfg.eta_schedule;
  j["samples_per_eval"] = cfg.samples_per_eval;
  if (cfg.reference == "explicit") {
    j["reference"] = cfg.reference_values;
  } else {
    j["reference"] = cfg.reference;
  }
  j["reverse_control"] = cfg.reverse_control;

  nlohmann::json ja;
  if (cfg.asserts.final_delta_max) ja["final_delta_max"] = *cfg.asserts.final_delta_max;
  if (cfg.asserts.final_delta_min) ja["final_delta_min"] = *cfg.asserts.final_delta_min;
  if (cfg.asserts.rel_diameter_max) ja["rel_diameter_max"] = *cfg.asserts.rel_diameter_max;
  if (cfg.asserts.decay_ratio_max) ja["decay_ratio_max"] = *cfg.asserts.decay_ratio_max;
  ja["allow_failures"] = cfg.asserts.allow_failures;
  ja["expect_violations"] = cfg.asserts.expect_violations;
  if (cfg.asserts.slack_min) ja["slack_min"] = *cfg.asserts.slack_min;
  if (cfg.asserts.l1_final_max) ja["l1_final_max"] = *cfg.asserts.l1_final_max;
  ja["strict_decrease"] = cfg.asserts.strict_decrease;
  if (cfg.asserts.stability_epsilon) ja["stability_epsilon"] = *cfg.asserts.stability_epsilon;
  ja["stability_eta"] = cfg.asserts.stability_eta;
  j["assert"] = ja;

  j["output"] = {{"csv", cfg.csv_path}, {"json", cfg.json_path}};
  return j;
}

std::vector<std::string> validate(const ExperimentConfig& cfg) {
  std::vector<std::string> out;
  auto require = [&](bool ok, const std::string& msg) {
    if (!ok) out.push_back(msg);
  };

  require(cfg.space.dim >= 1, "space: dimension must be >= 1");
  require(cfg.n_max >= 1, "n_max: must be >= 1");
  require(cfg.samples >= 1, "samples: must be >= 1");
  require(cfg.atoms >= 1, "atoms: must be >= 1");
  require(cfg.quadrature_n >= 1, "quadrature_n: must be >= 1");
  require(cfg.k >= 1, "k: must be >= 1");
  require(cfg.m >= 1, "m: must be >= 1");
  require(cfg.tol < 0.0 || cfg.tol > 0.0, "tol: must be positive (or omitted for the space default)");
  require(cfg.cond_cap >= 1.0, "cond_cap: must be >= 1");
  require(cfg.repeats >= 1, "repeats: must be >= 1");
  require(cfg.starts >= 0, "starts: must be >= 0");
  require(cfg.samples_per_eval >= 1, "samples_per_eval: must be >= 1");
  require(cfg.asserts.allow_failures >= 0, "assert.allow_failures: must be >= 0");
  require(cfg.asserts.stability_eta > 0.0, "assert.stability_eta: must be > 0");
  for (double eta : cfg.eta_schedule) {
    if (!(eta > 0.0)) {
      out.push_back("eta_schedule: every eta must be > 0");
      break;
    }
  }
  if (cfg.reference == "explicit") {
    std::size_t expected = 0;
    switch (cfg.space.kind) {
      case SpaceSpec::Kind::Euclid: expected = static_cast<std::size_t>(cfg.space.dim); break;
      case SpaceSpec::Kind::Spd:
        expected = static_cast<std::size_t>(cfg.space.dim) * static_cast<std::size_t>(cfg.space.dim);
        break;
      case SpaceSpec::Kind::Hyperboloid: expected = static_cast<std::size_t>(cfg.space.dim) + 1; break;
      case SpaceSpec::Kind::Broken: expected = static_cast<std::size_t>(cfg.space.dim); break;
    }
    if (cfg.reference_values.size() != expected) {
      out.push_back("reference: explicit point needs " + std::to_string(expected) +
                    " values for " + to_string(cfg.space));
    }
  } else if (cfg.reference != "auto") {
    out.push_back("reference: must be 'auto' or an explicit point array");
  }

  const bool needs_tangent_space = cfg.command != Command::SpaceCheck;
  if (needs_tangent_space && cfg.space.kind == SpaceSpec::Kind::Broken) {
    out.push_back("space: the broken control space is only usable with space-check");
  }

  const bool needs_system = cfg.command == Command::Ergodic || cfg.command == Command::Mollify;
  if (needs_system) {
    if (!cfg.system) {
      out.push_back("system: required for this command");
    } else {
      if (cfg.system->kind != SystemSpec::Kind::Torus) {
        out.push_back("system: this command runs on torus systems (cyclic orbits are the holbrook command)");
      } else {
        if (!cfg.system->alpha_is_golden && cfg.system->alpha.empty()) {
          out.push_back("alpha: torus system needs a rotation (number list or 'golden')");
        }
        if (!cfg.system->alpha_is_golden && !cfg.system->alpha.empty() &&
            static_cast<int>(cfg.system->alpha.size()) != cfg.system->dim) {
          out.push_back("alpha: length must match the torus dimension");
        }
        if (cfg.system->alpha_is_golden && cfg.system->dim != 1) {
          out.push_back("alpha: 'golden' is a 1-dimensional rotation");
        }
        if (cfg.system->dim != 1) {
          out.push_back("system: named test functions read a 1-dimensional torus");
        }
        if (cfg.starts == 0 && !cfg.start.empty() &&
            static_cast<int>(cfg.start.size()) != cfg.system->dim) {
          out.push_back("start: length must match the torus dimension");
        }
      }
    }
    if (!cfg.function || cfg.function->name.empty()) {
      out.push_back("function: required for this command");
    } else {
      const auto& fn = *cfg.function;
      const bool euclid1 = cfg.space.kind == SpaceSpec::Kind::Euclid && cfg.space.dim == 1;
      const bool spd = cfg.space.kind == SpaceSpec::Kind::Spd;
      if (fn.name == "sin" || fn.name == "identity" || fn.name == "step-euclid") {
        if (!euclid1) out.push_back("function: '" + fn.name + "' needs space euclid:1");
      } else if (fn.name == "exp-sin-diag") {
        if (!spd) {
          out.push_back("function: 'exp-sin-diag' needs an spd space");
        } else if (static_cast<int>(fn.diag.size()) != cfg.space.dim) {
          out.push_back("function.diag: length must match the spd order");
        }
      } else if (fn.name == "step-spd") {
        if (!spd || cfg.space.dim != 3) {
          out.push_back("function: 'step-spd' needs space spd:3");
        }
      } else {
        out.push_back("function: unknown name '" + fn.name + "'");
      }
      if (fn.name == "step-spd" || fn.name == "step-euclid") {
        if (!(fn.cut > 0.0 && fn.cut < 1.0)) out.push_back("function.cut: must lie in (0, 1)");
        if (!(fn.jump > 0.0)) out.push_back("function.jump: must be > 0");
      }
    }
  }

  if (cfg.command == Command::Holbrook) {
    if (cfg.space.kind != SpaceSpec::Kind::Spd) {
      out.push_back("space: holbrook runs on spd spaces");
    }
    require(cfg.atoms >= 2, "atoms: holbrook needs at least 2 atoms");
    if (cfg.asserts.decay_ratio_max && cfg.n_max < 100) {
      out.push_back("n_max: decay_ratio_max compares against the checkpoint at n = 100");
    }
  }
  if (cfg.command == Command::Mollify) {
    require(!cfg.eta_schedule.empty(), "eta_schedule: must not be empty");
  }
  if (cfg.command == Command::Ergodic && cfg.asserts.decay_ratio_max && cfg.n_max < 100) {
    out.push_back("n_max: decay_ratio_max compares against the checkpoint at n = 100");
  }
  return out;
}

std::vector<std::uint64_t> effective_seeds(const ExperimentConfig& cfg) {
  if (!cfg.seeds.empty()) return cfg.seeds;
  std::vector<std::uint64_t> out;
  out.reserve(static_cast<std::size_t>(cfg.repeats));
  for (int r = 0; r < cfg.repeats; ++r) out.push_back(cfg.seed + static_cast<std::uint64_t>(r));
  return out;
}

}  // namespace ergomean::cli

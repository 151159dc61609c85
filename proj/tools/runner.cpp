#include "runner.hpp"

#include <Eigen/Core>
#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <limits>
#include <numbers>
#include <ostream>
#include <utility>
#include <vector>

#include "ergomean/broken_space.hpp"
#include "ergomean/ergodic_run.hpp"
#include "ergomean/euclidean.hpp"
#include "ergomean/hadamard.hpp"
#include "ergomean/hyperboloid.hpp"
#include "ergomean/inductive.hpp"
#include "ergomean/karcher.hpp"
#include "ergomean/kronecker.hpp"
#include "ergomean/mean_checks.hpp"
#include "ergomean/mollifier.hpp"
#include "ergomean/orbit_function.hpp"
#include "ergomean/rng.hpp"
#include "ergomean/sampling.hpp"
#include "ergomean/spd.hpp"
#include "ergomean/trace_io.hpp"
#include "ergomean/version.hpp"

namespace ergomean::cli {

namespace {

namespace fs = std::filesystem;
using TorusEl = TorusRotation::Element;

template <typename F>
auto dispatch_any_space(const SpaceSpec& spec, F&& f) {
  switch (spec.kind) {
    case SpaceSpec::Kind::Euclid: return f(EuclideanSpace(spec.dim));
    case SpaceSpec::Kind::Spd: return f(SpdSpace(spec.dim));
    case SpaceSpec::Kind::Hyperboloid: return f(HyperboloidSpace(spec.dim));
    case SpaceSpec::Kind::Broken: return f(BrokenGeodesicSpace(spec.dim));
  }
  throw ConfigError("space: unknown kind");
}

template <typename F>
auto dispatch_tangent_space(const SpaceSpec& spec, F&& f) {
  switch (spec.kind) {
    case SpaceSpec::Kind::Euclid: return f(EuclideanSpace(spec.dim));
    case SpaceSpec::Kind::Spd: return f(SpdSpace(spec.dim));
    case SpaceSpec::Kind::Hyperboloid: return f(HyperboloidSpace(spec.dim));
    default: throw ConfigError("space: not usable with this command");
  }
}

template <typename Space>
typename Space::Point draw_point(const Space& space, Rng& rng, double cond_cap) {
  if constexpr (std::is_same_v<Space, SpdSpace>) {
    return sample_spd(space.order(), rng, cond_cap);
  } else {
    (void)cond_cap;
    return sample_point(space, rng);
  }
}

TorusRotation make_torus(const SystemSpec& spec) {
  Eigen::VectorXd alpha(spec.dim);
  if (spec.alpha_is_golden) {
    alpha[0] = golden_rotation();
  } else {
    for (int i = 0; i < spec.dim; ++i) alpha[i] = spec.alpha[static_cast<std::size_t>(i)];
  }
  return TorusRotation(alpha, spec.assume_ergodic);
}

typename EuclideanSpace::Point point_from_values(const EuclideanSpace&,
                                                 const std::vector<double>& v) {
  Eigen::VectorXd p(static_cast<Eigen::Index>(v.size()));
  for (Eigen::Index i = 0; i < p.size(); ++i) p[i] = v[static_cast<std::size_t>(i)];
  return p;
}

typename SpdSpace::Point point_from_values(const SpdSpace& space,
                                           const std::vector<double>& v) {
  const auto n = space.order();
  Eigen::MatrixXd m(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      m(i, j) = v[static_cast<std::size_t>(i * n + j)];
    }
  }
  return SpdPoint(m);
}

typename HyperboloidSpace::Point point_from_values(const HyperboloidSpace&,
                                                   const std::vector<double>& v) {
  Eigen::VectorXd p(static_cast<Eigen::Index>(v.size()));
  for (Eigen::Index i = 0; i < p.size(); ++i) p[i] = v[static_cast<std::size_t>(i)];
  return HyperboloidPoint(p);
}

Eigen::MatrixXd unit_symmetric_direction() {
  Eigen::MatrixXd w(3, 3);
  w << 0.6, 0.35, 0.1, 0.35, -0.2, 0.45, 0.1, 0.45, 0.3;
  w = 0.5 * (w + w.transpose());
  return w / w.norm();
}

OrbitFunction<TorusEl, Eigen::VectorXd> make_function(const FunctionSpec& fn,
                                                      const EuclideanSpace& space) {
  auto scalar = [](double v) {
    Eigen::VectorXd p(1);
    p[0] = v;
    return p;
  };
  if (fn.name == "sin") {
    const double freq = fn.freq;
    return {.evaluate =
                [freq, scalar](const TorusEl& g) {
                  return scalar(std::sin(2.0 * std::numbers::pi * freq * g[0]));
                },
            .regularity = Regularity::continuous};
  }
  if (fn.name == "identity") {
    return {.evaluate = [scalar](const TorusEl& g) { return scalar(g[0]); },
            .regularity = Regularity::l1};
  }
  if (fn.name == "step-euclid") {
    const double cut = fn.cut;
    const double jump = fn.jump;
    return {.evaluate =
                [cut, jump, scalar](const TorusEl& g) {
                  return scalar(g[0] < cut ? 0.0 : jump);
                },
            .regularity = Regularity::stepwise};
  }
  throw ConfigError("function: '" + fn.name + "' is not available on " + space.name());
}

OrbitFunction<TorusEl, SpdPoint> make_function(const FunctionSpec& fn,
                                               const SpdSpace& space) {
  if (fn.name == "exp-sin-diag") {
    Eigen::VectorXd d(space.order());
    for (Eigen::Index i = 0; i < d.size(); ++i) d[i] = fn.diag[static_cast<std::size_t>(i)];
    return {.evaluate =
                [d](const TorusEl& g) {
                  const double s = std::sin(2.0 * std::numbers::pi * g[0]);
                  Eigen::VectorXd eigs = (s * d).array().exp();
                  Eigen::MatrixXd m = eigs.asDiagonal();
                  return spd_point_unchecked(std::move(m));
                },
            .regularity = Regularity::continuous};
  }
  if (fn.name == "step-spd") {
    const double cut = fn.cut;
    const SpdPoint low = spd_point_unchecked(Eigen::MatrixXd::Identity(3, 3));
    const SpdPoint high =
        spd_point_unchecked(spdfn::exp(fn.jump * unit_symmetric_direction()));
    return {.evaluate =
                [cut, low, high](const TorusEl& g) { return g[0] < cut ? low : high; },
            .regularity = Regularity::stepwise};
  }
  throw ConfigError("function: '" + fn.name + "' is not available on " + space.name());
}

OrbitFunction<TorusEl, HyperboloidPoint> make_function(const FunctionSpec& fn,
                                                       const HyperboloidSpace& space) {
  throw ConfigError("function: '" + fn.name + "' is not available on " + space.name());
}

struct ArtifactPaths {
  fs::path csv;
  fs::path json;
};

ArtifactPaths artifact_paths(const ExperimentConfig& cfg, const std::string& out_dir) {
  const std::string base = command_name(cfg.command);
  const fs::path dir(out_dir);
  return {dir / (cfg.csv_path.empty() ? base + ".csv" : cfg.csv_path),
          dir / (cfg.json_path.empty() ? base + ".json" : cfg.json_path)};
}

class Stopwatch {
 public:
  double ms() const {
    return std::chrono::duration<double, std::milli>(
               std::chrono::steady_clock::now() - start_)
        .count();
  }

 private:
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

nlohmann::json base_metadata(const ExperimentConfig& cfg, bool pass, double wall_ms) {
  nlohmann::json meta;
  meta["command"] = command_name(cfg.command);
  meta["version"] = kVersion;
  meta["config"] = config_to_json(cfg);
  meta["pass"] = pass;
  meta["wall_ms"] = wall_ms;
  return meta;
}

struct CheckerAccumulator {
  std::string name;
  std::int64_t samples = 0;
  std::int64_t violations = 0;
  double min_slack = std::numeric_limits<double>::infinity();

  void add(double slack, bool violated) {
    ++samples;
    if (violated) ++violations;
    min_slack = std::min(min_slack, slack);
  }
  CheckerSummaryRow row() const {
    return {name, samples, violations, std::isfinite(min_slack) ? min_slack : 0.0};
  }
};

std::vector<TraceEntry> trace_inductive_fold(
    const auto& space, const std::vector<typename std::decay_t<decltype(space)>::Point>& seq,
    const typename std::decay_t<decltype(space)>::Point& reference) {
  const auto schedule = checkpoint_schedule(static_cast<std::int64_t>(seq.size()));
  std::vector<TraceEntry> entries;
  std::size_t next = 0;
  auto st = inductive_begin(space, seq[0]);
  if (schedule[next] == 1) {
    entries.push_back({1, space.distance(st.current, reference), st.diameter_bound});
    ++next;
  }
  for (std::size_t i = 1; i < seq.size(); ++i) {
    st = inductive_step(std::move(st), seq[i], space);
    if (next < schedule.size() && schedule[next] == static_cast<std::int64_t>(i + 1)) {
      entries.push_back({static_cast<std::int64_t>(i + 1),
                         space.distance(st.current, reference), st.diameter_bound});
      ++next;
    }
  }
  return entries;
}

// ---------------------------------------------------------------------------
// space-check

int run_space_check(const ExperimentConfig& cfg, const std::string& out_dir,
                    std::ostream& log) {
  return dispatch_any_space(cfg.space, [&](const auto& space) -> int {
    Stopwatch watch;
    Rng rng(cfg.seed);
    CheckerAccumulator semi{"semiparallelogram"};
    CheckerAccumulator convexity{"geodesic-convexity"};
    CheckerAccumulator joint{"convexity-of-distance"};
    CheckerAccumulator quad{"reshetnyak"};
    CheckerAccumulator endpoints{"geodesic-endpoints"};
    CheckerAccumulator equidist{"geodesic-equidistance"};

    for (std::int64_t i = 0; i < cfg.samples; ++i) {
      const auto x = draw_point(space, rng, cfg.cond_cap);
      const auto y = draw_point(space, rng, cfg.cond_cap);
      const auto z = draw_point(space, rng, cfg.cond_cap);
      const auto w = draw_point(space, rng, cfg.cond_cap);
      const double t = rng.uniform01();

      const auto s1 = check_semiparallelogram(space, x, y, z);
      semi.add(s1.slack, !s1.holds);
      const auto s2 = check_geodesic_convexity(space, x, y, z, t);
      convexity.add(s2.slack, !s2.holds);
      const auto s3 = check_convexity_of_distance(space, x, y, z, w, t);
      joint.add(s3.slack, !s3.holds);
      const auto s4 = check_reshetnyak(space, x, y, z, w);
      quad.add(s4.slack, !s4.holds);

      const double dev_end = std::max(space.distance(space.geodesic(x, y, 0.0), x),
                                      space.distance(space.geodesic(x, y, 1.0), y));
      endpoints.add(1e-12 - dev_end, dev_end > 1e-12);

      const double d = space.distance(x, y);
      const double dev_eq = std::abs(space.distance(x, space.geodesic(x, y, t)) - t * d);
      const double allowance = 1e-8 * (1.0 + d);
      equidist.add(allowance - dev_eq, dev_eq > allowance);
    }

    std::vector<CheckerSummaryRow> rows = {semi.row(),      convexity.row(),
                                           joint.row(),     quad.row(),
                                           endpoints.row(), equidist.row()};
    std::int64_t total = 0;
    for (const auto& r : rows) total += r.violations;
    const bool pass = cfg.asserts.expect_violations ? total > 0 : total == 0;

    const auto paths = artifact_paths(cfg, out_dir);
    write_checker_csv(paths.csv.string(), rows);
    auto meta = base_metadata(cfg, pass, watch.ms());
    meta["space"] = space.name();
    meta["total_violations"] = total;
    nlohmann::json jrows = nlohmann::json::array();
    for (const auto& r : rows) {
      jrows.push_back({{"checker", r.checker},
                       {"samples", r.samples},
                       {"violations", r.violations},
                       {"min_slack", r.min_slack}});
    }
    meta["checkers"] = jrows;
    write_json_file(paths.json.string(), meta);

    log << "space-check " << space.name() << ": " << cfg.samples
        << " samples, " << total << " violations"
        << (cfg.asserts.expect_violations ? " (violations expected)" : "") << " -> "
        << (pass ? "PASS" : "FAIL") << "\n";
    return pass ? 0 : 1;
  });
}

// ---------------------------------------------------------------------------
// mean

int run_mean(const ExperimentConfig& cfg, const std::string& out_dir, std::ostream& log) {
  return dispatch_tangent_space(cfg.space, [&](const auto& space) -> int {
    using Space = std::decay_t<decltype(space)>;
    using P = typename Space::Point;
    Stopwatch watch;

    std::vector<std::vector<TraceEntry>> traces;
    std::vector<double> finals;
    const auto seeds = effective_seeds(cfg);
    for (const std::uint64_t seed : seeds) {
      Rng rng(seed);
      std::vector<P> seq;
      seq.reserve(static_cast<std::size_t>(cfg.n_max));
      for (std::int64_t i = 0; i < cfg.n_max; ++i) {
        seq.push_back(draw_point(space, rng, cfg.cond_cap));
      }

      P reference = [&] {
        if (cfg.reverse_control) {
          std::vector<P> rev(seq.rbegin(), seq.rend());
          return inductive_mean<Space>(rev, space);
        }
        return karcher_mean(EmpiricalMeasure<P>::uniform(seq), space, cfg.tol).point;
      }();

      traces.push_back(trace_inductive_fold(space, seq, reference));
      finals.push_back(traces.back().back().delta_to_reference);
    }

    int upper_failures = 0;
    bool lower_ok = true;
    for (double f : finals) {
      if (cfg.asserts.final_delta_max && f > *cfg.asserts.final_delta_max) ++upper_failures;
      if (cfg.asserts.final_delta_min && f < *cfg.asserts.final_delta_min) lower_ok = false;
    }
    const bool pass = upper_failures <= cfg.asserts.allow_failures && lower_ok;

    const auto paths = artifact_paths(cfg, out_dir);
    write_trace_csv(paths.csv.string(), traces);
    auto meta = base_metadata(cfg, pass, watch.ms());
    meta["space"] = space.name();
    meta["final_deltas"] = finals;
    meta["upper_failures"] = upper_failures;
    write_json_file(paths.json.string(), meta);

    const double worst = *std::max_element(finals.begin(), finals.end());
    log << "mean " << space.name() << ": " << seeds.size() << " runs of length "
        << cfg.n_max << ", worst final delta " << worst << " -> "
        << (pass ? "PASS" : "FAIL") << "\n";
    return pass ? 0 : 1;
  });
}

// ---------------------------------------------------------------------------
// karcher (the inequality suite around the barycenter solver)

int run_karcher(const ExperimentConfig& cfg, const std::string& out_dir,
                std::ostream& log) {
  return dispatch_tangent_space(cfg.space, [&](const auto& space) -> int {
    using Space = std::decay_t<decltype(space)>;
    using P = typename Space::Point;
    Stopwatch watch;
    Rng rng(cfg.seed);
    const double floor = cfg.asserts.slack_min.value_or(-1e-6);

    CheckerAccumulator variance{"variance-inequality"};
    CheckerAccumulator contraction{"inductive-contraction"};
    CheckerAccumulator weighted{"weighted-bound"};
    CheckerAccumulator diameter{"diameter-bound"};
    CheckerAccumulator coupling{"barycenter-contraction"};
    std::int64_t non_converged = 0;

    auto draw_seq = [&](std::int64_t len) {
      std::vector<P> seq;
      seq.reserve(static_cast<std::size_t>(len));
      for (std::int64_t i = 0; i < len; ++i) seq.push_back(draw_point(space, rng, cfg.cond_cap));
      return seq;
    };

    for (std::int64_t i = 0; i < cfg.samples; ++i) {
      {
        std::vector<WeightedAtom<P>> atoms;
        for (std::int64_t a = 0; a < cfg.atoms; ++a) {
          atoms.push_back({draw_point(space, rng, cfg.cond_cap), rng.uniform(0.2, 1.0)});
        }
        EmpiricalMeasure<P> mu(atoms);
        const auto bary = karcher_mean(mu, space, cfg.tol);
        if (!bary.converged) ++non_converged;
        const auto z = draw_point(space, rng, cfg.cond_cap);
        const auto s = check_variance_inequality(mu, space, z, bary.point);
        variance.add(s.slack, s.slack < floor);
      }
      {
        const auto a = draw_seq(cfg.k + cfg.m);
        const auto b = draw_seq(cfg.k + cfg.m);
        const auto s = check_contraction<Space>(a, b, space);
        contraction.add(s.slack, s.slack < floor);
      }
      {
        const std::int64_t kk = 1 + rng.uniform_int(cfg.k);
        const std::int64_t mm = 1 + rng.uniform_int(cfg.m);
        const auto seq = draw_seq(kk + mm);
        const auto z = draw_point(space, rng, cfg.cond_cap);
        const auto s = check_weighted_inequality<Space>(seq, z, kk, mm, space);
        weighted.add(s.slack, s.slack < floor);
      }
      {
        const std::int64_t kk = 1 + rng.uniform_int(cfg.k);
        const std::int64_t mm = 1 + rng.uniform_int(cfg.m);
        const auto seq = draw_seq(kk + mm);
        const auto s = check_diameter_bound<Space>(seq, kk, mm, space);
        diameter.add(s.slack, s.slack < floor);
      }
      {
        std::vector<WeightedAtom<P>> a, b;
        for (std::int64_t j = 0; j < cfg.atoms; ++j) {
          const double w = rng.uniform(0.2, 1.0);
          a.push_back({draw_point(space, rng, cfg.cond_cap), w});
          b.push_back({draw_point(space, rng, cfg.cond_cap), w});
        }
        const auto s = check_barycenter_contraction(EmpiricalMeasure<P>(a),
                                                    EmpiricalMeasure<P>(b), space);
        coupling.add(s.slack, s.slack < floor);
      }
    }

    std::vector<CheckerSummaryRow> rows = {variance.row(), contraction.row(),
                                           weighted.row(), diameter.row(),
                                           coupling.row()};
    std::int64_t total = 0;
    for (const auto& r : rows) total += r.violations;
    const bool pass = total == 0 && non_converged == 0;

    const auto paths = artifact_paths(cfg, out_dir);
    write_checker_csv(paths.csv.string(), rows);
    auto meta = base_metadata(cfg, pass, watch.ms());
    meta["space"] = space.name();
    meta["slack_floor"] = floor;
    meta["total_violations"] = total;
    meta["non_converged_solves"] = non_converged;
    write_json_file(paths.json.string(), meta);

    log << "karcher " << space.name() << ": " << cfg.samples << " samples x 5 checks, "
        << total << " violations (slack floor " << floor << ") -> "
        << (pass ? "PASS" : "FAIL") << "\n";
    return pass ? 0 : 1;
  });
}

// ---------------------------------------------------------------------------
// ergodic

int run_ergodic(const ExperimentConfig& cfg, const std::string& out_dir,
                std::ostream& log) {
  return dispatch_tangent_space(cfg.space, [&](const auto& space) -> int {
    using Space = std::decay_t<decltype(space)>;
    using P = typename Space::Point;
    Stopwatch watch;

    const TorusRotation system = make_torus(*cfg.system);
    const auto A = make_function(*cfg.function, space);

    const BarycenterResult<P> ref_estimate = [&] {
      if (cfg.reference == "explicit") {
        P p = point_from_values(space, cfg.reference_values);
        return BarycenterResult<P>{std::move(p), 0.0, 0, true, 0.0};
      }
      return estimate_pushforward_barycenter(system, A, cfg.quadrature_n, space);
    }();
    const P reference = ref_estimate.point;

    std::vector<TorusEl> starts;
    if (cfg.starts > 0) {
      Rng srng(cfg.seed);
      for (int i = 0; i < cfg.starts; ++i) starts.push_back(system.haar(srng));
    } else if (!cfg.start.empty()) {
      Eigen::VectorXd s(static_cast<Eigen::Index>(cfg.start.size()));
      for (Eigen::Index i = 0; i < s.size(); ++i) s[i] = cfg.start[static_cast<std::size_t>(i)];
      starts.push_back(s);
    } else {
      starts.push_back(system.identity());
    }

    std::vector<std::vector<TraceEntry>> traces;
    nlohmann::json per_start = nlohmann::json::array();
    nlohmann::json single_trace;
    int upper_failures = 0;
    bool lower_ok = true;
    std::vector<std::string> warnings;
    if (!ref_estimate.converged) {
      warnings.push_back("reference barycenter estimate did not converge");
    }

    for (const auto& start : starts) {
      const auto trace = ergodic_inductive_run(system, A, start, cfg.n_max,
                                               std::optional<P>(reference), space);
      traces.push_back(trace.entries);
      if (starts.size() == 1) single_trace = trace_to_json(trace);
      const double final_delta = trace.final_delta();
      const auto d100 = trace.delta_at(100);

      bool upper_fail = false;
      if (cfg.asserts.final_delta_max && final_delta > *cfg.asserts.final_delta_max) {
        upper_fail = true;
      }
      if (cfg.asserts.decay_ratio_max && d100 &&
          !(final_delta < *cfg.asserts.decay_ratio_max * *d100)) {
        upper_fail = true;
      }
      if (upper_fail) ++upper_failures;
      if (cfg.asserts.final_delta_min && final_delta < *cfg.asserts.final_delta_min) {
        lower_ok = false;
      }
      for (const auto& w : trace.warnings) {
        if (std::find(warnings.begin(), warnings.end(), w) == warnings.end()) {
          warnings.push_back(w);
        }
      }
      per_start.push_back({{"start", point_to_json(start)},
                           {"final_delta", final_delta},
                           {"delta_at_100", d100 ? nlohmann::json(*d100) : nlohmann::json()},
                           {"upper_fail", upper_fail}});
    }

    const bool has_upper = cfg.asserts.final_delta_max || cfg.asserts.decay_ratio_max;
    const bool pass =
        (!has_upper || upper_failures <= cfg.asserts.allow_failures) && lower_ok;

    const auto paths = artifact_paths(cfg, out_dir);
    write_trace_csv(paths.csv.string(), traces);
    auto meta = base_metadata(cfg, pass, watch.ms());
    meta["space"] = space.name();
    meta["system"] = system.describe();
    meta["system_ergodic"] = system.is_ergodic();
    meta["reference"] = barycenter_result_to_json(ref_estimate);
    meta["starts"] = per_start;
    if (!single_trace.is_null()) meta["trace"] = single_trace;
    meta["upper_failures"] = upper_failures;
    meta["warnings"] = warnings;
    write_json_file(paths.json.string(), meta);

    log << "ergodic " << space.name() << " on " << system.describe() << ": "
        << starts.size() << " start(s) to n = " << cfg.n_max << ", " << upper_failures
        << " over-threshold -> " << (pass ? "PASS" : "FAIL") << "\n";
    return pass ? 0 : 1;
  });
}

// ---------------------------------------------------------------------------
// holbrook

int run_holbrook(const ExperimentConfig& cfg, const std::string& out_dir,
                 std::ostream& log) {
  const SpdSpace space(cfg.space.dim);
  Stopwatch watch;

  std::vector<std::vector<TraceEntry>> traces;
  nlohmann::json per_seed = nlohmann::json::array();
  int failures = 0;

  const auto seeds = effective_seeds(cfg);
  for (const std::uint64_t seed : seeds) {
    Rng rng(seed);
    std::vector<SpdPoint> atoms;
    for (std::int64_t i = 0; i < cfg.atoms; ++i) {
      atoms.push_back(sample_spd(space.order(), rng, cfg.cond_cap));
    }
    const double diam = set_diameter<SpdSpace>(atoms, space);
    const auto gamma =
        karcher_mean(EmpiricalMeasure<SpdPoint>::uniform(atoms), space, cfg.tol);
    if (!gamma.converged) {
      throw std::runtime_error("holbrook: joint mean solve did not converge (seed " +
                               std::to_string(seed) + ")");
    }

    const CyclicGroup system(cfg.atoms, 1);
    OrbitFunction<std::int64_t, SpdPoint> lookup{
        .evaluate = [atoms](const std::int64_t& r) { return atoms[static_cast<std::size_t>(r)]; },
        .regularity = Regularity::stepwise};

    const auto trace = ergodic_inductive_run(system, lookup, 0, cfg.n_max,
                                             std::optional<SpdPoint>(gamma.point), space);
    traces.push_back(trace.entries);

    const double final_delta = trace.final_delta();
    const auto d100 = trace.delta_at(100);
    bool fail = false;
    if (cfg.asserts.rel_diameter_max && final_delta > *cfg.asserts.rel_diameter_max * diam) {
      fail = true;
    }
    if (cfg.asserts.decay_ratio_max && d100 &&
        !(final_delta < *cfg.asserts.decay_ratio_max * *d100)) {
      fail = true;
    }
    if (fail) ++failures;
    per_seed.push_back({{"seed", seed},
                        {"final_delta", final_delta},
                        {"delta_at_100", d100 ? nlohmann::json(*d100) : nlohmann::json()},
                        {"atom_diameter", diam},
                        {"joint_mean", barycenter_result_to_json(gamma)},
                        {"fail", fail}});
  }

  const bool pass = failures <= cfg.asserts.allow_failures;
  const auto paths = artifact_paths(cfg, out_dir);
  write_trace_csv(paths.csv.string(), traces);
  auto meta = base_metadata(cfg, pass, watch.ms());
  meta["space"] = space.name();
  meta["runs"] = per_seed;
  meta["failures"] = failures;
  write_json_file(paths.json.string(), meta);

  log << "holbrook " << space.name() << ": " << seeds.size() << " seeds, " << cfg.atoms
      << " atoms to n = " << cfg.n_max << ", " << failures << " failures -> "
      << (pass ? "PASS" : "FAIL") << "\n";
  return pass ? 0 : 1;
}

// ---------------------------------------------------------------------------
// mollify

int run_mollify(const ExperimentConfig& cfg, const std::string& out_dir,
                std::ostream& log) {
  return dispatch_tangent_space(cfg.space, [&](const auto& space) -> int {
    using Space = std::decay_t<decltype(space)>;
    using P = typename Space::Point;
    Stopwatch watch;

    const TorusRotation system = make_torus(*cfg.system);
    const auto A = make_function(*cfg.function, space);

    std::vector<MollifierRow> rows;
    const int deviation_grid = 512;
    for (double eta : cfg.eta_schedule) {
      const MollifierConfig mc{.eta = eta, .samples_per_eval = cfg.samples_per_eval};
      auto smoothed = mollified_function(A, mc, system, space);
      const double l1 = l1_distance(A, smoothed, cfg.quadrature_n, system, space);
      double max_dev = 0.0;
      for (int i = 0; i < deviation_grid; ++i) {
        Eigen::VectorXd g(1);
        g[0] = (i + 0.5) / deviation_grid;
        max_dev = std::max(max_dev, space.distance(smoothed.evaluate(g), A.evaluate(g)));
      }
      rows.push_back({eta, l1, max_dev});
    }

    bool pass = true;
    if (cfg.asserts.strict_decrease) {
      for (std::size_t i = 1; i < rows.size(); ++i) {
        if (!(rows[i].l1_estimate < rows[i - 1].l1_estimate)) pass = false;
      }
    }
    if (cfg.asserts.l1_final_max && rows.back().l1_estimate > *cfg.asserts.l1_final_max) {
      pass = false;
    }

    nlohmann::json stability = nlohmann::json();
    if (cfg.asserts.stability_epsilon) {
      const double eta_s = cfg.asserts.stability_eta;
      const double epsilon = *cfg.asserts.stability_epsilon;
      const double rho = system.neighborhood_measure(eta_s) * epsilon;

      // Translate the function until the L1 gap fits under rho, then demand
      // the mollifications stay uniformly within epsilon.
      double h = eta_s / 4.0;
      double gap = std::numeric_limits<double>::infinity();
      while (h > 1e-7) {
        Eigen::VectorXd shift(1);
        shift[0] = h;
        OrbitFunction<TorusEl, P> translated{
            .evaluate = [A, system, shift](const TorusEl& g) {
              return A.evaluate(system.add(g, shift));
            },
            .regularity = A.regularity};
        gap = l1_distance(A, translated, cfg.quadrature_n, system, space);
        if (gap <= 0.9 * rho) break;
        h *= 0.5;
      }
      Eigen::VectorXd shift(1);
      shift[0] = h;
      OrbitFunction<TorusEl, P> translated{
          .evaluate = [A, system, shift](const TorusEl& g) {
            return A.evaluate(system.add(g, shift));
          },
          .regularity = A.regularity};

      const MollifierConfig mc{.eta = eta_s, .samples_per_eval = cfg.samples_per_eval};
      auto am = mollified_function(A, mc, system, space);
      auto bm = mollified_function(translated, mc, system, space);
      double max_dev = 0.0;
      for (int i = 0; i < 256; ++i) {
        Eigen::VectorXd g(1);
        g[0] = (i + 0.5) / 256.0;
        max_dev = std::max(max_dev, space.distance(am.evaluate(g), bm.evaluate(g)));
      }
      const bool stable = max_dev <= epsilon + 1e-6;
      if (!stable) pass = false;
      stability = {{"eta", eta_s}, {"epsilon", epsilon},    {"rho", rho},
                   {"shift", h},   {"l1_gap", gap},         {"max_deviation", max_dev},
                   {"pass", stable}};
    }

    const auto paths = artifact_paths(cfg, out_dir);
    write_mollifier_csv(paths.csv.string(), rows);
    auto meta = base_metadata(cfg, pass, watch.ms());
    meta["space"] = space.name();
    meta["system"] = system.describe();
    nlohmann::json jrows = nlohmann::json::array();
    for (const auto& r : rows) {
      jrows.push_back({{"eta", r.eta},
                       {"l1_estimate", r.l1_estimate},
                       {"max_grid_deviation", r.max_grid_deviation}});
    }
    meta["schedule"] = jrows;
    meta["stability"] = stability;
    write_json_file(paths.json.string(), meta);

    log << "mollify " << space.name() << ": " << rows.size() << " eta values, final l1 "
        << rows.back().l1_estimate << " -> " << (pass ? "PASS" : "FAIL") << "\n";
    return pass ? 0 : 1;
  });
}

}  // namespace

int run_experiment(const ExperimentConfig& cfg, const std::string& out_dir,
                   std::ostream& log, std::ostream& err) {
  const auto diagnostics = validate(cfg);
  if (!diagnostics.empty()) {
    for (const auto& d : diagnostics) err << "config error: " << d << "\n";
    return 2;
  }
  try {
    fs::create_directories(out_dir);
    switch (cfg.command) {
      case Command::SpaceCheck: return run_space_check(cfg, out_dir, log);
      case Command::Mean: return run_mean(cfg, out_dir, log);
      case Command::Karcher: return run_karcher(cfg, out_dir, log);
      case Command::Ergodic: return run_ergodic(cfg, out_dir, log);
      case Command::Holbrook: return run_holbrook(cfg, out_dir, log);
      case Command::Mollify: return run_mollify(cfg, out_dir, log);
    }
    err << "config error: unknown command\n";
    return 2;
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
}

}  // namespace ergomean::cli

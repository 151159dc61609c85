#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <nlohmann/json.hpp>
#include <string>
#include <vector>

#include "ergomean/hyperboloid.hpp"
#include "ergomean/karcher.hpp"
#include "ergomean/spd.hpp"
#include "ergomean/trace.hpp"

namespace ergomean {

// Fixed "%.17g" formatting so identical runs produce byte-identical files.
std::string format_double(double v);

struct CheckerSummaryRow {
  std::string checker;
  std::int64_t samples = 0;
  std::int64_t violations = 0;
  double min_slack = 0.0;
};

struct MollifierRow {
  double eta = 0.0;
  double l1_estimate = 0.0;
  double max_grid_deviation = 0.0;
};

// Trace CSV with the fixed column contract (n, delta_to_reference,
// diameter_bound). Multi-run outputs concatenate the traces in run order;
// n restarting at 1 marks the next run.
void write_trace_csv(const std::string& path,
                     const std::vector<std::vector<TraceEntry>>& traces);

void write_checker_csv(const std::string& path,
                       const std::vector<CheckerSummaryRow>& rows);

void write_mollifier_csv(const std::string& path, const std::vector<MollifierRow>& rows);

void write_json_file(const std::string& path, const nlohmann::json& j);

// Point serialization: flat arrays for vectors, row-major for SPD matrices.
nlohmann::json point_to_json(const Eigen::VectorXd& p);
nlohmann::json point_to_json(const SpdPoint& p);
nlohmann::json point_to_json(const HyperboloidPoint& p);

template <typename P>
nlohmann::json barycenter_result_to_json(const BarycenterResult<P>& r) {
  return {{"point", point_to_json(r.point)},
          {"objective", r.objective},
          {"iterations", r.iterations},
          {"converged", r.converged},
          {"final_step", r.final_step}};
}

template <typename P>
nlohmann::json trace_to_json(const ConvergenceTrace<P>& t) {
  nlohmann::json entries = nlohmann::json::array();
  for (const auto& e : t.entries) {
    entries.push_back({{"n", e.n},
                       {"delta_to_reference", e.delta_to_reference},
                       {"diameter_bound", e.diameter_bound}});
  }
  return {{"entries", entries},
          {"reference", point_to_json(t.reference)},
          {"final_point", point_to_json(t.final_point)},
          {"n_max", t.n_max},
          {"system_ergodic", t.system_ergodic},
          {"warnings", t.warnings}};
}

}  // namespace ergomean

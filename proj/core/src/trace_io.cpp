#include "ergomean/trace_io.hpp"

#include <cstdio>
#include <fstream>
#include <stdexcept>

namespace ergomean {

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

namespace {
std::ofstream open_for_write(const std::string& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  return out;
}
}  // namespace

void write_trace_csv(const std::string& path,
                     const std::vector<std::vector<TraceEntry>>& traces) {
  auto out = open_for_write(path);
  out << "n,delta_to_reference,diameter_bound\n";
  for (const auto& trace : traces) {
    for (const auto& e : trace) {
      out << e.n << ',' << format_double(e.delta_to_reference) << ','
          << format_double(e.diameter_bound) << '\n';
    }
  }
}

void write_checker_csv(const std::string& path,
                       const std::vector<CheckerSummaryRow>& rows) {
  auto out = open_for_write(path);
  out << "checker,samples,violations,min_slack\n";
  for (const auto& r : rows) {
    out << r.checker << ',' << r.samples << ',' << r.violations << ','
        << format_double(r.min_slack) << '\n';
  }
}

void write_mollifier_csv(const std::string& path,
                         const std::vector<MollifierRow>& rows) {
  auto out = open_for_write(path);
  out << "eta,l1_estimate,max_grid_deviation\n";
  for (const auto& r : rows) {
    out << format_double(r.eta) << ',' << format_double(r.l1_estimate) << ','
        << format_double(r.max_grid_deviation) << '\n';
  }
}

void write_json_file(const std::string& path, const nlohmann::json& j) {
  auto out = open_for_write(path);
  out << j.dump(2) << '\n';
}

nlohmann::json point_to_json(const Eigen::VectorXd& p) {
  nlohmann::json arr = nlohmann::json::array();
  for (Eigen::Index i = 0; i < p.size(); ++i) arr.push_back(p[i]);
  return arr;
}

nlohmann::json point_to_json(const SpdPoint& p) {
  nlohmann::json arr = nlohmann::json::array();
  const auto& m = p.matrix();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) arr.push_back(m(i, j));
  }
  return arr;
}

nlohmann::json point_to_json(const HyperboloidPoint& p) {
  return point_to_json(p.coords());
}

}  // namespace ergomean

#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

#include "ergomean/inductive.hpp"
#include "ergomean/karcher.hpp"
#include "ergomean/kronecker.hpp"
#include "ergomean/orbit_function.hpp"
#include "ergomean/trace.hpp"

namespace ergomean {

// Barycenter of the pushforward of Haar measure under A, discretized on the
// system's deterministic quadrature grid (exact enumeration for cyclic
// groups, so there is no discretization error there).
template <KroneckerSystem G, TangentHadamardSpace S>
BarycenterResult<typename S::Point> estimate_pushforward_barycenter(
    const G& system, const OrbitFunction<typename G::Element, typename S::Point>& A,
    std::int64_t quadrature_n, const S& space) {
  if (quadrature_n < 1) {
    throw std::invalid_argument("estimate_pushforward_barycenter: quadrature_n must be >= 1");
  }
  const auto grid = system.quadrature_grid(quadrature_n);
  std::vector<typename S::Point> points;
  points.reserve(grid.size());
  for (const auto& g : grid) points.push_back(A.evaluate(g));
  return karcher_mean(EmpiricalMeasure<typename S::Point>::uniform(std::move(points)),
                      space);
}

// Streaming inductive-mean run along the orbit of `start`, recording the
// distance to the reference on the checkpoint schedule. Memory is O(1) in n.
// Without an explicit reference the pushforward barycenter estimate is used.
// A non-ergodic system is not an error: the run proceeds and the trace
// carries a warning (that is exactly the negative-control setup).
template <KroneckerSystem G, TangentHadamardSpace S>
ConvergenceTrace<typename S::Point> ergodic_inductive_run(
    const G& system, const OrbitFunction<typename G::Element, typename S::Point>& A,
    const typename G::Element& start, std::int64_t n_max,
    std::optional<typename S::Point> reference, const S& space,
    std::int64_t reference_quadrature_n = 10000) {
  using P = typename S::Point;
  if (n_max < 1) throw std::invalid_argument("ergodic_inductive_run: n_max must be >= 1");

  std::vector<std::string> warnings;
  P ref = [&] {
    if (reference) return *std::move(reference);
    auto est = estimate_pushforward_barycenter(system, A, reference_quadrature_n, space);
    if (!est.converged) {
      warnings.push_back("reference barycenter estimate did not converge (final step " +
                         std::to_string(est.final_step) + ")");
    }
    return std::move(est.point);
  }();

  ConvergenceTrace<P> trace{.entries = {},
                            .reference = ref,
                            .final_point = ref,
                            .n_max = n_max,
                            .system_ergodic = system.is_ergodic(),
                            .warnings = std::move(warnings)};
  if (!trace.system_ergodic) {
    trace.warnings.push_back(
        "system is not ergodic: the run converges to the orbit-closure barycenter, "
        "not the Haar pushforward barycenter");
  }

  const auto schedule = checkpoint_schedule(n_max);
  std::size_t next_checkpoint = 0;

  auto cursor = system.orbit_cursor(start);
  auto state = inductive_begin(space, A.evaluate(cursor.current()));
  if (schedule[next_checkpoint] == 1) {
    trace.entries.push_back({1, space.distance(state.current, ref), state.diameter_bound});
    ++next_checkpoint;
  }
  for (std::int64_t n = 2; n <= n_max; ++n) {
    cursor.advance();
    state = inductive_step(std::move(state), A.evaluate(cursor.current()), space);
    if (next_checkpoint < schedule.size() && schedule[next_checkpoint] == n) {
      trace.entries.push_back({n, space.distance(state.current, ref), state.diameter_bound});
      ++next_checkpoint;
    }
  }
  trace.final_point = std::move(state.current);
  return trace;
}

// Scalar Birkhoff baseline: (1/n) sum_{k<n} f(tau^k(start)).
template <KroneckerSystem G>
double birkhoff_average(const G& system,
                        const std::function<double(const typename G::Element&)>& f,
                        const typename G::Element& start, std::int64_t n) {
  if (n < 1) throw std::invalid_argument("birkhoff_average: n must be >= 1");
  auto cursor = system.orbit_cursor(start);
  double sum = f(cursor.current());
  for (std::int64_t k = 1; k < n; ++k) {
    cursor.advance();
    sum += f(cursor.current());
  }
  return sum / static_cast<double>(n);
}

// Orbit-coupled contraction with an explicit tolerance margin epsilon:
//   d(S_n(a^tau(g)), S_n(b^tau(g))) <= epsilon + integral of d(A, B) dm,
// the right-hand side estimated on the quadrature grid.
template <KroneckerSystem G, HadamardSpace S>
InequalitySlack check_orbit_contraction(
    const G& system, const OrbitFunction<typename G::Element, typename S::Point>& A,
    const OrbitFunction<typename G::Element, typename S::Point>& B,
    const typename G::Element& start, std::int64_t n, double epsilon,
    std::int64_t quadrature_n, const S& space) {
  if (n < 1) throw std::invalid_argument("check_orbit_contraction: n must be >= 1");
  auto cursor = system.orbit_cursor(start);
  auto sa = inductive_begin(space, A.evaluate(cursor.current()));
  auto sb = inductive_begin(space, B.evaluate(cursor.current()));
  for (std::int64_t k = 1; k < n; ++k) {
    cursor.advance();
    sa = inductive_step(std::move(sa), A.evaluate(cursor.current()), space);
    sb = inductive_step(std::move(sb), B.evaluate(cursor.current()), space);
  }
  const double lhs = space.distance(sa.current, sb.current);

  const auto grid = system.quadrature_grid(quadrature_n);
  double integral = 0.0;
  for (const auto& g : grid) integral += space.distance(A.evaluate(g), B.evaluate(g));
  integral /= static_cast<double>(grid.size());

  return make_slack(lhs, epsilon + integral);
}

}  // namespace ergomean

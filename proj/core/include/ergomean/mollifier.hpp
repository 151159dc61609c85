#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "ergomean/ergodic_run.hpp"
#include "ergomean/hadamard.hpp"
#include "ergomean/karcher.hpp"
#include "ergomean/kronecker.hpp"
#include "ergomean/orbit_function.hpp"

namespace ergomean {

// Neighborhood-averaging configuration. The neighborhood is the metric ball
// of radius min(eta, eta^{1/d})/2 about the identity, discretized on a fixed
// symmetric grid so evaluation is deterministic; sampler_seed is reserved
// for sampled neighborhoods and unused by the grid discretization.
struct MollifierConfig {
  double eta = 0.1;
  std::int64_t samples_per_eval = 64;
  std::uint64_t sampler_seed = 0;
};

inline void validate(const MollifierConfig& cfg) {
  if (!(cfg.eta > 0.0)) throw std::invalid_argument("MollifierConfig: eta must be > 0");
  if (cfg.samples_per_eval < 1) {
    throw std::invalid_argument("MollifierConfig: samples_per_eval must be >= 1");
  }
}

// Barycentric local average: the barycenter of A pushed forward from the
// translate g0 + U_eta of the identity neighborhood. The reference point in
// the variational definition only shifts the objective by a constant for
// finite measures, so it is dropped.
template <KroneckerSystem G, TangentHadamardSpace S>
typename S::Point mollify(const OrbitFunction<typename G::Element, typename S::Point>& A,
                          const MollifierConfig& cfg, const typename G::Element& g0,
                          const G& system, const S& space) {
  validate(cfg);
  const auto offsets = system.neighborhood_grid(cfg.eta, cfg.samples_per_eval);
  // Stepwise functions produce long runs of coinciding atoms; merging them
  // into weighted atoms keeps the solve proportional to the number of
  // distinct values (a single value needs no solve at all).
  std::vector<WeightedAtom<typename S::Point>> grouped;
  for (const auto& h : offsets) {
    auto value = A.evaluate(system.add(g0, h));
    bool merged = false;
    for (auto& g : grouped) {
      if (space.same_representation(g.point, value)) {
        g.weight += 1.0;
        merged = true;
        break;
      }
    }
    if (!merged) grouped.push_back({std::move(value), 1.0});
  }
  if (grouped.size() == 1) return grouped.front().point;
  auto result =
      karcher_mean(EmpiricalMeasure<typename S::Point>(std::move(grouped)), space);
  if (!result.converged) {
    throw std::runtime_error("mollify: barycenter solve did not converge after " +
                             std::to_string(result.iterations) +
                             " iterations (final step " +
                             std::to_string(result.final_step) + ")");
  }
  return std::move(result.point);
}

// The mollified function g0 -> A_eta(g0), continuous by construction.
template <KroneckerSystem G, TangentHadamardSpace S>
OrbitFunction<typename G::Element, typename S::Point> mollified_function(
    OrbitFunction<typename G::Element, typename S::Point> A, MollifierConfig cfg,
    G system, S space) {
  return {.evaluate =
              [A = std::move(A), cfg, system = std::move(system),
               space = std::move(space)](const typename G::Element& g0) {
                return mollify(A, cfg, g0, system, space);
              },
          .regularity = Regularity::continuous};
}

// Quadrature estimate of the continuity modulus
//   phi(h) = integral of d^p(A(g), A(g + h)) dm(g),  p in {1, 2}.
// phi at the identity is exactly zero: g + identity is bitwise g, evaluation
// is deterministic, and the metrics short-circuit identical representations.
template <KroneckerSystem G, HadamardSpace S>
double continuity_modulus(const OrbitFunction<typename G::Element, typename S::Point>& A,
                          const typename G::Element& h, int p,
                          std::int64_t quadrature_n, const G& system, const S& space) {
  if (p != 1 && p != 2) throw std::invalid_argument("continuity_modulus: p must be 1 or 2");
  if (quadrature_n < 1) {
    throw std::invalid_argument("continuity_modulus: quadrature_n must be >= 1");
  }
  const auto grid = system.quadrature_grid(quadrature_n);
  double sum = 0.0;
  for (const auto& g : grid) {
    const double d = space.distance(A.evaluate(g), A.evaluate(system.add(g, h)));
    sum += (p == 1) ? d : d * d;
  }
  return sum / static_cast<double>(grid.size());
}

// Quadrature estimate of the L1 distance between two orbit functions.
template <KroneckerSystem G, HadamardSpace S>
double l1_distance(const OrbitFunction<typename G::Element, typename S::Point>& A,
                   const OrbitFunction<typename G::Element, typename S::Point>& B,
                   std::int64_t quadrature_n, const G& system, const S& space) {
  if (quadrature_n < 1) throw std::invalid_argument("l1_distance: quadrature_n must be >= 1");
  const auto grid = system.quadrature_grid(quadrature_n);
  double sum = 0.0;
  for (const auto& g : grid) sum += space.distance(A.evaluate(g), B.evaluate(g));
  return sum / static_cast<double>(grid.size());
}

// Barycenter contraction for atomwise-coupled measures (equal counts and
// weights): d(b(mu_a), b(mu_b)) <= sum_i w_i d(a_i, b_i).
template <TangentHadamardSpace S>
InequalitySlack check_barycenter_contraction(
    const EmpiricalMeasure<typename S::Point>& mu_a,
    const EmpiricalMeasure<typename S::Point>& mu_b, const S& space) {
  if (mu_a.size() != mu_b.size()) {
    throw std::invalid_argument("check_barycenter_contraction: atom counts differ");
  }
  double rhs = 0.0;
  for (std::size_t i = 0; i < mu_a.size(); ++i) {
    if (std::abs(mu_a.atom(i).weight - mu_b.atom(i).weight) > 1e-12) {
      throw std::invalid_argument(
          "check_barycenter_contraction: coupling requires equal weights");
    }
    rhs += mu_a.atom(i).weight * space.distance(mu_a.atom(i).point, mu_b.atom(i).point);
  }
  const auto ba = karcher_mean(mu_a, space);
  const auto bb = karcher_mean(mu_b, space);
  return make_slack(space.distance(ba.point, bb.point), rhs);
}

// Pointwise truncation at radius N about z0; the result is essentially
// bounded by construction.
template <typename Element, TangentHadamardSpace S>
OrbitFunction<Element, typename S::Point> truncate(
    OrbitFunction<Element, typename S::Point> A, typename S::Point z0, double radius,
    S space) {
  if (!(radius > 0.0)) throw std::invalid_argument("truncate: radius must be > 0");
  const Regularity tag = A.regularity;
  return {.evaluate =
              [A = std::move(A), z0 = std::move(z0), radius,
               space = std::move(space)](const Element& g) {
                auto value = A.evaluate(g);
                return space.distance(value, z0) < radius ? value : z0;
              },
          .regularity = tag};
}

}  // namespace ergomean

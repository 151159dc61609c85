#pragma once

#include <cstdint>
#include <span>
#include <stdexcept>

#include "ergomean/hadamard.hpp"
#include "ergomean/inductive.hpp"
#include "ergomean/karcher.hpp"

namespace ergomean {

// Variance inequality at the barycenter b of mu:
//   d^2(z, b) <= sum_j w_j [ d^2(z, x_j) - d^2(b, x_j) ].
// `bary` must be a (converged) barycenter of `mu`; the slack absorbs the
// solver error, which is why property tests judge it with a looser floor
// than the axiom checks.
template <HadamardSpace S>
InequalitySlack check_variance_inequality(const EmpiricalMeasure<typename S::Point>& mu,
                                          const S& space, const typename S::Point& z,
                                          const typename S::Point& bary) {
  double rhs = 0.0;
  for (const auto& a : mu) {
    const double dz = space.distance(z, a.point);
    const double db = space.distance(bary, a.point);
    rhs += a.weight * (dz * dz - db * db);
  }
  const double d = space.distance(z, bary);
  return make_slack(d * d, rhs);
}

// Contraction of inductive means along coupled sequences:
//   d(S_n(a), S_n(b)) <= (1/n) sum_i d(a_i, b_i).
template <HadamardSpace S>
InequalitySlack check_contraction(std::span<const typename S::Point> a,
                                  std::span<const typename S::Point> b,
                                  const S& space) {
  if (a.size() != b.size()) {
    throw std::invalid_argument("check_contraction: sequence lengths differ");
  }
  if (a.empty()) throw std::invalid_argument("check_contraction: empty sequences");
  const double lhs = space.distance(inductive_mean(a, space), inductive_mean(b, space));
  double sum = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) sum += space.distance(a[i], b[i]);
  return make_slack(lhs, sum / static_cast<double>(a.size()));
}

namespace detail {
template <typename Seq>
void require_indices(const Seq& seq, std::int64_t k, std::int64_t m) {
  if (k < 1 || m < 1) throw std::invalid_argument("lemma check: need k >= 1 and m >= 1");
  if (static_cast<std::size_t>(k + m) > seq.size()) {
    throw std::invalid_argument("lemma check: k + m exceeds sequence length");
  }
}
}  // namespace detail

// Three-term weighted bound for the inductive mean (indices as in the
// 1-based recursion; seq[i] is a_{i+1}):
//   d^2(S_{k+m}, z) <= k/(k+m) d^2(S_k, z)
//                      + 1/(k+m)   sum_{j=0}^{m-1} d^2(a_{k+j+1}, z)
//                      - k/(k+m)^2 sum_{j=0}^{m-1} d^2(S_{k+j}, a_{k+j+1}).
template <HadamardSpace S>
InequalitySlack check_weighted_inequality(std::span<const typename S::Point> seq,
                                          const typename S::Point& z, std::int64_t k,
                                          std::int64_t m, const S& space) {
  detail::require_indices(seq, k, m);
  const auto prefix = inductive_prefix_means(seq, space);
  const double km = static_cast<double>(k + m);

  const double d_skm = space.distance(prefix[static_cast<std::size_t>(k + m - 1)], z);
  const double d_sk = space.distance(prefix[static_cast<std::size_t>(k - 1)], z);

  double atom_term = 0.0;
  double step_term = 0.0;
  for (std::int64_t j = 0; j < m; ++j) {
    const auto& a_next = seq[static_cast<std::size_t>(k + j)];
    const double da = space.distance(a_next, z);
    atom_term += da * da;
    const double ds = space.distance(prefix[static_cast<std::size_t>(k + j - 1)], a_next);
    step_term += ds * ds;
  }

  const double rhs = (static_cast<double>(k) / km) * d_sk * d_sk +
                     atom_term / km -
                     (static_cast<double>(k) / (km * km)) * step_term;
  return make_slack(d_skm * d_skm, rhs);
}

// Averaged diameter bound with remainder
//   R = (m^2/(k+1)^2 + 2m/(k+1)) diam^2:
//   (1/m) sum_j d^2(S_k, a_{k+j+1}) <= R + (1/m) sum_j d^2(S_{k+j}, a_{k+j+1}),
// where diam is the exact diameter of the given finite sequence.
template <HadamardSpace S>
InequalitySlack check_diameter_bound(std::span<const typename S::Point> seq,
                                     std::int64_t k, std::int64_t m, const S& space) {
  detail::require_indices(seq, k, m);
  const auto prefix = inductive_prefix_means(seq, space);
  const double diam = set_diameter(seq, space);
  const double mk = static_cast<double>(m) / static_cast<double>(k + 1);
  const double remainder = (mk * mk + 2.0 * mk) * diam * diam;

  double lhs = 0.0;
  double moving = 0.0;
  for (std::int64_t j = 0; j < m; ++j) {
    const auto& a_next = seq[static_cast<std::size_t>(k + j)];
    const double d_fixed = space.distance(prefix[static_cast<std::size_t>(k - 1)], a_next);
    lhs += d_fixed * d_fixed;
    const double d_move = space.distance(prefix[static_cast<std::size_t>(k + j - 1)], a_next);
    moving += d_move * d_move;
  }
  const double inv_m = 1.0 / static_cast<double>(m);
  return make_slack(lhs * inv_m, remainder + moving * inv_m);
}

}  // namespace ergomean

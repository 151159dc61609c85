#pragma once

#include <algorithm>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

#include "ergomean/hadamard.hpp"

namespace ergomean {

// Running state of the inductive mean
//   S_1 = a_1,   S_n = S_{n-1} #_{1/n} a_n.
// diameter_bound is a monotone running lower bound for the diameter of the
// points fed in so far (max distance from the first point); the true
// supremum over an orbit closure is not computable in a stream.
template <HadamardSpace S>
struct InductiveState {
  std::int64_t n = 0;
  typename S::Point current;
  typename S::Point first;
  double diameter_bound = 0.0;
};

template <HadamardSpace S>
InductiveState<S> inductive_begin(const S&, const typename S::Point& a1) {
  return InductiveState<S>{1, a1, a1, 0.0};
}

template <HadamardSpace S>
InductiveState<S> inductive_step(InductiveState<S> state, const typename S::Point& next,
                                 const S& space) {
  if (state.n < 1) throw std::invalid_argument("inductive_step: state not initialized");
  const double t = 1.0 / static_cast<double>(state.n + 1);
  state.current = space.geodesic(state.current, next, t);
  state.n += 1;
  state.diameter_bound = std::max(state.diameter_bound, space.distance(state.first, next));
  return state;
}

template <HadamardSpace S>
typename S::Point inductive_mean(std::span<const typename S::Point> seq, const S& space) {
  if (seq.empty()) throw std::invalid_argument("inductive_mean: empty sequence");
  auto st = inductive_begin(space, seq[0]);
  for (std::size_t i = 1; i < seq.size(); ++i) {
    st = inductive_step(std::move(st), seq[i], space);
  }
  return st.current;
}

// All prefix means S_1, ..., S_len, recomputed exactly. Used by the lemma
// checkers, which need every intermediate mean.
template <HadamardSpace S>
std::vector<typename S::Point> inductive_prefix_means(
    std::span<const typename S::Point> seq, const S& space) {
  if (seq.empty()) throw std::invalid_argument("inductive_prefix_means: empty sequence");
  std::vector<typename S::Point> out;
  out.reserve(seq.size());
  auto st = inductive_begin(space, seq[0]);
  out.push_back(st.current);
  for (std::size_t i = 1; i < seq.size(); ++i) {
    st = inductive_step(std::move(st), seq[i], space);
    out.push_back(st.current);
  }
  return out;
}

// Exact diameter of a finite point set (pairwise max).
template <HadamardSpace S>
double set_diameter(std::span<const typename S::Point> pts, const S& space) {
  double d = 0.0;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    for (std::size_t j = i + 1; j < pts.size(); ++j) {
      d = std::max(d, space.distance(pts[i], pts[j]));
    }
  }
  return d;
}

}  // namespace ergomean

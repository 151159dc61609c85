#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <utility>
#include <vector>

#include "ergomean/hadamard.hpp"

namespace ergomean {

template <typename P>
struct WeightedAtom {
  P point;
  double weight;
};

// Finite probability measure: at least one atom, positive weights,
// normalized to total mass one on construction.
template <typename P>
class EmpiricalMeasure {
 public:
  explicit EmpiricalMeasure(std::vector<WeightedAtom<P>> atoms)
      : atoms_(std::move(atoms)) {
    if (atoms_.empty()) {
      throw std::invalid_argument("EmpiricalMeasure: needs at least one atom");
    }
    double total = 0.0;
    for (const auto& a : atoms_) {
      if (!(a.weight > 0.0)) {
        throw std::invalid_argument("EmpiricalMeasure: weights must be positive");
      }
      total += a.weight;
    }
    for (auto& a : atoms_) a.weight /= total;
  }

  static EmpiricalMeasure uniform(std::vector<P> points) {
    std::vector<WeightedAtom<P>> atoms;
    atoms.reserve(points.size());
    for (auto& p : points) atoms.push_back({std::move(p), 1.0});
    return EmpiricalMeasure(std::move(atoms));
  }

  std::size_t size() const { return atoms_.size(); }
  const WeightedAtom<P>& atom(std::size_t i) const { return atoms_.at(i); }
  auto begin() const { return atoms_.begin(); }
  auto end() const { return atoms_.end(); }

 private:
  std::vector<WeightedAtom<P>> atoms_;
};

template <typename P>
struct BarycenterResult {
  P point;
  double objective = 0.0;
  int iterations = 0;
  bool converged = false;
  double final_step = 0.0;
};

template <TangentHadamardSpace S>
double frechet_objective(const EmpiricalMeasure<typename S::Point>& mu,
                         const typename S::Point& z, const S& space) {
  double obj = 0.0;
  for (const auto& a : mu) {
    const double d = space.distance(a.point, z);
    obj += a.weight * d * d;
  }
  return obj;
}

// Least-squares barycenter (Karcher mean) of a finite measure by the damped
// tangent fixed point
//   z <- exp_z( sum_j w_j log_z(x_j) ),
// halving the step whenever the objective would increase. Initialization is
// the first atom; uniqueness of the minimizer makes the result
// initialization-independent up to the tolerance. Euclidean space is solved
// in closed form. If the iteration budget runs out the result says so
// (converged = false) rather than passing off the last iterate as exact.
template <TangentHadamardSpace S>
BarycenterResult<typename S::Point> karcher_mean(
    const EmpiricalMeasure<typename S::Point>& mu, const S& space,
    double tol = -1.0, int max_iter = 500) {
  using P = typename S::Point;
  if (tol <= 0.0) tol = S::kDefaultBarycenterTol;
  if (max_iter < 1) throw std::invalid_argument("karcher_mean: max_iter must be >= 1");

  if constexpr (requires { S::kClosedFormBarycenter; }) {
    P z = mu.atom(0).weight * mu.atom(0).point;
    for (std::size_t j = 1; j < mu.size(); ++j) {
      z += mu.atom(j).weight * mu.atom(j).point;
    }
    return {z, frechet_objective(mu, z, space), 0, true, 0.0};
  } else {
    P z = mu.atom(0).point;
    double obj = frechet_objective(mu, z, space);

    // Hessian eigenvalues of the objective lie in [2, 2 c] with
    // c = D sqrt(|k|) coth(D sqrt(|k|)), D the farthest-atom distance and k
    // the curvature lower bound; 2/(1 + c) is the classical stable step.
    constexpr double curvature = [] {
      if constexpr (requires { S::kCurvatureLowerBound; }) {
        return S::kCurvatureLowerBound;
      } else {
        return -1.0;
      }
    }();

    const auto mean_tangent = [&](const P& at) {
      typename S::Tangent v = mu.atom(0).weight * space.log(at, mu.atom(0).point);
      for (std::size_t j = 1; j < mu.size(); ++j) {
        v += mu.atom(j).weight * space.log(at, mu.atom(j).point);
      }
      return v;
    };
    const auto max_atom_distance = [&](const P& at) {
      double d = 0.0;
      for (const auto& a : mu) d = std::max(d, space.distance(a.point, at));
      return d;
    };

    for (int it = 1; it <= max_iter; ++it) {
      const typename S::Tangent v = mean_tangent(z);
      const double step = space.tangent_norm(z, v);
      if (step <= tol) return {std::move(z), obj, it - 1, true, step};

      const double reach = max_atom_distance(z) * std::sqrt(-curvature);
      const double c = reach < 1e-8 ? 1.0 : reach / std::tanh(reach);
      double scale = 2.0 / (1.0 + c);
      P cand = space.exp(z, scale * v);
      double cand_obj = frechet_objective(mu, cand, space);
      while (cand_obj > obj + 1e-15 * (1.0 + std::abs(obj)) && scale > 1.0 / 1024.0) {
        scale *= 0.5;
        cand = space.exp(z, scale * v);
        cand_obj = frechet_objective(mu, cand, space);
      }
      z = std::move(cand);
      obj = cand_obj;
    }

    const double final_step = space.tangent_norm(z, mean_tangent(z));
    return {std::move(z), obj, max_iter, final_step <= tol, final_step};
  }
}

}  // namespace ergomean

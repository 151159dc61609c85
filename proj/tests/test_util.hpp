#pragma once

#include <Eigen/Core>
#include <cmath>
#include <vector>

#include "ergomean/euclidean.hpp"
#include "ergomean/hyperboloid.hpp"
#include "ergomean/rng.hpp"
#include "ergomean/sampling.hpp"
#include "ergomean/spd.hpp"

namespace testutil {

inline Eigen::VectorXd vec(std::initializer_list<double> v) {
  Eigen::VectorXd out(static_cast<Eigen::Index>(v.size()));
  Eigen::Index i = 0;
  for (double x : v) out[i++] = x;
  return out;
}

inline ergomean::SpdPoint diag_spd(std::initializer_list<double> v) {
  Eigen::VectorXd d = vec(v);
  Eigen::MatrixXd m = d.asDiagonal();
  return ergomean::SpdPoint(m);
}

// Scalar oracle for commuting (simultaneously diagonal) SPD matrices:
// d(diag(a), diag(b)) = || log a - log b ||_2.
inline double commuting_spd_distance(const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
  double s = 0.0;
  for (Eigen::Index i = 0; i < a.size(); ++i) {
    const double l = std::log(a[i]) - std::log(b[i]);
    s += l * l;
  }
  return std::sqrt(s);
}

// Scalar oracle for the commuting geodesic: elementwise a^{1-t} b^t.
inline Eigen::VectorXd commuting_spd_geodesic(const Eigen::VectorXd& a,
                                              const Eigen::VectorXd& b, double t) {
  Eigen::VectorXd out(a.size());
  for (Eigen::Index i = 0; i < a.size(); ++i) {
    out[i] = std::pow(a[i], 1.0 - t) * std::pow(b[i], t);
  }
  return out;
}

// Random invertible matrix with singular values in [0.5, 2], conditioned for
// congruence-invariance checks.
inline Eigen::MatrixXd sample_invertible(Eigen::Index order, ergomean::Rng& rng) {
  const Eigen::MatrixXd u = ergomean::sample_orthogonal(order, rng);
  const Eigen::MatrixXd v = ergomean::sample_orthogonal(order, rng);
  Eigen::VectorXd s(order);
  for (Eigen::Index i = 0; i < order; ++i) s[i] = rng.uniform(0.5, 2.0);
  return u * s.asDiagonal() * v.transpose();
}

}  // namespace testutil

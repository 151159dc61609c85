#pragma once

#include <Eigen/Core>

#include "ergomean/broken_space.hpp"
#include "ergomean/euclidean.hpp"
#include "ergomean/hyperboloid.hpp"
#include "ergomean/rng.hpp"
#include "ergomean/spd.hpp"

namespace ergomean {

Eigen::VectorXd sample_gaussian_vector(Eigen::Index dim, Rng& rng);

// Haar-like random orthogonal matrix (QR of a Gaussian matrix with the sign
// convention fixed by the R diagonal).
Eigen::MatrixXd sample_orthogonal(Eigen::Index order, Rng& rng);

// Random SPD matrix with eigenvalues in [1, cond_cap], so the condition
// number stays capped by construction and round-off stays below the
// inequality tolerances.
SpdPoint sample_spd(Eigen::Index order, Rng& rng, double cond_cap = 1e4);

HyperboloidPoint sample_hyperboloid(Eigen::Index dim, Rng& rng, double spread = 1.0);

// Uniform hooks so generic test/CLI harnesses can draw points from any space.
inline EuclideanSpace::Point sample_point(const EuclideanSpace& s, Rng& rng) {
  return sample_gaussian_vector(s.dim(), rng);
}
inline SpdPoint sample_point(const SpdSpace& s, Rng& rng) {
  return sample_spd(s.order(), rng);
}
inline HyperboloidPoint sample_point(const HyperboloidSpace& s, Rng& rng) {
  return sample_hyperboloid(s.dim(), rng);
}
inline BrokenGeodesicSpace::Point sample_point(const BrokenGeodesicSpace& s, Rng& rng) {
  return sample_gaussian_vector(s.dim(), rng);
}

}  // namespace ergomean

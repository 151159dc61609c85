#include "ergomean/sampling.hpp"

#include <Eigen/QR>
#include <cmath>
#include <stdexcept>

namespace ergomean {

Eigen::VectorXd sample_gaussian_vector(Eigen::Index dim, Rng& rng) {
  Eigen::VectorXd v(dim);
  for (Eigen::Index i = 0; i < dim; ++i) v[i] = rng.normal();
  return v;
}

Eigen::MatrixXd sample_orthogonal(Eigen::Index order, Rng& rng) {
  Eigen::MatrixXd g(order, order);
  for (Eigen::Index i = 0; i < order; ++i) {
    for (Eigen::Index j = 0; j < order; ++j) g(i, j) = rng.normal();
  }
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(g);
  Eigen::MatrixXd q = qr.householderQ();
  const Eigen::MatrixXd r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (Eigen::Index j = 0; j < order; ++j) {
    if (r(j, j) < 0.0) q.col(j) *= -1.0;
  }
  return q;
}

SpdPoint sample_spd(Eigen::Index order, Rng& rng, double cond_cap) {
  if (!(cond_cap >= 1.0)) {
    throw std::invalid_argument("sample_spd: cond_cap must be >= 1");
  }
  const Eigen::MatrixXd q = sample_orthogonal(order, rng);
  Eigen::VectorXd eigs(order);
  for (Eigen::Index i = 0; i < order; ++i) {
    eigs[i] = std::pow(cond_cap, rng.uniform01());
  }
  return SpdPoint(q * eigs.asDiagonal() * q.transpose());
}

HyperboloidPoint sample_hyperboloid(Eigen::Index dim, Rng& rng, double spread) {
  return HyperboloidPoint::lift(spread * sample_gaussian_vector(dim, rng));
}

}  // namespace ergomean

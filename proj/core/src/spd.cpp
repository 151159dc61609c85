#include "ergomean/spd.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <stdexcept>

namespace ergomean {

namespace {

// Eigenvalues below this are treated as a rejected (non-SPD) point rather
// than clamped; silent regularization would corrupt convergence traces.
constexpr double kRejectEigenvalue = 1e-300;

Eigen::MatrixXd symmetrized(const Eigen::MatrixXd& m) {
  return 0.5 * (m + m.transpose());
}

struct EigenPair {
  Eigen::MatrixXd vectors;
  Eigen::VectorXd values;
};

EigenPair eigh(const Eigen::MatrixXd& sym) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(sym);
  if (solver.info() != Eigen::Success) {
    throw std::runtime_error("spd: symmetric eigendecomposition failed");
  }
  return {solver.eigenvectors(), solver.eigenvalues()};
}

template <typename F>
Eigen::MatrixXd apply_spectral(const Eigen::MatrixXd& sym, F&& f,
                               bool require_positive) {
  EigenPair e = eigh(sym);
  Eigen::VectorXd mapped(e.values.size());
  for (Eigen::Index i = 0; i < e.values.size(); ++i) {
    if (require_positive && e.values[i] <= kRejectEigenvalue) {
      throw std::runtime_error(
          "spd: operand lost positive definiteness (eigenvalue " +
          std::to_string(e.values[i]) + ")");
    }
    mapped[i] = f(e.values[i]);
  }
  return symmetrized(e.vectors * mapped.asDiagonal() * e.vectors.transpose());
}

}  // namespace

namespace spdfn {

Eigen::MatrixXd sqrt(const Eigen::MatrixXd& spd) {
  return apply_spectral(spd, [](double v) { return std::sqrt(v); }, true);
}

Eigen::MatrixXd inv_sqrt(const Eigen::MatrixXd& spd) {
  return apply_spectral(spd, [](double v) { return 1.0 / std::sqrt(v); }, true);
}

Eigen::MatrixXd log(const Eigen::MatrixXd& spd) {
  return apply_spectral(spd, [](double v) { return std::log(v); }, true);
}

Eigen::MatrixXd exp(const Eigen::MatrixXd& sym) {
  return apply_spectral(sym, [](double v) { return std::exp(v); }, false);
}

Eigen::MatrixXd power(const Eigen::MatrixXd& spd, double t) {
  return apply_spectral(spd, [t](double v) { return std::pow(v, t); }, true);
}

double min_eigenvalue(const Eigen::MatrixXd& sym) {
  return eigh(sym).values.minCoeff();
}

}  // namespace spdfn

SpdPoint::SpdPoint(const Eigen::MatrixXd& m) {
  if (m.rows() != m.cols() || m.rows() < 1) {
    throw std::domain_error("SpdPoint: matrix must be square and non-empty");
  }
  if (!m.allFinite()) {
    throw std::domain_error("SpdPoint: non-finite entries");
  }
  m_ = symmetrized(m);
  if (spdfn::min_eigenvalue(m_) <= kRejectEigenvalue) {
    throw std::domain_error("SpdPoint: matrix is not strictly positive definite");
  }
}

SpdPoint spd_point_unchecked(Eigen::MatrixXd m) {
  return SpdPoint(std::move(m), SpdPoint::Trusted{});
}

SpdSpace::SpdSpace(Eigen::Index order) : order_(order) {
  if (order < 1) throw std::invalid_argument("SpdSpace: order must be >= 1");
}

void SpdSpace::check_order(const Point& p) const {
  if (p.order() != order_) throw std::domain_error("SpdSpace: wrong matrix order");
}

double SpdSpace::distance(const Point& a, const Point& b) const {
  check_order(a);
  check_order(b);
  if ((a.matrix().array() == b.matrix().array()).all()) return 0.0;
  const Eigen::MatrixXd w = spdfn::inv_sqrt(a.matrix());
  const Eigen::MatrixXd m = symmetrized(w * b.matrix() * w);
  EigenPair e = eigh(m);
  double sum = 0.0;
  for (Eigen::Index i = 0; i < e.values.size(); ++i) {
    if (e.values[i] <= kRejectEigenvalue) {
      throw std::runtime_error("spd distance: congruence lost positivity");
    }
    const double l = std::log(e.values[i]);
    sum += l * l;
  }
  return std::sqrt(sum);
}

SpdSpace::Point SpdSpace::geodesic(const Point& a, const Point& b, double t) const {
  detail::require_unit_interval(t);
  check_order(a);
  check_order(b);
  if (t == 0.0) return a;
  if (t == 1.0) return b;
  EigenPair ea = eigh(a.matrix());
  Eigen::VectorXd sqrt_vals(ea.values.size());
  Eigen::VectorXd inv_sqrt_vals(ea.values.size());
  for (Eigen::Index i = 0; i < ea.values.size(); ++i) {
    if (ea.values[i] <= kRejectEigenvalue) {
      throw std::runtime_error("spd geodesic: base point lost positivity");
    }
    sqrt_vals[i] = std::sqrt(ea.values[i]);
    inv_sqrt_vals[i] = 1.0 / sqrt_vals[i];
  }
  const Eigen::MatrixXd r =
      ea.vectors * sqrt_vals.asDiagonal() * ea.vectors.transpose();
  const Eigen::MatrixXd w =
      ea.vectors * inv_sqrt_vals.asDiagonal() * ea.vectors.transpose();
  const Eigen::MatrixXd inner = spdfn::power(symmetrized(w * b.matrix() * w), t);
  return spd_point_unchecked(symmetrized(r * inner * r));
}

SpdSpace::Tangent SpdSpace::log(const Point& base, const Point& target) const {
  check_order(base);
  check_order(target);
  const Eigen::MatrixXd r = spdfn::sqrt(base.matrix());
  const Eigen::MatrixXd w = spdfn::inv_sqrt(base.matrix());
  const Eigen::MatrixXd inner = spdfn::log(symmetrized(w * target.matrix() * w));
  return symmetrized(r * inner * r);
}

SpdSpace::Point SpdSpace::exp(const Point& base, const Tangent& v) const {
  check_order(base);
  if (v.rows() != order_ || v.cols() != order_) {
    throw std::domain_error("SpdSpace: wrong tangent order");
  }
  const Eigen::MatrixXd r = spdfn::sqrt(base.matrix());
  const Eigen::MatrixXd w = spdfn::inv_sqrt(base.matrix());
  const Eigen::MatrixXd inner = spdfn::exp(symmetrized(w * v * w));
  return spd_point_unchecked(symmetrized(r * inner * r));
}

double SpdSpace::tangent_norm(const Point& base, const Tangent& v) const {
  check_order(base);
  const Eigen::MatrixXd w = spdfn::inv_sqrt(base.matrix());
  return symmetrized(w * v * w).norm();
}

}  // namespace ergomean

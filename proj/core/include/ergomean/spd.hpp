#pragma once

#include <Eigen/Core>
#include <string>
#include <utility>

#include "ergomean/hadamard.hpp"

namespace ergomean {

class SpdSpace;

// Strictly positive definite symmetric matrix. The stored matrix is
// symmetrized on construction; matrices whose smallest eigenvalue is not
// strictly positive are rejected with a domain error, never regularized.
class SpdPoint {
 public:
  explicit SpdPoint(const Eigen::MatrixXd& m);

  const Eigen::MatrixXd& matrix() const { return m_; }
  Eigen::Index order() const { return m_.rows(); }

 private:
  struct Trusted {};
  SpdPoint(Eigen::MatrixXd m, Trusted) : m_(std::move(m)) {}

  friend class SpdSpace;
  friend SpdPoint spd_point_unchecked(Eigen::MatrixXd m);

  Eigen::MatrixXd m_;
};

// Fast-path constructor for matrices already known to be SPD (outputs of
// congruences of SPD matrices and the like). Skips the eigenvalue check.
SpdPoint spd_point_unchecked(Eigen::MatrixXd m);

// The open cone of SPD matrices with the affine-invariant geometry:
//   d(A, B)  = || log(A^{-1/2} B A^{-1/2}) ||_F
//   A #_t B  = A^{1/2} (A^{-1/2} B A^{-1/2})^t A^{1/2}
// All matrix functions go through symmetric eigendecompositions.
class SpdSpace {
 public:
  using Point = SpdPoint;
  using Tangent = Eigen::MatrixXd;  // symmetric matrices

  static constexpr double kDefaultBarycenterTol = 1e-8;
  // Sectional curvature of the affine-invariant geometry lies in [-1/2, 0].
  static constexpr double kCurvatureLowerBound = -0.5;

  explicit SpdSpace(Eigen::Index order);

  Eigen::Index order() const { return order_; }
  std::string name() const { return "spd:" + std::to_string(order_); }

  double distance(const Point& a, const Point& b) const;
  bool same_representation(const Point& a, const Point& b) const {
    return a.order() == b.order() && (a.matrix().array() == b.matrix().array()).all();
  }
  Point geodesic(const Point& a, const Point& b, double t) const;

  Tangent log(const Point& base, const Point& target) const;
  Point exp(const Point& base, const Tangent& v) const;
  double tangent_norm(const Point& base, const Tangent& v) const;

 private:
  void check_order(const Point& p) const;
  Eigen::Index order_;
};

// Eigendecomposition-backed symmetric matrix functions shared by SpdSpace,
// the samplers, and tests. Inputs must be symmetric; `spd` arguments must be
// positive definite (a non-positive spectrum raises a numeric error).
namespace spdfn {
Eigen::MatrixXd sqrt(const Eigen::MatrixXd& spd);
Eigen::MatrixXd inv_sqrt(const Eigen::MatrixXd& spd);
Eigen::MatrixXd log(const Eigen::MatrixXd& spd);
Eigen::MatrixXd exp(const Eigen::MatrixXd& sym);
Eigen::MatrixXd power(const Eigen::MatrixXd& spd, double t);
double min_eigenvalue(const Eigen::MatrixXd& sym);
}  // namespace spdfn

}  // namespace ergomean

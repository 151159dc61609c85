#pragma once

#include <Eigen/Core>
#include <string>
#include <utility>

#include "ergomean/hadamard.hpp"

namespace ergomean {

// Minkowski bilinear form <a,b> = -a0 b0 + sum_i ai bi on R^{1,d}.
double minkowski_dot(const Eigen::VectorXd& a, const Eigen::VectorXd& b);

// Point on the upper sheet { <x,x> = -1, x0 > 0 } of the unit hyperboloid.
// The timelike coordinate is recomputed from the spatial part after every
// arithmetic operation, so the constraint holds to machine precision.
class HyperboloidPoint {
 public:
  explicit HyperboloidPoint(const Eigen::VectorXd& ambient);

  // Exact lift of a spatial vector: x0 = sqrt(1 + |s|^2).
  static HyperboloidPoint lift(const Eigen::VectorXd& spatial);

  const Eigen::VectorXd& coords() const { return x_; }
  Eigen::VectorXd spatial() const { return x_.tail(x_.size() - 1); }
  Eigen::Index spatial_dim() const { return x_.size() - 1; }

 private:
  struct Lifted {};
  HyperboloidPoint(Eigen::VectorXd x, Lifted) : x_(std::move(x)) {}

  Eigen::VectorXd x_;
};

// Hyperbolic d-space in the hyperboloid model:
//   d(x, y) = arccosh(-<x,y>), computed as 2 asinh(|x-y|_M / 2) which stays
//   accurate for nearby points.
class HyperboloidSpace {
 public:
  using Point = HyperboloidPoint;
  using Tangent = Eigen::VectorXd;  // Minkowski-orthogonal to the base point

  static constexpr double kDefaultBarycenterTol = 1e-8;
  static constexpr double kCurvatureLowerBound = -1.0;

  explicit HyperboloidSpace(Eigen::Index dim);

  Eigen::Index dim() const { return dim_; }
  std::string name() const { return "hyperboloid:" + std::to_string(dim_); }

  double distance(const Point& a, const Point& b) const;
  bool same_representation(const Point& a, const Point& b) const {
    return a.coords().size() == b.coords().size() &&
           (a.coords().array() == b.coords().array()).all();
  }
  Point geodesic(const Point& a, const Point& b, double t) const;

  Tangent log(const Point& base, const Point& target) const;
  Point exp(const Point& base, const Tangent& v) const;
  double tangent_norm(const Point& base, const Tangent& v) const;

 private:
  void check_dim(const Point& p) const;
  Eigen::Index dim_;
};

}  // namespace ergomean

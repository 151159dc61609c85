#pragma once

#include <Eigen/Core>
#include <stdexcept>
#include <string>

#include "ergomean/hadamard.hpp"

namespace ergomean {

// R^d with the usual distance; geodesics are the line segments. Inductive
// means reduce to arithmetic means here, which makes this space the oracle
// for most cross-space tests.
class EuclideanSpace {
 public:
  using Point = Eigen::VectorXd;
  using Tangent = Eigen::VectorXd;

  static constexpr bool kClosedFormBarycenter = true;
  static constexpr double kCurvatureLowerBound = 0.0;
  static constexpr double kDefaultBarycenterTol = 1e-10;

  explicit EuclideanSpace(Eigen::Index dim) : dim_(dim) {
    if (dim < 1) throw std::invalid_argument("EuclideanSpace: dimension must be >= 1");
  }

  Eigen::Index dim() const { return dim_; }
  std::string name() const { return "euclid:" + std::to_string(dim_); }

  void validate(const Point& p) const {
    if (p.size() != dim_) throw std::domain_error("EuclideanSpace: wrong dimension");
    if (!p.allFinite()) throw std::domain_error("EuclideanSpace: non-finite coordinates");
  }

  double distance(const Point& x, const Point& y) const {
    check_pair(x, y);
    return (x - y).norm();
  }

  bool same_representation(const Point& a, const Point& b) const {
    return a.size() == b.size() && (a.array() == b.array()).all();
  }

  Point geodesic(const Point& x, const Point& y, double t) const {
    detail::require_unit_interval(t);
    check_pair(x, y);
    if (t == 0.0) return x;
    if (t == 1.0) return y;
    return (1.0 - t) * x + t * y;
  }

  Tangent log(const Point& base, const Point& target) const {
    check_pair(base, target);
    return target - base;
  }

  Point exp(const Point& base, const Tangent& v) const {
    check_pair(base, v);
    return base + v;
  }

  double tangent_norm(const Point&, const Tangent& v) const { return v.norm(); }

 private:
  void check_pair(const Point& a, const Point& b) const {
    if (a.size() != dim_ || b.size() != dim_) {
      throw std::domain_error("EuclideanSpace: wrong dimension");
    }
  }

  Eigen::Index dim_;
};

}  // namespace ergomean

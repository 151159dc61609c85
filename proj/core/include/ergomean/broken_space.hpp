#pragma once

#include <Eigen/Core>
#include <stdexcept>
#include <string>

#include "ergomean/hadamard.hpp"

namespace ergomean {

// Negative control: straight-line distance but a quadratic-in-t curve where
// the geodesic should be. Endpoint identities still hold exactly, so only
// the interior inequality checks can expose it. Used to verify that the
// checker suite actually fails on a non-geodesic interpolation.
class BrokenGeodesicSpace {
 public:
  using Point = Eigen::VectorXd;

  explicit BrokenGeodesicSpace(Eigen::Index dim) : dim_(dim) {
    if (dim < 1) throw std::invalid_argument("BrokenGeodesicSpace: dimension must be >= 1");
  }

  Eigen::Index dim() const { return dim_; }
  std::string name() const { return "broken:" + std::to_string(dim_); }

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
    return x + (t * t) * (y - x);
  }

 private:
  void check_pair(const Point& a, const Point& b) const {
    if (a.size() != dim_ || b.size() != dim_) {
      throw std::domain_error("BrokenGeodesicSpace: wrong dimension");
    }
  }

  Eigen::Index dim_;
};

}  // namespace ergomean

#include "ergomean/hyperboloid.hpp"

#include <cmath>
#include <stdexcept>

namespace ergomean {

namespace {
// How far an ambient input may drift from <x,x> = -1 before we refuse to
// interpret it as a hyperboloid point.
constexpr double kConstraintEntryTol = 1e-6;
constexpr double kTinyDistance = 1e-12;
}  // namespace

double minkowski_dot(const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
  if (a.size() != b.size() || a.size() < 2) {
    throw std::domain_error("minkowski_dot: mismatched or degenerate vectors");
  }
  return -a[0] * b[0] + a.tail(a.size() - 1).dot(b.tail(b.size() - 1));
}

HyperboloidPoint HyperboloidPoint::lift(const Eigen::VectorXd& spatial) {
  if (spatial.size() < 1 || !spatial.allFinite()) {
    throw std::domain_error("HyperboloidPoint: invalid spatial part");
  }
  Eigen::VectorXd x(spatial.size() + 1);
  x[0] = std::sqrt(1.0 + spatial.squaredNorm());
  x.tail(spatial.size()) = spatial;
  return HyperboloidPoint(std::move(x), Lifted{});
}

HyperboloidPoint::HyperboloidPoint(const Eigen::VectorXd& ambient) {
  if (ambient.size() < 2 || !ambient.allFinite()) {
    throw std::domain_error("HyperboloidPoint: need finite ambient coords (x0, ..., xd)");
  }
  if (!(ambient[0] > 0.0)) {
    throw std::domain_error("HyperboloidPoint: x0 must be positive (upper sheet)");
  }
  const double q = minkowski_dot(ambient, ambient);
  if (std::abs(q + 1.0) > kConstraintEntryTol) {
    throw std::domain_error("HyperboloidPoint: <x,x> != -1 beyond tolerance");
  }
  x_ = lift(ambient.tail(ambient.size() - 1)).coords();
}

HyperboloidSpace::HyperboloidSpace(Eigen::Index dim) : dim_(dim) {
  if (dim < 1) throw std::invalid_argument("HyperboloidSpace: dimension must be >= 1");
}

void HyperboloidSpace::check_dim(const Point& p) const {
  if (p.spatial_dim() != dim_) {
    throw std::domain_error("HyperboloidSpace: wrong dimension");
  }
}

double HyperboloidSpace::distance(const Point& a, const Point& b) const {
  check_dim(a);
  check_dim(b);
  if ((a.coords().array() == b.coords().array()).all()) return 0.0;
  // <x-y, x-y> = 2(-<x,y> - 1) >= 0 is spacelike; this form avoids the
  // cancellation in arccosh(-<x,y>) near 1.
  const Eigen::VectorXd diff = a.coords() - b.coords();
  const double q = std::max(0.0, minkowski_dot(diff, diff));
  return 2.0 * std::asinh(0.5 * std::sqrt(q));
}

HyperboloidSpace::Point HyperboloidSpace::geodesic(const Point& a, const Point& b,
                                                   double t) const {
  detail::require_unit_interval(t);
  check_dim(a);
  check_dim(b);
  if (t == 0.0) return a;
  if (t == 1.0) return b;
  const double d = distance(a, b);
  if (d < kTinyDistance) {
    return Point::lift((1.0 - t) * a.spatial() + t * b.spatial());
  }
  const double sinh_d = std::sinh(d);
  const Eigen::VectorXd ambient = (std::sinh((1.0 - t) * d) / sinh_d) * a.coords() +
                                  (std::sinh(t * d) / sinh_d) * b.coords();
  return Point::lift(ambient.tail(ambient.size() - 1));
}

HyperboloidSpace::Tangent HyperboloidSpace::log(const Point& base,
                                                const Point& target) const {
  check_dim(base);
  check_dim(target);
  const double d = distance(base, target);
  if (d < kTinyDistance) return target.coords() - base.coords();
  const Eigen::VectorXd diff = base.coords() - target.coords();
  const double cosh_d = 1.0 + 0.5 * std::max(0.0, minkowski_dot(diff, diff));
  return (d / std::sinh(d)) * (target.coords() - cosh_d * base.coords());
}

HyperboloidSpace::Point HyperboloidSpace::exp(const Point& base,
                                              const Tangent& v) const {
  check_dim(base);
  if (v.size() != base.coords().size()) {
    throw std::domain_error("HyperboloidSpace: wrong tangent dimension");
  }
  const double n = tangent_norm(base, v);
  if (n < kTinyDistance) {
    const Eigen::VectorXd ambient = base.coords() + v;
    return Point::lift(ambient.tail(ambient.size() - 1));
  }
  const Eigen::VectorXd ambient =
      std::cosh(n) * base.coords() + (std::sinh(n) / n) * v;
  return Point::lift(ambient.tail(ambient.size() - 1));
}

double HyperboloidSpace::tangent_norm(const Point& base, const Tangent& v) const {
  check_dim(base);
  return std::sqrt(std::max(0.0, minkowski_dot(v, v)));
}

}  // namespace ergomean

#pragma once

#include <algorithm>
#include <cmath>
#include <concepts>
#include <stdexcept>
#include <string>

namespace ergomean {

// A Hadamard (complete CAT(0)) space exposed through the two primitives every
// algorithm here needs: the metric and constant-speed geodesic interpolation
// x #_t y for t in [0, 1].
template <typename S>
concept HadamardSpace = requires(const S& s, const typename S::Point& x,
                                 const typename S::Point& y, double t) {
  { s.distance(x, y) } -> std::convertible_to<double>;
  { s.geodesic(x, y, t) } -> std::convertible_to<typename S::Point>;
  { s.name() } -> std::convertible_to<std::string>;
};

// Spaces that additionally provide the exponential/logarithm pair of their
// geometry, used by the barycenter solver. `log(x, y)` is the tangent at x
// pointing to y with Riemannian length distance(x, y); `exp` inverts it.
template <typename S>
concept TangentHadamardSpace =
    HadamardSpace<S> &&
    requires(const S& s, const typename S::Point& x, const typename S::Point& y,
             const typename S::Tangent& v) {
      { s.log(x, y) } -> std::convertible_to<typename S::Tangent>;
      { s.exp(x, v) } -> std::convertible_to<typename S::Point>;
      { s.tangent_norm(x, v) } -> std::convertible_to<double>;
    };

// Outcome of one inequality evaluation. The convention is always lhs <= rhs,
// so slack = rhs - lhs, and the check holds when the slack is not below -tol.
struct InequalitySlack {
  double lhs = 0.0;
  double rhs = 0.0;
  double slack = 0.0;
  double tol = 0.0;
  bool holds = false;
};

// Round-off in the eigendecompositions scales with operand magnitude, so the
// tolerance is relative to the right-hand side.
inline double slack_tolerance(double rhs) {
  return std::max(1e-8, 1e-8 * std::abs(rhs));
}

inline InequalitySlack make_slack(double lhs, double rhs) {
  InequalitySlack s;
  s.lhs = lhs;
  s.rhs = rhs;
  s.slack = rhs - lhs;
  s.tol = slack_tolerance(rhs);
  s.holds = s.slack >= -s.tol;
  return s;
}

namespace detail {
inline void require_unit_interval(double t) {
  if (!(t >= 0.0 && t <= 1.0)) {
    throw std::invalid_argument("interpolation parameter t must lie in [0, 1]");
  }
}
}  // namespace detail

// Semiparallelogram law. With m the metric midpoint of x and y:
//   d^2(m, z) <= d^2(x, z)/2 + d^2(y, z)/2 - d^2(x, y)/4.
template <HadamardSpace S>
InequalitySlack check_semiparallelogram(const S& space, const typename S::Point& x,
                                        const typename S::Point& y,
                                        const typename S::Point& z) {
  const auto m = space.geodesic(x, y, 0.5);
  const double dmz = space.distance(m, z);
  const double dxz = space.distance(x, z);
  const double dyz = space.distance(y, z);
  const double dxy = space.distance(x, y);
  return make_slack(dmz * dmz,
                    0.5 * dxz * dxz + 0.5 * dyz * dyz - 0.25 * dxy * dxy);
}

// Convexity of the squared distance along geodesics:
//   d^2(x #_t y, z) <= (1-t) d^2(x, z) + t d^2(y, z) - t(1-t) d^2(x, y).
// Reduces to the semiparallelogram law at t = 1/2.
template <HadamardSpace S>
InequalitySlack check_geodesic_convexity(const S& space, const typename S::Point& x,
                                         const typename S::Point& y,
                                         const typename S::Point& z, double t) {
  detail::require_unit_interval(t);
  const auto xt = space.geodesic(x, y, t);
  const double dtz = space.distance(xt, z);
  const double dxz = space.distance(x, z);
  const double dyz = space.distance(y, z);
  const double dxy = space.distance(x, y);
  return make_slack(dtz * dtz, (1.0 - t) * dxz * dxz + t * dyz * dyz -
                                   t * (1.0 - t) * dxy * dxy);
}

// Joint convexity of the distance between two geodesics:
//   d(a #_t a', b #_t b') <= (1-t) d(a, b) + t d(a', b').
template <HadamardSpace S>
InequalitySlack check_convexity_of_distance(const S& space, const typename S::Point& a,
                                            const typename S::Point& a_prime,
                                            const typename S::Point& b,
                                            const typename S::Point& b_prime,
                                            double t) {
  detail::require_unit_interval(t);
  const double lhs =
      space.distance(space.geodesic(a, a_prime, t), space.geodesic(b, b_prime, t));
  return make_slack(lhs, (1.0 - t) * space.distance(a, b) +
                             t * space.distance(a_prime, b_prime));
}

// Quadruple comparison characteristic of non-positive curvature:
//   d^2(x1,x3) + d^2(x2,x4) <= d^2(x2,x3) + d^2(x1,x4) + 2 d(x1,x2) d(x3,x4).
template <HadamardSpace S>
InequalitySlack check_reshetnyak(const S& space, const typename S::Point& x1,
                                 const typename S::Point& x2,
                                 const typename S::Point& x3,
                                 const typename S::Point& x4) {
  const double d13 = space.distance(x1, x3);
  const double d24 = space.distance(x2, x4);
  const double d23 = space.distance(x2, x3);
  const double d14 = space.distance(x1, x4);
  const double d12 = space.distance(x1, x2);
  const double d34 = space.distance(x3, x4);
  return make_slack(d13 * d13 + d24 * d24,
                    d23 * d23 + d14 * d14 + 2.0 * d12 * d34);
}

}  // namespace ergomean

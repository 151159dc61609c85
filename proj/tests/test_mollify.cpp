#include <doctest.h>

#include <Eigen/Core>
#include <cmath>
#include <numbers>
#include <vector>

#include "ergomean/euclidean.hpp"
#include "ergomean/kronecker.hpp"
#include "ergomean/mollifier.hpp"
#include "ergomean/rng.hpp"
#include "ergomean/sampling.hpp"
#include "ergomean/spd.hpp"
#include "test_util.hpp"

using namespace ergomean;
using testutil::vec;

namespace {

TorusRotation::Element torus1(double x) { return vec({x}); }

Eigen::MatrixXd unit_symmetric_direction() {
  Eigen::MatrixXd w(3, 3);
  w << 0.6, 0.35, 0.1, 0.35, -0.2, 0.45, 0.1, 0.45, 0.3;
  w = 0.5 * (w + w.transpose());
  return w / w.norm();
}

// Two-piece SPD step: identity on [0, cut), exp(jump * W) on [cut, 1), so the
// jump has exactly the requested metric size.
OrbitFunction<TorusRotation::Element, SpdPoint> step_spd_function(double cut,
                                                                  double jump) {
  const SpdPoint low = testutil::diag_spd({1.0, 1.0, 1.0});
  const SpdPoint high = spd_point_unchecked(spdfn::exp(jump * unit_symmetric_direction()));
  return {.evaluate =
              [cut, low, high](const TorusRotation::Element& g) {
                return g[0] < cut ? low : high;
              },
          .regularity = Regularity::stepwise};
}

OrbitFunction<TorusRotation::Element, Eigen::VectorXd> identity_function() {
  return {.evaluate = [](const TorusRotation::Element& g) { return vec({g[0]}); },
          .regularity = Regularity::l1};
}

OrbitFunction<TorusRotation::Element, Eigen::VectorXd> sin_function() {
  return {.evaluate =
              [](const TorusRotation::Element& g) {
                return vec({std::sin(2.0 * std::numbers::pi * g[0])});
              },
          .regularity = Regularity::continuous};
}

}  // namespace

TEST_CASE("mollifier config validation") {
  CHECK_THROWS_AS(validate(MollifierConfig{.eta = 0.0}), std::invalid_argument);
  CHECK_THROWS_AS(validate(MollifierConfig{.eta = 0.1, .samples_per_eval = 0}),
                  std::invalid_argument);
}

TEST_CASE("mollify: constant functions are fixed points") {
  SpdSpace spd(3);
  TorusRotation golden(vec({golden_rotation()}), true);
  Rng rng(401);
  const auto p = sample_point(spd, rng);
  auto A = constant_orbit_function<TorusRotation::Element, SpdPoint>(p);
  for (double eta : {0.3, 0.05, 0.007}) {
    const auto m = mollify(A, MollifierConfig{.eta = eta}, torus1(0.42), golden, spd);
    CHECK(spd.distance(m, p) <= 1e-10);
  }
}

TEST_CASE("mollify: sliding window average of the identity embedding") {
  EuclideanSpace r1(1);
  TorusRotation golden(vec({golden_rotation()}), true);
  const auto A = identity_function();
  // Interior point, window does not cross a wrap point: the symmetric grid
  // averages to g0 itself.
  const auto m = mollify(A, MollifierConfig{.eta = 0.01, .samples_per_eval = 64},
                         torus1(0.3), golden, r1);
  CHECK(std::abs(m[0] - 0.3) <= 1e-6);
}

TEST_CASE("mollify: step function away from the jumps is unchanged") {
  SpdSpace spd(3);
  TorusRotation golden(vec({golden_rotation()}), true);
  const auto A = step_spd_function(0.37, 1.0);
  const auto m = mollify(A, MollifierConfig{.eta = 0.1, .samples_per_eval = 64},
                         torus1(0.7), golden, spd);
  CHECK(spd.distance(m, A.evaluate(torus1(0.7))) <= 1e-9);
}

TEST_CASE("mollified function: constants, Lipschitz bound, step plateaus") {
  TorusRotation golden(vec({golden_rotation()}), true);
  {
    EuclideanSpace r1(1);
    auto A = constant_orbit_function<TorusRotation::Element, Eigen::VectorXd>(vec({2.5}));
    auto Am = mollified_function(A, MollifierConfig{.eta = 0.1}, golden, r1);
    CHECK(Am.regularity == Regularity::continuous);
    CHECK(std::abs(Am.evaluate(torus1(0.9))[0] - 2.5) <= 1e-12);
  }
  {
    // d(A_eta(g1), A_eta(g2)) <= phi(g2 - g1) / m(U_eta), both sides by
    // quadrature.
    EuclideanSpace r1(1);
    const auto A = sin_function();
    const MollifierConfig cfg{.eta = 0.1, .samples_per_eval = 128};
    auto Am = mollified_function(A, cfg, golden, r1);
    const auto g1 = torus1(0.2);
    const auto g2 = torus1(0.25);
    const double lhs = r1.distance(Am.evaluate(g1), Am.evaluate(g2));
    const auto h = golden.add(g2, golden.negate(g1));
    const double rhs =
        continuity_modulus(A, h, 1, 10000, golden, r1) / golden.neighborhood_measure(cfg.eta);
    CHECK(lhs <= rhs + 1e-6);
  }
  {
    SpdSpace spd(3);
    const auto A = step_spd_function(0.37, 1.0);
    auto Am = mollified_function(A, MollifierConfig{.eta = 0.05}, golden, spd);
    // Max deviation over grid points far from both discontinuities.
    double max_dev = 0.0;
    for (int i = 0; i < 40; ++i) {
      const double g = 0.45 + 0.4 * i / 40.0;  // stays clear of 0.37 and 1.0
      max_dev = std::max(max_dev,
                         spd.distance(Am.evaluate(torus1(g)), A.evaluate(torus1(g))));
    }
    CHECK(max_dev <= 1e-9);
  }
}

TEST_CASE("continuity modulus: identity, linear, and indicator oracles") {
  EuclideanSpace r1(1);
  TorusRotation golden(vec({golden_rotation()}), true);
  const auto A = identity_function();

  CHECK(continuity_modulus(A, torus1(0.0), 1, 5000, golden, r1) == 0.0);

  // Identity embedding: |A(g) - A(g+h)| is h off the wrap set and 1-h on it,
  // so phi(h) = h(1-h) + h(1-h) = 2h(1-h).
  const double h = 0.1;
  const double expected = 2.0 * h * (1.0 - h);
  CHECK(continuity_modulus(A, torus1(h), 1, 20000, golden, r1) ==
        doctest::Approx(expected).epsilon(0.01));

  // Indicator of [0.25, 0.75) of height D: two boundary strips of measure h,
  // so phi_1(h) = 2hD and phi_2(h) = 2hD^2.
  const double height = 3.0;
  OrbitFunction<TorusRotation::Element, Eigen::VectorXd> indicator{
      .evaluate =
          [height](const TorusRotation::Element& g) {
            return vec({(g[0] >= 0.25 && g[0] < 0.75) ? height : 0.0});
          },
      .regularity = Regularity::stepwise};
  CHECK(continuity_modulus(indicator, torus1(0.02), 1, 20000, golden, r1) ==
        doctest::Approx(2.0 * 0.02 * height).epsilon(0.02));
  CHECK(continuity_modulus(indicator, torus1(0.02), 2, 20000, golden, r1) ==
        doctest::Approx(2.0 * 0.02 * height * height).epsilon(0.02));
  CHECK_THROWS_AS(continuity_modulus(indicator, torus1(0.02), 3, 100, golden, r1),
                  std::invalid_argument);
}

TEST_CASE("continuity modulus: spot check for continuously tagged functions") {
  // A function tagged continuous must have a modulus that shrinks with h.
  EuclideanSpace r1(1);
  TorusRotation golden(vec({golden_rotation()}), true);
  const auto A = sin_function();
  REQUIRE(A.regularity == Regularity::continuous);
  double prev = std::numeric_limits<double>::infinity();
  for (double h : {0.1, 0.01, 0.001}) {
    const double phi = continuity_modulus(A, torus1(h), 1, 10000, golden, r1);
    CHECK(phi < prev);
    CHECK(phi <= 2.0 * std::numbers::pi * h + 1e-6);  // Lipschitz bound for sin
    prev = phi;
  }
}

TEST_CASE("l1 distance: trivial pairs and mollification trend") {
  TorusRotation golden(vec({golden_rotation()}), true);
  {
    EuclideanSpace r1(1);
    const auto A = sin_function();
    CHECK(l1_distance(A, A, 3000, golden, r1) == 0.0);
    auto P = constant_orbit_function<TorusRotation::Element, Eigen::VectorXd>(vec({1.0}));
    auto Q = constant_orbit_function<TorusRotation::Element, Eigen::VectorXd>(vec({4.0}));
    CHECK(l1_distance(P, Q, 100, golden, r1) == doctest::Approx(3.0));
  }
  {
    SpdSpace spd(3);
    const double jump = 1.0;
    const auto A = step_spd_function(0.37, jump);
    std::vector<double> values;
    for (double eta : {0.2, 0.1, 0.05, 0.01}) {
      auto Am = mollified_function(A, MollifierConfig{.eta = eta, .samples_per_eval = 64},
                                   golden, spd);
      values.push_back(l1_distance(A, Am, 4000, golden, spd));
    }
    for (std::size_t i = 1; i < values.size(); ++i) CHECK(values[i] < values[i - 1]);
    CHECK(values.back() <= 0.02 * jump);
  }
}

TEST_CASE("mollify of a smooth function converges with shrinking eta") {
  EuclideanSpace r1(1);
  TorusRotation golden(vec({golden_rotation()}), true);
  const auto A = sin_function();
  std::vector<double> max_dev;
  for (double eta : {0.2, 0.1, 0.05, 0.01}) {
    auto Am = mollified_function(A, MollifierConfig{.eta = eta, .samples_per_eval = 128},
                                 golden, r1);
    double dev = 0.0;
    for (int i = 0; i < 200; ++i) {
      const auto g = torus1((i + 0.5) / 200.0);
      dev = std::max(dev, r1.distance(Am.evaluate(g), A.evaluate(g)));
    }
    max_dev.push_back(dev);
  }
  for (std::size_t i = 1; i < max_dev.size(); ++i) CHECK(max_dev[i] < max_dev[i - 1]);
  CHECK(max_dev.back() <= 1e-3);
}

TEST_CASE("stability: nearby functions mollify to uniformly nearby functions") {
  EuclideanSpace r1(1);
  TorusRotation golden(vec({golden_rotation()}), true);
  const double eta = 0.1;
  const double epsilon = 0.05;
  const double rho = golden.neighborhood_measure(eta) * epsilon;

  const auto A = sin_function();
  // Perturb on a window of measure 0.004 by height 1: l1(A, B) < rho = 0.005.
  OrbitFunction<TorusRotation::Element, Eigen::VectorXd> B{
      .evaluate =
          [A](const TorusRotation::Element& g) {
            auto v = A.evaluate(g);
            if (g[0] >= 0.5 && g[0] < 0.504) v[0] += 1.0;
            return v;
          },
      .regularity = Regularity::l1};
  const double l1 = l1_distance(A, B, 20000, golden, r1);
  REQUIRE(l1 <= rho);

  const MollifierConfig cfg{.eta = eta, .samples_per_eval = 128};
  auto Am = mollified_function(A, cfg, golden, r1);
  auto Bm = mollified_function(B, cfg, golden, r1);
  double max_dev = 0.0;
  for (int i = 0; i < 200; ++i) {
    const auto g = torus1((i + 0.5) / 200.0);
    max_dev = std::max(max_dev, r1.distance(Am.evaluate(g), Bm.evaluate(g)));
  }
  CHECK(max_dev <= epsilon + 1e-9);
}

TEST_CASE("barycenter contraction for coupled measures") {
  EuclideanSpace r2(2);
  Rng rng(402);
  {
    std::vector<Eigen::VectorXd> pts = {vec({0.0, 0.0}), vec({2.0, 0.0})};
    auto mu = EmpiricalMeasure<Eigen::VectorXd>::uniform(pts);
    auto s = check_barycenter_contraction(mu, mu, r2);
    CHECK(s.lhs == doctest::Approx(0.0).epsilon(1e-14));
    CHECK(s.holds);

    std::vector<Eigen::VectorXd> moved = {vec({0.5, 0.5}), vec({2.0, 1.0})};
    auto nu = EmpiricalMeasure<Eigen::VectorXd>::uniform(moved);
    CHECK(check_barycenter_contraction(mu, nu, r2).holds);
  }
  {
    SpdSpace spd(3);
    Rng prng(403);
    for (int i = 0; i < 1000; ++i) {
      std::vector<SpdPoint> a, b;
      for (int j = 0; j < 5; ++j) {
        a.push_back(sample_point(spd, prng));
        b.push_back(sample_point(spd, prng));
      }
      auto s = check_barycenter_contraction(EmpiricalMeasure<SpdPoint>::uniform(a),
                                            EmpiricalMeasure<SpdPoint>::uniform(b), spd);
      CHECK(s.slack >= -1e-6);
    }
  }
  {
    HyperboloidSpace h3(3);
    Rng hrng(404);
    for (int i = 0; i < 300; ++i) {
      std::vector<HyperboloidPoint> a, b;
      for (int j = 0; j < 5; ++j) {
        a.push_back(sample_point(h3, hrng));
        b.push_back(sample_point(h3, hrng));
      }
      auto s = check_barycenter_contraction(EmpiricalMeasure<HyperboloidPoint>::uniform(a),
                                            EmpiricalMeasure<HyperboloidPoint>::uniform(b),
                                            h3);
      CHECK(s.slack >= -1e-6);
    }
  }
  {
    std::vector<WeightedAtom<Eigen::VectorXd>> wa = {{vec({0.0, 0.0}), 0.3},
                                                     {vec({1.0, 0.0}), 0.7}};
    std::vector<WeightedAtom<Eigen::VectorXd>> wb = {{vec({0.0, 0.0}), 0.5},
                                                     {vec({1.0, 0.0}), 0.5}};
    CHECK_THROWS_AS(check_barycenter_contraction(EmpiricalMeasure<Eigen::VectorXd>(wa),
                                                 EmpiricalMeasure<Eigen::VectorXd>(wb), r2),
                    std::invalid_argument);
  }
}

TEST_CASE("truncation: bounded functions, far excursions, tail decay") {
  EuclideanSpace r1(1);
  TorusRotation golden(vec({golden_rotation()}), true);
  const auto z0 = vec({0.0});
  {
    const auto A = sin_function();
    auto An = truncate<TorusRotation::Element, EuclideanSpace>(A, z0, 5.0, r1);
    CHECK(l1_distance(A, An, 5000, golden, r1) == 0.0);
  }
  {
    // Excursion of height 10 on a set of measure 0.05, truncated at 5.
    OrbitFunction<TorusRotation::Element, Eigen::VectorXd> A{
        .evaluate =
            [](const TorusRotation::Element& g) {
              return vec({g[0] < 0.05 ? 10.0 : 0.0});
            },
        .regularity = Regularity::stepwise};
    auto An = truncate<TorusRotation::Element, EuclideanSpace>(A, z0, 5.0, r1);
    CHECK(l1_distance(A, An, 20000, golden, r1) == doctest::Approx(0.5).epsilon(0.01));
  }
  {
    // Heavy tail g^{-1/3}: the L1 gap to the truncation decays monotonically.
    OrbitFunction<TorusRotation::Element, Eigen::VectorXd> A{
        .evaluate =
            [](const TorusRotation::Element& g) {
              return vec({std::pow(std::max(g[0], 1e-12), -1.0 / 3.0)});
            },
        .regularity = Regularity::l1};
    std::vector<double> gaps;
    for (double radius : {2.0, 4.0, 8.0}) {
      auto An = truncate<TorusRotation::Element, EuclideanSpace>(A, z0, radius, r1);
      gaps.push_back(l1_distance(A, An, 20000, golden, r1));
    }
    CHECK(gaps[1] < gaps[0]);
    CHECK(gaps[2] < gaps[1]);
    CHECK(gaps.back() <= 0.05);
  }
  CHECK_THROWS_AS((truncate<TorusRotation::Element, EuclideanSpace>(sin_function(), z0,
                                                                    0.0, r1)),
                  std::invalid_argument);
}

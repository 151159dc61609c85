#include <doctest.h>

#include <Eigen/Core>
#include <algorithm>
#include <cmath>
#include <vector>

#include "ergomean/euclidean.hpp"
#include "ergomean/hyperboloid.hpp"
#include "ergomean/inductive.hpp"
#include "ergomean/karcher.hpp"
#include "ergomean/mean_checks.hpp"
#include "ergomean/rng.hpp"
#include "ergomean/sampling.hpp"
#include "ergomean/spd.hpp"
#include "test_util.hpp"

using namespace ergomean;
using testutil::diag_spd;
using testutil::vec;

namespace {
template <HadamardSpace S>
std::vector<typename S::Point> random_sequence(const S& space, int len, Rng& rng) {
  std::vector<typename S::Point> seq;
  seq.reserve(len);
  for (int i = 0; i < len; ++i) seq.push_back(sample_point(space, rng));
  return seq;
}
}  // namespace

TEST_CASE("inductive mean: scalar sequence matches the arithmetic mean") {
  EuclideanSpace r1(1);
  std::vector<Eigen::VectorXd> seq = {vec({0.0}), vec({3.0}), vec({6.0})};
  auto st = inductive_begin(r1, seq[0]);
  CHECK(st.current[0] == doctest::Approx(0.0));
  st = inductive_step(std::move(st), seq[1], r1);
  CHECK(st.current[0] == doctest::Approx(1.5));
  st = inductive_step(std::move(st), seq[2], r1);
  CHECK(st.current[0] == doctest::Approx(3.0));
  CHECK(st.n == 3);
}

TEST_CASE("inductive mean: constant sequence is a fixed point") {
  SpdSpace spd(3);
  Rng rng(201);
  const auto x = sample_point(spd, rng);
  std::vector<SpdPoint> seq(20, x);
  CHECK(spd.distance(inductive_mean<SpdSpace>(seq, spd), x) <= 1e-10);
}

TEST_CASE("inductive mean: commuting SPD step") {
  SpdSpace spd(2);
  std::vector<SpdPoint> seq = {diag_spd({1.0, 1.0}), diag_spd({4.0, 4.0})};
  const auto s2 = inductive_mean<SpdSpace>(seq, spd);
  CHECK(s2.matrix()(0, 0) == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(s2.matrix()(1, 1) == doctest::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("inductive mean: singleton and empty") {
  EuclideanSpace r2(2);
  std::vector<Eigen::VectorXd> one = {vec({5.0, -1.0})};
  CHECK(r2.distance(inductive_mean<EuclideanSpace>(one, r2), one[0]) == 0.0);
  std::vector<Eigen::VectorXd> none;
  CHECK_THROWS_AS(inductive_mean<EuclideanSpace>(none, r2), std::invalid_argument);
}

TEST_CASE("inductive mean: Euclidean coincidence with the coordinatewise average") {
  EuclideanSpace r2(2);
  Rng rng(202);
  const auto seq = random_sequence(r2, 100, rng);
  Eigen::VectorXd avg = Eigen::VectorXd::Zero(2);
  for (const auto& p : seq) avg += p;
  avg /= static_cast<double>(seq.size());
  CHECK((inductive_mean<EuclideanSpace>(seq, r2) - avg).norm() <= 1e-10);
}

TEST_CASE("inductive mean: order dependence on a non-commuting SPD triple") {
  SpdSpace spd(3);
  Rng rng(203);
  auto seq = random_sequence(spd, 3, rng);
  auto rev = seq;
  std::reverse(rev.begin(), rev.end());
  const double gap = spd.distance(inductive_mean<SpdSpace>(seq, spd),
                                  inductive_mean<SpdSpace>(rev, spd));
  CHECK(gap > 1e-4);
}

TEST_CASE("karcher mean: two equal-weight atoms sit at the midpoint") {
  auto run = [](const auto& space, auto x, auto y) {
    using P = typename std::decay_t<decltype(space)>::Point;
    auto mu = EmpiricalMeasure<P>::uniform({x, y});
    const auto r = karcher_mean(mu, space);
    CHECK(r.converged);
    CHECK(space.distance(r.point, space.geodesic(x, y, 0.5)) <= 1e-7);
  };
  Rng rng(204);
  {
    EuclideanSpace s(3);
    run(s, sample_point(s, rng), sample_point(s, rng));
  }
  {
    SpdSpace s(3);
    run(s, sample_point(s, rng), sample_point(s, rng));
  }
  {
    HyperboloidSpace s(3);
    run(s, sample_point(s, rng), sample_point(s, rng));
  }
}

TEST_CASE("karcher mean: Euclidean closed form equals the weighted mean") {
  EuclideanSpace r4(4);
  Rng rng(205);
  std::vector<WeightedAtom<Eigen::VectorXd>> atoms;
  Eigen::VectorXd expected = Eigen::VectorXd::Zero(4);
  double total = 0.0;
  for (int i = 0; i < 7; ++i) {
    const auto p = sample_point(r4, rng);
    const double w = rng.uniform(0.1, 2.0);
    atoms.push_back({p, w});
    expected += w * p;
    total += w;
  }
  expected /= total;
  const auto r = karcher_mean(EmpiricalMeasure<Eigen::VectorXd>(atoms), r4);
  CHECK(r.converged);
  CHECK((r.point - expected).norm() <= 1e-10);
}

TEST_CASE("karcher mean: commuting SPD atoms follow the log-mean oracle") {
  SpdSpace spd(3);
  Rng rng(206);
  std::vector<WeightedAtom<SpdPoint>> atoms;
  Eigen::VectorXd log_mean = Eigen::VectorXd::Zero(3);
  double total = 0.0;
  std::vector<double> weights = {0.2, 0.5, 0.3, 1.0};
  std::vector<Eigen::VectorXd> diags;
  for (double w : weights) {
    Eigen::VectorXd d(3);
    for (int j = 0; j < 3; ++j) d[j] = std::exp(rng.uniform(-1.0, 1.0));
    diags.push_back(d);
    atoms.push_back({diag_spd({d[0], d[1], d[2]}), w});
    total += w;
  }
  for (std::size_t i = 0; i < diags.size(); ++i) {
    log_mean += (weights[i] / total) * diags[i].array().log().matrix();
  }
  const auto r = karcher_mean(EmpiricalMeasure<SpdPoint>(atoms), spd);
  CHECK(r.converged);
  const SpdPoint expected =
      diag_spd({std::exp(log_mean[0]), std::exp(log_mean[1]), std::exp(log_mean[2])});
  CHECK(spd.distance(r.point, expected) <= 1e-7);
}

TEST_CASE("karcher mean: permutation invariance and stationarity") {
  SpdSpace spd(3);
  Rng rng(207);
  auto pts = random_sequence(spd, 6, rng);
  auto shuffled = pts;
  std::rotate(shuffled.begin(), shuffled.begin() + 3, shuffled.end());
  std::swap(shuffled[0], shuffled[4]);

  const auto a = karcher_mean(EmpiricalMeasure<SpdPoint>::uniform(pts), spd);
  const auto b = karcher_mean(EmpiricalMeasure<SpdPoint>::uniform(shuffled), spd);
  CHECK(a.converged);
  CHECK(b.converged);
  CHECK(a.final_step <= SpdSpace::kDefaultBarycenterTol);
  CHECK(spd.distance(a.point, b.point) <= 2.0 * SpdSpace::kDefaultBarycenterTol);
}

TEST_CASE("karcher mean: exhausted budget reports non-convergence") {
  SpdSpace spd(3);
  Rng rng(208);
  auto pts = random_sequence(spd, 8, rng);
  const auto r = karcher_mean(EmpiricalMeasure<SpdPoint>::uniform(pts), spd, 1e-14, 1);
  CHECK_FALSE(r.converged);
}

TEST_CASE("holbrook limit: periodic SPD atoms approach the joint mean") {
  SpdSpace spd(3);
  Rng rng(209);
  std::vector<SpdPoint> atoms;
  for (int i = 0; i < 3; ++i) atoms.push_back(sample_spd(3, rng, 100.0));
  const double diam = set_diameter<SpdSpace>(atoms, spd);
  const auto gamma = karcher_mean(EmpiricalMeasure<SpdPoint>::uniform(atoms), spd);
  REQUIRE(gamma.converged);

  auto st = inductive_begin(spd, atoms[0]);
  double delta_at_100 = -1.0;
  for (int n = 2; n <= 10000; ++n) {
    st = inductive_step(std::move(st), atoms[(n - 1) % 3], spd);
    if (n == 100) delta_at_100 = spd.distance(st.current, gamma.point);
  }
  const double delta_final = spd.distance(st.current, gamma.point);
  CHECK(delta_final <= 0.05 * diam);
  CHECK(delta_final < delta_at_100);
}

TEST_CASE("variance inequality: degenerate, Euclidean identity, SPD property") {
  EuclideanSpace r3(3);
  Rng rng(210);
  {
    auto mu = EmpiricalMeasure<Eigen::VectorXd>::uniform(random_sequence(r3, 5, rng));
    const auto bary = karcher_mean(mu, r3);
    auto at_bary = check_variance_inequality(mu, r3, bary.point, bary.point);
    CHECK(at_bary.lhs == doctest::Approx(0.0).epsilon(1e-14));
    CHECK(std::abs(at_bary.rhs) < 1e-12);

    // Euclidean bias-variance identity: equality for every z.
    for (int i = 0; i < 50; ++i) {
      const auto z = sample_point(r3, rng);
      const auto s = check_variance_inequality(mu, r3, z, bary.point);
      CHECK(std::abs(s.slack) <= 1e-10 * (1.0 + std::abs(s.rhs)));
    }
  }
  {
    SpdSpace spd(3);
    Rng prng(211);
    for (int i = 0; i < 1000; ++i) {
      auto mu = EmpiricalMeasure<SpdPoint>::uniform(random_sequence(spd, 4, prng));
      const auto bary = karcher_mean(mu, spd);
      REQUIRE(bary.converged);
      const auto z = sample_point(spd, prng);
      CHECK(check_variance_inequality(mu, spd, z, bary.point).slack >= -1e-6);
    }
  }
}

TEST_CASE("contraction of inductive means: identity, translation, SPD property") {
  EuclideanSpace r2(2);
  Rng rng(212);
  {
    const auto seq = random_sequence(r2, 10, rng);
    auto same = check_contraction<EuclideanSpace>(seq, seq, r2);
    CHECK(same.lhs == doctest::Approx(0.0).epsilon(1e-14));
    CHECK(same.rhs == doctest::Approx(0.0).epsilon(1e-14));

    // Translation by v: both sides equal |v| (arithmetic-mean oracle).
    const auto v = vec({0.7, -0.4});
    std::vector<Eigen::VectorXd> shifted;
    for (const auto& p : seq) shifted.push_back(p + v);
    auto s = check_contraction<EuclideanSpace>(seq, shifted, r2);
    CHECK(s.lhs == doctest::Approx(v.norm()).epsilon(1e-10));
    CHECK(s.rhs == doctest::Approx(v.norm()).epsilon(1e-10));
  }
  {
    SpdSpace spd(3);
    Rng prng(213);
    for (int i = 0; i < 1000; ++i) {
      const auto a = random_sequence(spd, 50, prng);
      const auto b = random_sequence(spd, 50, prng);
      CHECK(check_contraction<SpdSpace>(a, b, spd).slack >= -1e-8);
    }
  }
  {
    std::vector<Eigen::VectorXd> a = {vec({0.0, 0.0})};
    std::vector<Eigen::VectorXd> b;
    CHECK_THROWS_AS(check_contraction<EuclideanSpace>(a, b, r2), std::invalid_argument);
  }
}

TEST_CASE("weighted inequality: constant sequence and seeded cases") {
  EuclideanSpace r2(2);
  Rng rng(214);
  {
    const auto c = vec({1.0, 2.0});
    std::vector<Eigen::VectorXd> seq(10, c);
    auto s = check_weighted_inequality<EuclideanSpace>(seq, c, 5, 3, r2);
    CHECK(std::abs(s.lhs) < 1e-14);
    CHECK(std::abs(s.rhs) < 1e-14);
  }
  {
    const auto seq = random_sequence(r2, 10, rng);
    const auto z = sample_point(r2, rng);
    CHECK(check_weighted_inequality<EuclideanSpace>(seq, z, 5, 3, r2).holds);
  }
  {
    SpdSpace spd(3);
    Rng prng(215);
    for (int i = 0; i < 1000; ++i) {
      const auto seq = random_sequence(spd, 20, prng);
      const auto z = sample_point(spd, prng);
      CHECK(check_weighted_inequality<SpdSpace>(seq, z, 10, 10, spd).slack >= -1e-6);
    }
  }
  {
    const auto seq = random_sequence(r2, 5, rng);
    const auto z = sample_point(r2, rng);
    CHECK_THROWS_AS(check_weighted_inequality<EuclideanSpace>(seq, z, 3, 3, r2),
                    std::invalid_argument);
    CHECK_THROWS_AS(check_weighted_inequality<EuclideanSpace>(seq, z, 0, 2, r2),
                    std::invalid_argument);
  }
}

TEST_CASE("weighted inequality: m = 1 is an identity in Euclidean space") {
  // The only loosened factor (k+j)/(k+j+1) >= k/(k+m) is tight at m = 1, and
  // the underlying convexity inequality is an identity in Hilbert space, so
  // the slack must vanish; any index shift would break this.
  EuclideanSpace r3(3);
  Rng rng(218);
  for (int k = 1; k <= 12; ++k) {
    const auto seq = random_sequence(r3, k + 1, rng);
    const auto z = sample_point(r3, rng);
    const auto s = check_weighted_inequality<EuclideanSpace>(seq, z, k, 1, r3);
    CHECK(std::abs(s.slack) <= 1e-12 * (1.0 + std::abs(s.rhs)));
  }
}

TEST_CASE("diameter bound: m = 1 slack equals the remainder exactly") {
  // With m = 1 both averaged sums are the same single term, so the slack is
  // exactly (1/(k+1)^2 + 2/(k+1)) diam^2.
  EuclideanSpace r2(2);
  Rng rng(219);
  for (int k = 1; k <= 12; ++k) {
    const auto seq = random_sequence(r2, k + 1, rng);
    const auto s = check_diameter_bound<EuclideanSpace>(seq, k, 1, r2);
    const double diam = set_diameter<EuclideanSpace>(seq, r2);
    const double kk = 1.0 / static_cast<double>(k + 1);
    const double remainder = (kk * kk + 2.0 * kk) * diam * diam;
    CHECK(s.slack == doctest::Approx(remainder).epsilon(1e-12));
  }
}

TEST_CASE("inductive state: counter and diameter bound bookkeeping") {
  EuclideanSpace r1(1);
  auto st = inductive_begin(r1, vec({0.0}));
  double prev_bound = st.diameter_bound;
  Rng rng(220);
  for (int i = 0; i < 50; ++i) {
    const auto n_before = st.n;
    st = inductive_step(std::move(st), vec({rng.uniform(-3.0, 3.0)}), r1);
    CHECK(st.n == n_before + 1);
    CHECK(st.diameter_bound >= prev_bound);
    prev_bound = st.diameter_bound;
  }
}

TEST_CASE("diameter bound: constant sequence and seeded cases") {
  EuclideanSpace r2(2);
  Rng rng(216);
  {
    std::vector<Eigen::VectorXd> seq(30, vec({-1.0, 4.0}));
    auto s = check_diameter_bound<EuclideanSpace>(seq, 20, 5, r2);
    CHECK(std::abs(s.lhs) < 1e-14);
    CHECK(s.rhs >= 0.0);
    CHECK(s.holds);
  }
  {
    const auto seq = random_sequence(r2, 30, rng);
    CHECK(check_diameter_bound<EuclideanSpace>(seq, 20, 5, r2).holds);
  }
  {
    SpdSpace spd(3);
    Rng prng(217);
    for (int i = 0; i < 1000; ++i) {
      const auto seq = random_sequence(spd, 25, prng);
      CHECK(check_diameter_bound<SpdSpace>(seq, 20, 5, spd).slack >= -1e-6);
    }
  }
}

TEST_CASE("empirical measure: normalization and validation") {
  std::vector<WeightedAtom<Eigen::VectorXd>> atoms = {{vec({1.0}), 2.0},
                                                      {vec({3.0}), 6.0}};
  EmpiricalMeasure<Eigen::VectorXd> mu(atoms);
  CHECK(mu.atom(0).weight == doctest::Approx(0.25));
  CHECK(mu.atom(1).weight == doctest::Approx(0.75));

  std::vector<WeightedAtom<Eigen::VectorXd>> empty;
  CHECK_THROWS_AS((EmpiricalMeasure<Eigen::VectorXd>(empty)), std::invalid_argument);
  std::vector<WeightedAtom<Eigen::VectorXd>> bad = {{vec({1.0}), 0.0}};
  CHECK_THROWS_AS((EmpiricalMeasure<Eigen::VectorXd>(bad)), std::invalid_argument);
}

#include <benchmark/benchmark.h>

#include <Eigen/Core>
#include <cmath>
#include <numbers>
#include <optional>
#include <vector>

#include "ergomean/ergodic_run.hpp"
#include "ergomean/euclidean.hpp"
#include "ergomean/hyperboloid.hpp"
#include "ergomean/inductive.hpp"
#include "ergomean/karcher.hpp"
#include "ergomean/kronecker.hpp"
#include "ergomean/rng.hpp"
#include "ergomean/sampling.hpp"
#include "ergomean/spd.hpp"

namespace {

using namespace ergomean;

void BM_SpdDistance(benchmark::State& state) {
  const auto order = static_cast<Eigen::Index>(state.range(0));
  SpdSpace space(order);
  Rng rng(1);
  const auto a = sample_spd(order, rng, 100.0);
  const auto b = sample_spd(order, rng, 100.0);
  for (auto _ : state) {
    benchmark::DoNotOptimize(space.distance(a, b));
  }
}
BENCHMARK(BM_SpdDistance)->Arg(3)->Arg(8)->Arg(16);

void BM_SpdGeodesic(benchmark::State& state) {
  const auto order = static_cast<Eigen::Index>(state.range(0));
  SpdSpace space(order);
  Rng rng(2);
  const auto a = sample_spd(order, rng, 100.0);
  const auto b = sample_spd(order, rng, 100.0);
  for (auto _ : state) {
    benchmark::DoNotOptimize(space.geodesic(a, b, 0.37));
  }
}
BENCHMARK(BM_SpdGeodesic)->Arg(3)->Arg(8)->Arg(16);

void BM_HyperboloidGeodesic(benchmark::State& state) {
  HyperboloidSpace space(static_cast<Eigen::Index>(state.range(0)));
  Rng rng(3);
  const auto a = sample_point(space, rng);
  const auto b = sample_point(space, rng);
  for (auto _ : state) {
    benchmark::DoNotOptimize(space.geodesic(a, b, 0.37));
  }
}
BENCHMARK(BM_HyperboloidGeodesic)->Arg(3)->Arg(64);

void BM_KarcherMeanSpd(benchmark::State& state) {
  SpdSpace space(3);
  Rng rng(4);
  std::vector<SpdPoint> atoms;
  for (std::int64_t i = 0; i < state.range(0); ++i) {
    atoms.push_back(sample_spd(3, rng, 100.0));
  }
  const auto mu = EmpiricalMeasure<SpdPoint>::uniform(atoms);
  for (auto _ : state) {
    benchmark::DoNotOptimize(karcher_mean(mu, space));
  }
}
BENCHMARK(BM_KarcherMeanSpd)->Arg(4)->Arg(16)->Arg(64);

void BM_ErgodicRunSpd(benchmark::State& state) {
  SpdSpace space(3);
  TorusRotation system((Eigen::VectorXd(1) << golden_rotation()).finished(), true);
  const Eigen::VectorXd d = (Eigen::VectorXd(3) << 1.0, 0.5, -0.5).finished();
  OrbitFunction<TorusRotation::Element, SpdPoint> fn{
      .evaluate =
          [d](const TorusRotation::Element& g) {
            const double s = std::sin(2.0 * std::numbers::pi * g[0]);
            Eigen::VectorXd eigs = (s * d).array().exp();
            Eigen::MatrixXd m = eigs.asDiagonal();
            return spd_point_unchecked(std::move(m));
          },
      .regularity = Regularity::continuous};
  const SpdPoint ref = spd_point_unchecked(Eigen::MatrixXd::Identity(3, 3));
  const auto start = (Eigen::VectorXd(1) << 0.123).finished();
  const auto n = state.range(0);
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        ergodic_inductive_run(system, fn, start, n, std::optional<SpdPoint>(ref), space));
  }
  state.SetItemsProcessed(state.iterations() * n);
}
BENCHMARK(BM_ErgodicRunSpd)->Arg(1000)->Arg(10000);

void BM_TorusOrbitAdvance(benchmark::State& state) {
  TorusRotation system((Eigen::VectorXd(1) << golden_rotation()).finished(), true);
  auto cursor = system.orbit_cursor(system.identity());
  for (auto _ : state) {
    cursor.advance();
    benchmark::DoNotOptimize(cursor.current());
  }
}
BENCHMARK(BM_TorusOrbitAdvance);

}  // namespace

BENCHMARK_MAIN();

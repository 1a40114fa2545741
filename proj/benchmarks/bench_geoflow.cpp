#include <benchmark/benchmark.h>

#include <random>

#include "geoflow/geoflow.hpp"

namespace {

using namespace geoflow;

AlgebraVector random_vector(int dim, std::mt19937_64& rng) {
  std::normal_distribution<double> normal;
  AlgebraVector v(dim);
  for (int i = 0; i < dim; ++i) v[i] = normal(rng);
  return v;
}

void BM_SdiffBracket(benchmark::State& state) {
  const auto a = make_sdiff_t2(static_cast<int>(state.range(0)));
  std::mt19937_64 rng(1);
  const AlgebraVector u = random_vector(a.dim(), rng), v = random_vector(a.dim(), rng);
  for (auto _ : state) benchmark::DoNotOptimize(bracket(a, u, v));
  state.counters["dim"] = a.dim();
}
BENCHMARK(BM_SdiffBracket)->Arg(2)->Arg(4)->Arg(8);

void BM_SdiffCurvature(benchmark::State& state) {
  const auto a = make_sdiff_t2(static_cast<int>(state.range(0)));
  std::mt19937_64 rng(2);
  const AlgebraVector u = random_vector(a.dim(), rng), v = random_vector(a.dim(), rng);
  for (auto _ : state) benchmark::DoNotOptimize(sectional_curvature(a, u, v));
  state.counters["dim"] = a.dim();
}
BENCHMARK(BM_SdiffCurvature)->Arg(2)->Arg(4)->Arg(8);

void BM_So3GeodesicStep(benchmark::State& state) {
  const auto a = make_so3(1, 2, 3);
  AlgebraVector v(3);
  v << 0.1, 1.0, 0.0;
  for (auto _ : state) benchmark::DoNotOptimize(geodesic_rhs(a, v));
}
BENCHMARK(BM_So3GeodesicStep);

void BM_VorticityRhs(benchmark::State& state) {
  const auto omega = random_vorticity(static_cast<int>(state.range(0)), 3);
  for (auto _ : state) benchmark::DoNotOptimize(vorticity_rhs(omega));
}
BENCHMARK(BM_VorticityRhs)->Arg(8)->Arg(16);

void BM_ClebschVelocity(benchmark::State& state) {
  const SpectralOps3D ops(static_cast<int>(state.range(0)));
  const auto p = field_from_modes(ops, {{{1, 0, 0}, {0.0, -0.25}}, {{0, 1, 1}, {0.075, 0.0}}});
  const auto q = field_from_modes(ops, {{{0, 1, 0}, {0.25, 0.0}}, {{1, 0, -1}, {0.0, 0.05}}});
  for (auto _ : state) benchmark::DoNotOptimize(velocity_from_clebsch(ops, p, q));
}
BENCHMARK(BM_ClebschVelocity)->Arg(16)->Arg(32);

}  // namespace

BENCHMARK_MAIN();

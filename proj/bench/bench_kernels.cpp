// Serial reference path against the OpenMP path for each parallel kernel.
#include <benchmark/benchmark.h>
#include <omp.h>

#include "symcap/body.hpp"
#include "symcap/kernels.hpp"
#include "symcap/volume.hpp"

namespace {

using namespace symcap;

Matrix cube(int d) {
  const Eigen::Index m = Eigen::Index{1} << d;
  Matrix v(d, m);
  for (Eigen::Index k = 0; k < m; ++k) {
    for (int i = 0; i < d; ++i) v(i, k) = ((k >> i) & 1) ? 1.0 : -1.0;
  }
  return v;
}

Exec mode(const benchmark::State& state) { return state.range(0) == 0 ? Exec::serial : Exec::parallel; }

void BM_CountHits(benchmark::State& state) {
  const ConvexBody k = ConvexBody::polytope(cube(4));
  const McProposal prop{Vector::Zero(4), 2.0 * Matrix::Identity(4, 4)};
  const Membership inside = [&k](const Vector& x) { return inside_body(k, x); };
  for (auto _ : state) {
    benchmark::DoNotOptimize(count_hits(prop, inside, 200'000, 7, mode(state)));
  }
  state.SetLabel(state.range(0) == 0 ? "serial" : "omp x" + std::to_string(omp_get_max_threads()));
}

void BM_PairwiseSums(benchmark::State& state) {
  const Matrix p = cube(6);
  const Matrix q = 0.5 * cube(6);
  for (auto _ : state) benchmark::DoNotOptimize(pairwise_sums(p, q, mode(state)));
  state.SetLabel(state.range(0) == 0 ? "serial" : "omp x" + std::to_string(omp_get_max_threads()));
}

void BM_SupportValues(benchmark::State& state) {
  const Matrix v = Matrix::Random(8, 4096);
  const Matrix dirs = Matrix::Random(8, 10'000);
  for (auto _ : state) benchmark::DoNotOptimize(support_values(v, dirs, mode(state)));
  state.SetLabel(state.range(0) == 0 ? "serial" : "omp x" + std::to_string(omp_get_max_threads()));
}

}  // namespace

BENCHMARK(BM_CountHits)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_PairwiseSums)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_SupportValues)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();

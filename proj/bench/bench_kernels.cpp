// Serial reference kernels against their OpenMP counterparts. Arg(0) is the
// serial path, Arg(1) the parallel one; the second range argument is M.

#include <benchmark/benchmark.h>

#include <random>

#include "pfc/kernels.hpp"
#include "pfc/spectral.hpp"

using namespace pfc;

namespace {

CoeffGrid random_grid(int m, unsigned seed) {
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> u(-0.1, 0.1);
  CoeffGrid a(m);
  for (double& v : a.vals) v = u(rng);
  return a;
}

Exec exec_of(const benchmark::State& st) { return st.range(0) ? Exec::parallel : Exec::serial; }

void BM_ConvFloat(benchmark::State& st) {
  const int m = int(st.range(1));
  const CoeffGrid a = random_grid(m, 1), b = random_grid(m, 2);
  CoeffGrid out(2 * m);
  for (auto _ : st) {
    kernels::conv(a, b, out, exec_of(st));
    benchmark::DoNotOptimize(out.vals.data());
  }
}

void BM_ConvInterval(benchmark::State& st) {
  const int m = int(st.range(1));
  const IntervalGrid a = to_interval(random_grid(m, 1)), b = to_interval(random_grid(m, 2));
  IntervalGrid out(2 * m);
  for (auto _ : st) {
    kernels::conv(a, b, out, exec_of(st));
    benchmark::DoNotOptimize(out.vals.data());
  }
}

void BM_AssembleDfInterval(benchmark::State& st) {
  const int m = int(st.range(1));
  ModelSpec spec;
  spec.psibar = 0.07;
  spec.beta = 0.025;
  spec.nx = 4;
  spec.ny = 2;
  const IntervalGrid a = to_interval(random_grid(m, 3));
  const IntervalGrid q = conv_full(a, a);
  const IntervalSymbols sym = build_symbols<Interval>(spec, m, 1.05);
  const int n = (m + 1) * (m + 1);
  IntervalMatrix g(n, n);
  for (auto _ : st) {
    kernels::assemble_df(q, sym.lap, sym.gam, m, g, exec_of(st));
    benchmark::DoNotOptimize(g.v.data());
  }
}

void BM_MulPointInterval(benchmark::State& st) {
  const int m = int(st.range(1));
  const int n = (m + 1) * (m + 1);
  const Matrix a = Matrix::Random(n, n);
  IntervalMatrix b(n, n);
  const Matrix bm = Matrix::Random(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) b(i, j) = Interval(bm(i, j), bm(i, j) + 1e-14);
  for (auto _ : st) {
    IntervalMatrix c = kernels::mul(a, b, exec_of(st));
    benchmark::DoNotOptimize(c.v.data());
  }
}

void BM_PhiBound(benchmark::State& st) {
  const int m = int(st.range(1));
  const IntervalGrid a = to_interval(random_grid(m, 4));
  const IntervalGrid q = conv_full(a, a);
  for (auto _ : st) {
    auto phi = kernels::phi_bound(q, m, 1.05, exec_of(st));
    benchmark::DoNotOptimize(phi.data());
  }
}

}  // namespace

BENCHMARK(BM_ConvFloat)->ArgsProduct({{0, 1}, {12, 20, 40}})->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_ConvInterval)->ArgsProduct({{0, 1}, {12, 20}})->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_AssembleDfInterval)->ArgsProduct({{0, 1}, {12, 20}})->Unit(benchmark::kMillisecond);
BENCHMARK(BM_MulPointInterval)->ArgsProduct({{0, 1}, {8, 12}})->Unit(benchmark::kMillisecond);
BENCHMARK(BM_PhiBound)->ArgsProduct({{0, 1}, {12, 20}})->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();

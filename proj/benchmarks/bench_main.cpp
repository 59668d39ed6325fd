#include <benchmark/benchmark.h>

#include "cifh/oracle.hpp"
#include "cifh/pipeline.hpp"

using namespace cifh;

namespace {

CifhInstance bench_instance(int n) {
  RandomSpec rs;
  rs.n = n;
  rs.seed = 42;
  return random_instance(rs);
}

void BM_MediatedSdp(benchmark::State& state) {
  const auto inst = bench_instance(static_cast<int>(state.range(0)));
  const auto cls = traceless_classical(inst, 20);
  const auto p = build_mediated_sdp(inst, covariance_from_bits(cls.assignment), 0.5);
  for (auto _ : state) benchmark::DoNotOptimize(solve_sdp(p).objective_value);
}
BENCHMARK(BM_MediatedSdp)->Arg(4)->Arg(6)->Arg(8)->Unit(benchmark::kMillisecond);

void BM_ExactSpectrum(benchmark::State& state) {
  const auto inst = bench_instance(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(exact_spectrum(inst).global_max);
}
BENCHMARK(BM_ExactSpectrum)->Arg(6)->Arg(8)->Arg(10)->Unit(benchmark::kMillisecond);

void BM_Purify(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const auto inst = bench_instance(n);
  const auto g = random_covariance(n, 7, false);
  for (auto _ : state) benchmark::DoNotOptimize(purify(g, inst).gamma().data());
}
BENCHMARK(BM_Purify)->Arg(8)->Arg(16)->Arg(32);

void BM_EnergyTotal(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const auto inst = bench_instance(n);
  const auto g = random_covariance(n, 7, true);
  for (auto _ : state) benchmark::DoNotOptimize(energy_total(g, inst));
}
BENCHMARK(BM_EnergyTotal)->Arg(8)->Arg(32)->Arg(128);

void BM_HubbardSweep(benchmark::State& state) {
  const auto inst = hubbard_triangle(1.0, 2.0, 0.0);
  SolveOptions o;
  o.grid = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(solve(inst, o).energy_total);
}
BENCHMARK(BM_HubbardSweep)->Arg(10)->Arg(40)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();

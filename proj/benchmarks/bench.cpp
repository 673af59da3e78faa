#include "voganish/cli/cli.hpp"

#include <benchmark/benchmark.h>

using namespace voganish;

namespace {

const std::vector<int> kKS{2, 4, 4, 4, 2};

void BM_EnumerateOrbits(benchmark::State& st) {
  for (auto _ : st) benchmark::DoNotOptimize(multiseg::enumerate_orbits(kKS));
}
BENCHMARK(BM_EnumerateOrbits)->Unit(benchmark::kMillisecond);

void BM_ComputeDual(benchmark::State& st) {
  auto psi = *cli::named_orbit("psi");
  for (auto _ : st) benchmark::DoNotOptimize(vogan::compute_dual(psi));
}
BENCHMARK(BM_ComputeDual)->Unit(benchmark::kMillisecond);

void BM_ClosureOrderScan(benchmark::State& st) {
  auto all = multiseg::enumerate_orbits(kKS);
  auto ks = *cli::named_orbit("KS");
  for (auto _ : st) {
    int n = 0;
    for (const auto& t : all) n += multiseg::closure_leq(ks, t);
    benchmark::DoNotOptimize(n);
  }
}
BENCHMARK(BM_ClosureOrderScan);

void BM_CoverCountPoly(benchmark::State& st) {
  auto spec = cover::cover_from_triangle(*cli::named_orbit("psi"));
  auto ks = *cli::named_orbit("KS");
  for (auto _ : st) benchmark::DoNotOptimize(cover::fibre_count(spec, ks));
}
BENCHMARK(BM_CoverCountPoly)->Unit(benchmark::kMillisecond);

void BM_SliceSingularLocus(benchmark::State& st) {
  auto set = cover::load_chart_set("Cpsi");
  for (auto _ : st) benchmark::DoNotOptimize(cli::analyze_chart("Cpsi", set.charts[0], 1, false, false));
}
BENCHMARK(BM_SliceSingularLocus)->Unit(benchmark::kMillisecond);

void BM_SelfHessian(benchmark::State& st) {
  for (auto _ : st) benchmark::DoNotOptimize(cli::ks_self_hessian(1));
}
BENCHMARK(BM_SelfHessian)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();

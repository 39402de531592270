#include <benchmark/benchmark.h>

#include "lscan/config.hpp"

using namespace lscan;

namespace {

const ResidueFamily& harmonic_family() {
  static const ResidueFamily fam = make_family(system_for(RunConfig{}), 0.0, 55.0, 2000);
  return fam;
}

Mat diag8() {
  Vec v(8);
  for (int i = 0; i < 8; ++i) v(i) = 10.0 * i;
  return v.asDiagonal();
}

const SpectralTable& toy_table() {
  static const SpectralTable t = [] {
    std::vector<double> alphas;
    for (int i = 0; i < 64; ++i) alphas.push_back(1.25 * i);
    QuantumScanConfig cfg;
    cfg.seed = 1;
    return tabulate(extend_square({{0, diag8()}, {1, -Mat::Identity(8, 8)}}, alphas), cfg);
  }();
  return t;
}

void BM_scan_serial(benchmark::State& st) {
  for (auto _ : st) benchmark::DoNotOptimize(scan_serial(harmonic_family()));
}

void BM_scan_parallel(benchmark::State& st) {
  for (auto _ : st) benchmark::DoNotOptimize(scan(harmonic_family(), static_cast<int>(st.range(0))));
}

void BM_run_scan_serial(benchmark::State& st) {
  QuantumScanConfig cfg;
  cfg.seed = 1;
  for (auto _ : st) benchmark::DoNotOptimize(run_scan_serial(toy_table(), cfg, 200000));
}

void BM_run_scan_parallel(benchmark::State& st) {
  QuantumScanConfig cfg;
  cfg.seed = 1;
  for (auto _ : st) benchmark::DoNotOptimize(run_scan(toy_table(), cfg, 200000, static_cast<int>(st.range(0))));
}

}  // namespace

BENCHMARK(BM_scan_serial)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_scan_parallel)->Arg(1)->Arg(2)->Arg(4)->Arg(8)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_run_scan_serial)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_run_scan_parallel)->Arg(1)->Arg(2)->Arg(4)->Arg(8)->Unit(benchmark::kMillisecond)->UseRealTime();

BENCHMARK_MAIN();

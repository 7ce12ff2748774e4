#include <benchmark/benchmark.h>

#include "llc/control.hpp"
#include "llc/design.hpp"
#include "llc/gain.hpp"
#include "llc/steady_state.hpp"

namespace {

llc::DesignRequirements requirements() {
  llc::DesignRequirements r;
  r.Vin_min = 40.0;
  r.Vin_nom = r.Vin_max = 48.0;
  r.Vout_min = r.Vout_nom = r.Vout_max = 12.0;
  r.Iout_min = 0.05;
  r.Iout_max = 0.5;
  r.f0_target = 100e3;
  r.fsw_min = 65e3;
  r.fsw_max = 200e3;
  return r;
}

llc::SimConfig full_load() {
  llc::SimConfig c;
  c.tank = llc::synthesize_tank(requirements(), 1.83, 2.05, 0.36);
  c.Vin = 48.0;
  c.fsw = 110.79e3;
  c.load = llc::LoadProfile::resistance(24.0);
  return c;
}

void BM_GainCurve(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(llc::gain_curve(2.05, 0.36, 0.3, 3.0, 2000));
}
BENCHMARK(BM_GainCurve);

void BM_SolveFrequency(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(llc::solve_frequency(2.05, 0.36, 0.915));
}
BENCHMARK(BM_SolveFrequency);

void BM_DesignSearch(benchmark::State& state) {
  const llc::DesignRequirements req = requirements();
  for (auto _ : state) benchmark::DoNotOptimize(llc::search_design(req, 1.83, {}, 1));
}
BENCHMARK(BM_DesignSearch)->Unit(benchmark::kMillisecond)->UseRealTime();

void BM_PeriodicPoint(benchmark::State& state) {
  const llc::SimConfig cfg = full_load();
  const auto method = state.range(0) ? llc::PopMethod::Shooting : llc::PopMethod::CycleIteration;
  for (auto _ : state) benchmark::DoNotOptimize(llc::find_pop(cfg, method));
}
BENCHMARK(BM_PeriodicPoint)->Arg(1)->Arg(0)->Unit(benchmark::kMillisecond);

void BM_Transient10ms(benchmark::State& state) {
  llc::SimConfig cfg = full_load();
  cfg.t_end = 10e-3;
  cfg.record_interval = 1e-7;
  for (auto _ : state) benchmark::DoNotOptimize(llc::run_transient(cfg, llc::SimState{}));
}
BENCHMARK(BM_Transient10ms)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();

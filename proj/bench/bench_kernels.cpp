// Serial reference kernels against their OpenMP counterparts.

#include <benchmark/benchmark.h>

#include "qwork/interferometry.hpp"
#include "qwork/propagator.hpp"
#include "qwork/workdist.hpp"

namespace {

using namespace qwork;

SweepProblem make_problem(int dim) {
  const Drive drive{QuenchSchedule::tanh_switch(0.0, 0.165, 1.885),
                    QuenchSchedule::tanh_switch(0.0, 0.25, 1.885), 1.0};
  const auto hi = drive.initial_hamiltonian(dim);
  return SweepProblem{propagate(drive, dim, 200), hi, drive.final_hamiltonian(dim),
                      gibbs_state(hi, beta_for_mean_occupation(1.0, 1.0))};
}

void BM_Sweep(benchmark::State& state, Exec exec) {
  const SweepProblem p = make_problem(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(sweep(p, 0.94, 100, exec));
  state.SetItemsProcessed(state.iterations() * 100);
}

void BM_Invert(benchmark::State& state, Exec exec) {
  const SweepProblem p = make_problem(48);
  const auto sig = measured_signal(p, Direction::Forward, 0.94, static_cast<int>(state.range(0)),
                                   MeasurementModel{94.2, 0.0, 0});
  for (auto _ : state) benchmark::DoNotOptimize(invert_to_distribution(sig, 4, exec));
}

}  // namespace

BENCHMARK_CAPTURE(BM_Sweep, serial, Exec::Serial)->Arg(48)->Arg(96)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_Sweep, parallel, Exec::Parallel)->Arg(48)->Arg(96)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_Invert, serial, Exec::Serial)->Arg(250)->Arg(1000)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_Invert, parallel, Exec::Parallel)->Arg(250)->Arg(1000)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();

// Serial reference vs OpenMP kernels: epsilon sweeps and batched oracle
// comparisons over independent problems.

#include <benchmark/benchmark.h>

#include <array>
#include <vector>

#include "lde/gauge.hpp"
#include "lde/roots.hpp"
#include "lde/sweep.hpp"

namespace {

lde::RecurrenceSpec cubic(long horizon) {
  lde::RecurrenceSpec spec;
  spec.order = 3;
  spec.horizon = horizon;
  spec.coeffs = {lde::CoefficientModel(lde::Constant{-6.0}),
                 lde::CoefficientModel(lde::SinusoidalInEpsK{-0.1, 11.0, 1.0, 0.0, 0.01}),
                 lde::CoefficientModel(lde::Constant{-6.0})};
  return spec;
}

const std::array<lde::Complex, 3> kInitial{1.0, 0.5, 0.25};
const std::array kMethods{lde::Method::GaugeExact, lde::Method::Wkb3, lde::Method::WkbGeneral};

std::vector<double> epsilons(std::size_t count) {
  std::vector<double> eps(count);
  for (std::size_t i = 0; i < count; ++i) eps[i] = 0.02 / static_cast<double>(i + 1);
  return eps;
}

template <bool Parallel>
void BM_Sweep(benchmark::State& state) {
  const auto spec = cubic(state.range(1));
  const auto eps = epsilons(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) {
    auto result = Parallel ? lde::sweep_parallel(spec, kInitial, kMethods, eps)
                           : lde::sweep_serial(spec, kInitial, kMethods, eps);
    benchmark::DoNotOptimize(result.points.data());
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
  state.counters["threads"] = lde::parallel_threads();
}

// Power-gauge propagation checked against the direct recursion, one epsilon per index.
double exactness_task(std::size_t i) {
  auto spec = cubic(200);
  spec = spec.with_epsilon(0.001 * static_cast<double>(i + 1));
  const auto oracle = lde::direct_solve(spec, kInitial);
  const auto frames = lde::track_frames(spec, 0, spec.trajectory_length() - 1);
  const auto run = lde::propagate_components(spec, kInitial, [&](long k) {
    return lde::power_gauge(frames[static_cast<std::size_t>(k)]);
  });
  double worst = 0.0;
  for (long k = 0; k < oracle.k_end(); ++k) {
    worst = std::max(worst, lde::windowed_relative_error(oracle, k, run.reconstructed.at(k), 3));
  }
  return worst;
}

template <bool Parallel>
void BM_Batch(benchmark::State& state) {
  const auto count = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) {
    auto out = Parallel ? lde::map_parallel(count, exactness_task) : lde::map_serial(count, exactness_task);
    benchmark::DoNotOptimize(out.data());
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

}  // namespace

BENCHMARK(BM_Sweep<false>)->Args({8, 200})->Args({32, 400})->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Sweep<true>)->Args({8, 200})->Args({32, 400})->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Batch<false>)->Arg(16)->Arg(64)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Batch<true>)->Arg(16)->Arg(64)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();

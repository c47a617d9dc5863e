// Serial vs OpenMP comparison for the data-parallel kernels.

#include <benchmark/benchmark.h>

#include "fracrenew/ctrw.hpp"
#include "fracrenew/montecarlo.hpp"
#include "fracrenew/thinning.hpp"

using namespace fracrenew;

namespace {

void bm_empirical_pmf(benchmark::State& state, mc::Exec exec) {
  const auto model = renewal::mittag_leffler(0.6, 1.0);
  const std::size_t n = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) {
    auto pmf = mc::empirical_counting_pmf(model, 1.0, n, {7, 0}, exec);
    benchmark::DoNotOptimize(pmf.probs.data());
  }
  state.SetItemsProcessed(state.iterations() * n);
}

void bm_ctrw_walkers(benchmark::State& state, mc::Exec exec) {
  const auto wait = renewal::mittag_leffler(0.5, 1.0);
  const auto jump = ctrw::gaussian_jump(1.0);
  const std::size_t n = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) {
    auto pos = ctrw::simulate_ctrw_positions(wait, jump, 1.0, n, {11, 0}, exec);
    benchmark::DoNotOptimize(pos.data());
  }
  state.SetItemsProcessed(state.iterations() * n);
}

void bm_sojourn(benchmark::State& state, mc::Exec exec) {
  const auto wait = renewal::mittag_leffler(0.5, 1.0);
  const auto jump = ctrw::gaussian_jump(1.0);
  const ctrw::GridSpec grid{-12.0, 0.01, 2401};
  for (auto _ : state) {
    auto soj = ctrw::sojourn_series(wait, jump, 1.0, grid, 60, exec);
    benchmark::DoNotOptimize(soj.density.data());
  }
}

void bm_cascade(benchmark::State& state, mc::Exec exec) {
  const auto base = renewal::pareto_tail(0.5, 1.0);
  const auto sched =
      thinning::ThinningSchedule::decades(ml::Order(0.5), 1.7724538509, 2);
  for (auto _ : state) {
    auto lv = thinning::thin_cascade_ks(
        base, sched, static_cast<std::size_t>(state.range(0)), {13, 0}, exec);
    benchmark::DoNotOptimize(lv.data());
  }
}

}  // namespace

BENCHMARK_CAPTURE(bm_empirical_pmf, serial, mc::Exec::serial)->Arg(20000);
BENCHMARK_CAPTURE(bm_empirical_pmf, openmp, mc::Exec::openmp)->Arg(20000);
BENCHMARK_CAPTURE(bm_ctrw_walkers, serial, mc::Exec::serial)->Arg(20000);
BENCHMARK_CAPTURE(bm_ctrw_walkers, openmp, mc::Exec::openmp)->Arg(20000);
BENCHMARK_CAPTURE(bm_sojourn, serial, mc::Exec::serial);
BENCHMARK_CAPTURE(bm_sojourn, openmp, mc::Exec::openmp);
BENCHMARK_CAPTURE(bm_cascade, serial, mc::Exec::serial)->Arg(20000);
BENCHMARK_CAPTURE(bm_cascade, openmp, mc::Exec::openmp)->Arg(20000);

BENCHMARK_MAIN();

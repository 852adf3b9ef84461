#include <tvspec/adaptive.hpp>
#include <tvspec/raw.hpp>
#include <tvspec/sim.hpp>
#include <tvspec/smoother.hpp>

#include <benchmark/benchmark.h>

#include <cmath>

using namespace tvspec;

namespace {

void BM_Preperiodogram(benchmark::State& state) {
  const auto T = static_cast<std::size_t>(state.range(0));
  const auto series = sim::generate(sim::tvma2(T), T, 1);
  for (auto _ : state) benchmark::DoNotOptimize(preperiodogram_modified(series));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_Preperiodogram)->RangeMultiplier(2)->Range(64, 1024)->Unit(benchmark::kMillisecond)->Complexity();

void BM_NonadaptiveSmoother(benchmark::State& state) {
  const std::size_t T = 512;
  const RawPlane raw = preperiodogram_modified(sim::generate(sim::tvma2(T), T, 1));
  const EstimationGrid g = EstimationGrid::automatic(raw.grid);
  const double b = 0.06 * static_cast<double>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(smooth_nonadaptive(raw, b, kTwoPi * b, g));
}
BENCHMARK(BM_NonadaptiveSmoother)->Arg(1)->Arg(2)->Arg(4)->Unit(benchmark::kMillisecond);

// One penalty step at T = 512 on a uniform state whose search bandwidths are
// range(0) / 2 times the default initial bandwidths.
void BM_PenaltyStep(benchmark::State& state) {
  const std::size_t T = 512;
  const RawPlane raw = preperiodogram_modified(sim::generate(sim::tvma2(T), T, 1));
  const RawPlane unit{raw.grid, raw.normalized, 1.0};
  const EstimatorConfig cfg = EstimatorConfig{}.resolved(T);
  const EstimationGrid g = cfg.estimation_grid(raw.grid);
  const double factor = 0.5 * static_cast<double>(state.range(0));
  const double bt = factor * cfg.b_t0;
  const double bf = factor * cfg.b_f0;
  const auto rows = static_cast<Eigen::Index>(g.n_time());
  const auto cols = static_cast<Eigen::Index>(g.n_freq());
  AdaptiveState prev;
  prev.f_hat = smooth_nonadaptive(unit, bt, bf, g).values;
  prev.n_hat = weight_sum_plane(bt, bf, g);
  prev.n_aux = prev.n_hat;
  prev.b_eff = Matrix::Constant(rows, cols, std::sqrt(bt * bf / kTwoPi));
  prev.theta = Matrix::Zero(rows, cols);
  prev.neg_flag = FlagMatrix::Zero(rows, cols);
  prev.search_bt = Matrix::Constant(rows, cols, bt);
  prev.search_bf = Matrix::Constant(rows, cols, bf);
  const BoxBandwidths boxes{cfg.b_star_t0, cfg.b_star_f0, cfg.b_sstar_t0, cfg.b_sstar_f0};
  for (auto _ : state) benchmark::DoNotOptimize(penalty_step(prev, unit, g, cfg, 0, boxes));
}
BENCHMARK(BM_PenaltyStep)->Arg(1)->Arg(2)->Arg(4)->Unit(benchmark::kMillisecond);

}  // namespace
BENCHMARK_MAIN();

#include <benchmark/benchmark.h>

#include "pfw/energies.hpp"
#include "pfw/flows.hpp"
#include "pfw/geometry.hpp"
#include "pfw/spectral_grid.hpp"

using namespace pfw;

namespace {

InitPair circle(int modes) {
  return init_fields(make_ball({0.5, 0.5, 0}, 0.15), make_grid(2, modes), 2.0 / modes);
}

void BM_FftRoundTrip(benchmark::State& state) {
  const auto g = make_grid(2, static_cast<int>(state.range(0)));
  const ScalarField u = band_limited_random(g, 8, 1);
  for (auto _ : state) benchmark::DoNotOptimize(from_spectral(to_spectral(u)));
  state.SetItemsProcessed(state.iterations() * static_cast<long>(g.size()));
}
BENCHMARK(BM_FftRoundTrip)->Arg(32)->Arg(64)->Arg(128);

void BM_ClassicalStep(benchmark::State& state) {
  const int modes = static_cast<int>(state.range(0));
  const auto init = circle(modes);
  ModelParams p;
  p.eps = 2.0 / modes;
  p.dt = p.eps * p.eps / (2.0 * modes * modes);
  const FlowSession s0 = FlowSession::start(p, init.u0, init.mu0);
  for (auto _ : state) {
    FlowSession s = s0;
    benchmark::DoNotOptimize(step(s));
  }
}
BENCHMARK(BM_ClassicalStep)->Arg(32)->Arg(64)->Unit(benchmark::kMillisecond);

void BM_MugnaiPenalty(benchmark::State& state) {
  const int modes = static_cast<int>(state.range(0));
  const auto init = circle(modes);
  for (auto _ : state) benchmark::DoNotOptimize(grad_mugnai_penalty(init.u0, 2.0 / modes));
}
BENCHMARK(BM_MugnaiPenalty)->Arg(32)->Arg(64)->Unit(benchmark::kMillisecond);

void BM_EvalAll(benchmark::State& state) {
  const auto init = circle(64);
  for (auto _ : state) benchmark::DoNotOptimize(eval_all(init.u0, 2.0 / 64));
}
BENCHMARK(BM_EvalAll)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();

#include <benchmark/benchmark.h>

#include "g3/aux_bracket.hpp"
#include "g3/identities.hpp"
#include "g3/setup.hpp"
#include "g3/solver.hpp"

using namespace g3;

namespace {

GaugeConfig start(const char* label, AuxKind kind, int N) {
  const LieAlgebra alg = builtin_algebra(label);
  auto th = make_theory(alg, make_aux(alg, kind, 1));
  return random_config(th, make_lattice(N), 1, 0.8 * default_amplitude(*th));
}

AuxKind kind_for(int n) { return n == 3 ? AuxKind::V : AuxKind::Pair; }
const char* label_for(int n) { return n == 3 ? "su2" : "su3"; }

void BM_Evaluate(benchmark::State& st) {
  const int n = static_cast<int>(st.range(0)), N = static_cast<int>(st.range(1));
  const GaugeConfig cfg = start(label_for(n), kind_for(n), N);
  for (auto _ : st) benchmark::DoNotOptimize(evaluate(cfg, true));
  st.SetItemsProcessed(st.iterations() * cfg.lattice().points());
}
BENCHMARK(BM_Evaluate)->Args({3, 16})->Args({3, 32})->Args({8, 16})->Unit(benchmark::kMillisecond);

void BM_Linearize(benchmark::State& st) {
  const int n = static_cast<int>(st.range(0)), N = static_cast<int>(st.range(1));
  const GaugeConfig cfg = start(label_for(n), kind_for(n), N);
  const Evaluation ev = evaluate(cfg, true);
  const JetField dA = random_gauge_modes(cfg.theory().alg(), 9, 1, 0.1).sample(cfg.lattice(), 2);
  for (auto _ : st) benchmark::DoNotOptimize(linearize(cfg, ev, dA));
  st.SetItemsProcessed(st.iterations() * cfg.lattice().points());
}
BENCHMARK(BM_Linearize)->Args({3, 16})->Args({8, 16})->Unit(benchmark::kMillisecond);

void BM_FftJets(benchmark::State& st) {
  const int N = static_cast<int>(st.range(0));
  const Lattice3 lat = make_lattice(N);
  GridDerivative D(lat);
  const JetField f = random_gauge_modes(builtin_algebra("su2"), 3, 1, 0.1).sample(lat, 0);
  for (auto _ : st) benchmark::DoNotOptimize(D.jets(f.values(), 9, 2));
  st.SetItemsProcessed(st.iterations() * lat.points());
}
BENCHMARK(BM_FftJets)->Arg(16)->Arg(32)->Arg(64)->Unit(benchmark::kMillisecond);

void BM_GaussNewtonIteration(benchmark::State& st) {
  const GaugeConfig cfg = start("su2", AuxKind::V, static_cast<int>(st.range(0)));
  SolveOptions opts;
  opts.max_iters = 1;
  for (auto _ : st) benchmark::DoNotOptimize(gauss_newton_solve(cfg, opts));
}
BENCHMARK(BM_GaussNewtonIteration)->Arg(8)->Arg(16)->Unit(benchmark::kMillisecond);

void BM_HNullspace(benchmark::State& st) {
  const LieAlgebra alg = builtin_algebra(st.range(0) == 3 ? "su2" : "su3");
  for (auto _ : st) benchmark::DoNotOptimize(solve_h_nullspace(alg));
}
BENCHMARK(BM_HNullspace)->Arg(3)->Arg(8)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();

#include <benchmark/benchmark.h>

#include "nsdiag/generators.hpp"
#include "nsdiag/grid.hpp"

using namespace nsdiag;

namespace {

VectorField tg_field(int n) {
  FieldSpec spec;
  spec.kind = FieldKind::taylor_green;
  spec.n = n;
  return generate(spec);
}

void BM_ForwardInverse(benchmark::State& state) {
  const VectorField v = tg_field(static_cast<int>(state.range(0)));
  for (auto _ : state) {
    ScalarField f = inverse(forward(v[0]));
    benchmark::DoNotOptimize(f.values.data());
  }
}
BENCHMARK(BM_ForwardInverse)->Arg(32)->Arg(64)->Unit(benchmark::kMillisecond);

void BM_LerayProject(benchmark::State& state) {
  const VectorField v = tg_field(static_cast<int>(state.range(0)));
  for (auto _ : state) {
    VectorField p = leray_project(v);
    benchmark::DoNotOptimize(p[0].values.data());
  }
}
BENCHMARK(BM_LerayProject)->Arg(32)->Arg(64)->Unit(benchmark::kMillisecond);

void BM_PressureFromVelocity(benchmark::State& state) {
  const VectorField v = tg_field(static_cast<int>(state.range(0)));
  for (auto _ : state) {
    ScalarField q = pressure_from_velocity(v);
    benchmark::DoNotOptimize(q.values.data());
  }
}
BENCHMARK(BM_PressureFromVelocity)->Arg(32)->Arg(64)->Unit(benchmark::kMillisecond);

void BM_Rk4Step(benchmark::State& state) {
  SimState st = make_sim_state(tg_field(static_cast<int>(state.range(0))), 1.0, 1e-3);
  for (auto _ : state) {
    rk4_step(st);
    benchmark::DoNotOptimize(st.t);
  }
}
BENCHMARK(BM_Rk4Step)->Arg(32)->Arg(64)->Unit(benchmark::kMillisecond);

} // namespace

BENCHMARK_MAIN();

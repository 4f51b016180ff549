#include <benchmark/benchmark.h>

#include "nsdiag/heat_besov.hpp"

#include <cmath>

using namespace nsdiag;

namespace {

ScalarField centered_gaussian(int n, double L) {
  const Grid g(n, L);
  const double c = L / 2.0;
  return ScalarField::from_function(g, [&](double x, double y, double z) {
    const double dx = x - c, dy = y - c, dz = z - c;
    return std::exp(-(dx * dx + dy * dy + dz * dz));
  });
}

void BM_HeatEvolve(benchmark::State& state) {
  const ScalarField f = centered_gaussian(static_cast<int>(state.range(0)), 12.0);
  for (auto _ : state) {
    ScalarField w = heat_evolve(f, 0.125);
    benchmark::DoNotOptimize(w.values.data());
  }
}
BENCHMARK(BM_HeatEvolve)->Arg(32)->Arg(64)->Unit(benchmark::kMillisecond);

void BM_BesovNorm(benchmark::State& state) {
  const ScalarField f = centered_gaussian(static_cast<int>(state.range(0)), 12.0);
  for (auto _ : state) {
    BesovEstimate est = besov_norm(f, {.allow_mean = true});
    benchmark::DoNotOptimize(est.norm_value);
  }
}
BENCHMARK(BM_BesovNorm)->Arg(32)->Arg(64)->Unit(benchmark::kMillisecond);

} // namespace

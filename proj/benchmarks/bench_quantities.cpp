#include <benchmark/benchmark.h>

#include "nsdiag/generators.hpp"
#include "nsdiag/scaled_quantities.hpp"

#include <numbers>

using namespace nsdiag;

namespace {

const SpaceTimeRecord& short_record() {
  static const SpaceTimeRecord rec = [] {
    SimSpec s;
    s.init.kind = FieldKind::taylor_green;
    s.init.n = 32;
    s.dt = 2e-3;
    s.steps = 40;
    s.save_every = 2;
    return simulate(s);
  }();
  return rec;
}

void BM_ScanRadii(benchmark::State& state) {
  const auto& rec = short_record();
  const Point3 x0 = {std::numbers::pi, std::numbers::pi, std::numbers::pi};
  for (auto _ : state) {
    RadiusScan scan = scan_radii(rec, x0, 0.08, {0.2, 0.25});
    benchmark::DoNotOptimize(scan.sup_G);
  }
}
BENCHMARK(BM_ScanRadii)->Unit(benchmark::kMillisecond);

void BM_BallNormScan(benchmark::State& state) {
  const auto& rec = short_record();
  const auto& v = rec.snapshots.back().v;
  const Point3 x0 = {std::numbers::pi, std::numbers::pi, std::numbers::pi};
  for (auto _ : state) {
    BallSamples b = restrict_ball(v.grid, x0, 1.0);
    benchmark::DoNotOptimize(b.indices.size());
  }
}
BENCHMARK(BM_BallNormScan)->Unit(benchmark::kMillisecond);

} // namespace

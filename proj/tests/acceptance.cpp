// Acceptance suite: one line per criterion, exit 0 iff all pass.
// argv[1] (or NSDIAG_BIN) must point at the nsdiag CLI for the end-to-end run.

#include "nsdiag/generators.hpp"
#include "nsdiag/heat_besov.hpp"
#include "nsdiag/norms.hpp"
#include "nsdiag/scaled_quantities.hpp"
#include "nsdiag/suites.hpp"
#include "nsdiag/verification.hpp"

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <functional>
#include <iostream>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

using namespace nsdiag;

namespace {

constexpr double kPi = std::numbers::pi;

struct Harness {
  int failures = 0;
  int index = 0;

  void run(const std::string& name, const std::function<std::string()>& body) {
    ++index;
    std::string detail;
    bool ok = true;
    const auto start = std::chrono::steady_clock::now();
    try {
      detail = body();
    } catch (const std::exception& e) {
      ok = false;
      detail = std::string("exception: ") + e.what();
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (!ok || detail.rfind("FAIL", 0) == 0) {
      ok = false;
      ++failures;
    }
    std::printf("[%2d] %s  %s: %s (%.1fs)\n", index, ok ? "PASS" : "FAIL", name.c_str(),
                detail.c_str(), secs);
    std::fflush(stdout);
  }
};

std::string fmt(const char* pattern, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof(buf), pattern, args...);
  return buf;
}

ScalarField unit_gaussian(const Grid& g, double sharp = 1.0, double amp = 1.0) {
  const double c = g.box_length / 2.0;
  return ScalarField::from_function(g, [=](double x, double y, double z) {
    const double dx = x - c, dy = y - c, dz = z - c;
    return amp * std::exp(-sharp * (dx * dx + dy * dy + dz * dz));
  });
}

SpaceTimeRecord tg_record(int n, double dt, int steps, int save_every) {
  SimSpec s;
  s.init.kind = FieldKind::taylor_green;
  s.init.n = n;
  s.init.box_length = 2 * kPi;
  s.viscosity = 1.0;
  s.dt = dt;
  s.steps = steps;
  s.save_every = save_every;
  return simulate(s);
}

std::string join_reports(const std::vector<CheckReport>& reports) {
  std::string out;
  for (const auto& r : reports) out += r.to_json();
  return out;
}

} // namespace

int main(int argc, char** argv) {
  std::string cli_bin = argc > 1 ? argv[1] : "";
  if (cli_bin.empty())
    if (const char* env = std::getenv("NSDIAG_BIN")) cli_bin = env;

  Harness h;
  SuiteConfig full;
  full.quick = false;

  // 1. heat-flow Besov norm of the unit Gaussian against the closed form
  h.run("besov gaussian oracle", [&] {
    const auto t0 = std::chrono::steady_clock::now();
    const Grid g(64, 12.0);
    const BesovEstimate est = besov_norm(unit_gaussian(g), {.allow_mean = true});
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const bool ok = std::abs(est.norm_value - 0.19245) <= 0.01 * 0.19245 &&
                    std::abs(est.argmax_t - 0.125) <= 0.10 * 0.125 && secs <= 30.0;
    return fmt("%snorm=%.5f (0.19245 +-1%%), argmax_t=%.4f (0.125 +-10%%), %.1fs budget 30s",
               ok ? "" : "FAIL ", est.norm_value, est.argmax_t, secs);
  });

  // 2. appendix radial integral
  h.run("appendix constant C0", [&] {
    const double c0 = appendix_constant_C0();
    const bool ok = std::abs(c0 - 2.0 * kPi) <= 1e-6;
    return fmt("%sC0=%.9f vs 2pi=%.9f", ok ? "" : "FAIL ", c0, 2.0 * kPi);
  });

  // 3. Navier-Stokes scaling invariance of A,E,C,D and of the Besov norm
  h.run("scaling invariance", [&] {
    const SpaceTimeRecord rec = tg_record(32, 2e-3, 100, 5);
    const ParabolicCylinder cyl{{kPi, kPi, kPi}, 0.2, 0.35};
    const SpaceTimeRecord resc = ns_rescale(rec, 2.0);
    const ParabolicCylinder mapped = rescale_cylinder(cyl, 2.0);
    const ScaledQuantities q1 = compute_quantities(rec, cyl);
    const ScaledQuantities q2 = compute_quantities(resc, mapped);
    double worst = 0.0;
    for (auto [a, b] : {std::pair{q1.A, q2.A}, {q1.E, q2.E}, {q1.C, q2.C}, {q1.D, q2.D}})
      if (a > 0) worst = std::max(worst, std::abs(a - b) / a);

    const Grid g(128, 12.0);
    const double base = besov_norm(unit_gaussian(g), {.allow_mean = true}).norm_value;
    double worst_b = 0.0;
    for (double lam : {2.0, 4.0}) {
      const double s =
          besov_norm(unit_gaussian(g, lam * lam, lam), {.allow_mean = true}).norm_value;
      worst_b = std::max(worst_b, std::abs(s - base) / base);
    }
    const bool ok = worst <= 0.02 && worst_b <= 0.02;
    return fmt("%sAECD drift=%.2e, besov drift=%.2e (both <= 2%%)", ok ? "" : "FAIL ", worst,
               worst_b);
  });

  // 4. Lemma 2.1 interpolation suite over the 30-field family
  h.run("lemma 2.1 suite", [&] {
    const auto reports = run_suite("lemma21", full);
    const auto& strong = reports[0];
    bool finite = strong.counted() >= 30 - 2 && strong.pass() && reports[1].pass();

    // amplitude invariance across the paired family members
    double amp_drift = 0.0;
    for (const auto& a : strong.cases)
      for (const auto& b : strong.cases) {
        const auto pos = a.input_digest.find(";a=");
        if (pos == std::string::npos) continue;
        if (a.input_digest.substr(0, pos) == b.input_digest.substr(0, pos) &&
            a.input_digest != b.input_digest && !a.degenerate && !b.degenerate)
          amp_drift = std::max(amp_drift, std::abs(a.ratio - b.ratio) / a.ratio);
      }

    // scaling invariance: lambda-rescaled gaussians on one fine grid
    const Grid g(128, 12.0);
    std::vector<NamedField> pair;
    pair.push_back({"g1", unit_gaussian(g)});
    pair.push_back({"g2", unit_gaussian(g, 4.0, 2.0)});
    const auto prep = check_interpolation(pair);
    const double scale_drift =
        std::abs(prep[0].cases[1].ratio - prep[0].cases[0].ratio) / prep[0].cases[0].ratio;

    // gaussian ratio against the closed-form oracle
    const double oracle = std::pow(kPi / 4.0, 3.0 / 8.0) /
                          std::sqrt(0.19245 * std::sqrt(3.0 * std::pow(kPi / 2.0, 1.5)));
    double gauss_ratio = 0.0;
    for (const auto& c : strong.cases)
      if (c.input_digest.rfind("gauss", 0) == 0) {
        gauss_ratio = c.ratio;
        break;
      }
    const bool ok = finite && amp_drift <= 1e-10 && scale_drift <= 0.03 &&
                    std::abs(gauss_ratio - oracle) <= 0.03 * oracle;
    return fmt("%s%zu cases, amp drift=%.1e (<=1e-10), scale drift=%.2e (<=3%%), gauss "
               "ratio=%.4f vs %.4f +-3%%",
               ok ? "" : "FAIL ", strong.cases.size(), amp_drift, scale_drift, gauss_ratio,
               oracle);
  });

  // 5. Lemma 2.2 cutoff suite and the Duhamel reconstruction
  h.run("lemma 2.2 suite", [&] {
    const auto reports = run_suite("lemma22", full);
    const auto& cutoff = reports[0];
    const auto& duhamel = reports[1];
    const bool ok = cutoff.cases.size() == 30 && cutoff.pass() && duhamel.pass();
    return fmt("%scutoff max ratio=%.3f over %zu cases (cap 50), duhamel err ratio=%.2e (cap "
               "1e-6)",
               ok ? "" : "FAIL ", cutoff.max_ratio(), cutoff.cases.size(),
               duhamel.max_ratio());
  });

  // 6. L3-from-weak-L4 embedding over 100 random fields
  h.run("embedding check", [&] {
    const auto reports = run_suite("embedding", full);
    const auto& r = reports[0];
    const bool ok = r.counted() >= 100 && r.pass();
    return fmt("%smax ratio=%.4f over %zu cases, cap=%.4f", ok ? "" : "FAIL ", r.max_ratio(),
               r.cases.size(), r.cap);
  });

  // 7. local energy identity at two time steps: residual and second-order trend
  h.run("local energy identity", [&] {
    const ParabolicCylinder cyl{{kPi, kPi, kPi}, 0.1, 0.3};
    const SpaceTimeRecord coarse = tg_record(64, 1e-3, 100, 5);
    const double res1 = check_local_energy(coarse, cyl).cases[0].ratio;
    const SpaceTimeRecord fine = tg_record(64, 5e-4, 200, 5);
    const double res2 = check_local_energy(fine, cyl).cases[0].ratio;
    const bool ok = res1 <= 0.02 && res2 <= 0.005;
    return fmt("%sresidual %.4f%% at dt=1e-3 (<=2%%), %.4f%% at dt=5e-4 (<=0.5%%)",
               ok ? "" : "FAIL ", 100 * res1, 100 * res2);
  });

  // 8. iteration engine and the main-bound shape
  h.run("iteration engine + main bound", [&] {
    std::mt19937_64 rng(2024);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    double worst = 0.0;
    for (int k = 0; k < 100; ++k) {
      IterationState s;
      s.theta = 0.2 * std::pow(10.0, -2.5 * u(rng));
      s.c_iter = (0.05 + 0.95 * u(rng)) / (2.0 * std::sqrt(s.theta));
      s.E0 = 10 * u(rng);
      s.M2 = 10 * u(rng);
      s.M6 = 10 * u(rng);
      worst = std::max(worst, run_iteration(s, 60).max_closed_form_diff);
    }
    IterationState geo;
    geo.theta = 1.0 / 16.0;
    geo.c_iter = 2.0;
    geo.E0 = 1.0;
    geo.M2 = 0.0;
    geo.M6 = 0.0;
    const IterationResult gr = run_iteration(geo, 50);
    double geo_err = 0.0;
    for (int k = 0; k <= 50; ++k)
      geo_err = std::max(geo_err,
                         std::abs(gr.trajectory[k] - std::pow(0.25, k)) /
                             std::max(1e-300, std::pow(0.25, k)));
    const auto mb = run_suite("main-bound", full);
    const bool ok = worst <= 1e-12 && geo_err <= 1e-12 && mb[0].pass();
    return fmt("%sclosed-form diff=%.1e (<=1e-12), geometric err=%.1e, bound stability "
               "max ratio=%.3f (cap 2)",
               ok ? "" : "FAIL ", worst, geo_err, mb[0].max_ratio());
  });

  // 9. pressure decay and C-bounds on solver records, deterministic reports
  h.run("pressure decay + C bounds", [&] {
    const auto cb = run_suite("c-bounds", full);
    bool ok = true;
    std::size_t cases = 0;
    for (const auto& r : cb) {
      ok = ok && r.pass();
      cases += r.cases.size();
    }
    const auto pd1 = run_suite("pressure-decay", full);
    const auto pd2 = run_suite("pressure-decay", full);
    ok = ok && pd1[0].pass() && pd1[0].counted() == 3;
    const bool deterministic = join_reports(pd1) == join_reports(pd2);
    ok = ok && deterministic;
    return fmt("%sC-bound cases=%zu all capped, pressure-decay max ratio=%.4f, reports "
               "byte-identical=%s",
               ok ? "" : "FAIL ", cases, pd1[0].max_ratio(), deterministic ? "yes" : "no");
  });

  // 10. simulator oracles and the end-to-end quick verify budget
  h.run("simulator + verify-all budget", [&] {
    // linear decay of a tiny single mode matches exp(-|k|^2 t)
    FieldSpec fs;
    fs.kind = FieldKind::single_mode;
    fs.n = 32;
    fs.box_length = 2 * kPi;
    fs.amplitude = 1e-6;
    SimState st = make_sim_state(generate(fs), 1.0, 1e-3);
    for (int k = 0; k < 10; ++k) rk4_step(st);
    const double decay_err =
        std::abs(state_velocity(st).linf() - 1e-6 * std::exp(-st.t)) / 1e-6;

    // RK4 convergence order on Taylor-Green
    auto final_v = [&](double dt, int steps) {
      SimSpec s;
      s.init.kind = FieldKind::taylor_green;
      s.init.n = 16;
      s.init.box_length = 2 * kPi;
      s.dt = dt;
      s.steps = steps;
      s.save_every = steps;
      return simulate(s).snapshots.back().v;
    };
    const VectorField ref = final_v(2.5e-4, 400);
    auto errv = [&](const VectorField& v) {
      double m = 0.0;
      for (int c = 0; c < 3; ++c)
        for (std::size_t i = 0; i < v[c].values.size(); ++i)
          m = std::max(m, std::abs(v[c].values[i] - ref[c].values[i]));
      return m;
    };
    const double order = std::log2(errv(final_v(4e-3, 25)) / errv(final_v(2e-3, 50)));

    // kinetic energy never grows
    const SpaceTimeRecord rec = tg_record(32, 1e-3, 100, 5);
    bool energy_ok = true;
    for (std::size_t i = 1; i < rec.snapshots.size(); ++i) {
      const double e0 = rec.snapshots[i - 1].v.l2();
      const double e1 = rec.snapshots[i].v.l2();
      energy_ok = energy_ok && e1 <= e0 * (1.0 + 1e-13);
    }

    // full quick verification through the CLI stays inside 10 minutes
    double cli_secs = -1.0;
    bool cli_ok = false;
    if (!cli_bin.empty()) {
      const auto t0 = std::chrono::steady_clock::now();
      const std::string cmd = cli_bin + " verify all --quick --out-dir " +
                              std::string("nsdiag_acceptance_reports") + " >/dev/null 2>&1";
      const int rc = std::system(cmd.c_str());
      cli_secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
      cli_ok = rc == 0 && cli_secs <= 600.0;
    }
    const bool ok = decay_err <= 1e-8 && order >= 3.5 && energy_ok && cli_ok;
    return fmt("%sdecay err=%.1e (<=1e-8), RK4 order=%.2f (>=3.5), energy monotone=%s, "
               "verify-all-quick=%.0fs (<=600s, exit ok=%s)",
               ok ? "" : "FAIL ", decay_err, order, energy_ok ? "yes" : "no", cli_secs,
               cli_ok ? "yes" : "no");
  });

  std::printf("%d/%d criteria passed\n", h.index - h.failures, h.index);
  return h.failures == 0 ? 0 : 1;
}

#include "nsdiag/suites.hpp"

#include "nsdiag/generators.hpp"
#include "nsdiag/heat_besov.hpp"
#include "nsdiag/norms.hpp"
#include "nsdiag/verification.hpp"

#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>

namespace nsdiag {

namespace {

constexpr double kPi = std::numbers::pi;

ScalarField gaussian_scalar(const Grid& g, const Point3& c, double sigma, double amp) {
  const double s2 = sigma * sigma;
  auto signed_delta = [&](double a, double b) {
    double d = a - b;
    while (d > g.box_length / 2) d -= g.box_length;
    while (d <= -g.box_length / 2) d += g.box_length;
    return d;
  };
  return ScalarField::from_function(g, [&](double x, double y, double z) {
    const double dx = signed_delta(x, c[0]);
    const double dy = signed_delta(y, c[1]);
    const double dz = signed_delta(z, c[2]);
    return amp * std::exp(-(dx * dx + dy * dy + dz * dz) / s2);
  });
}

ScalarField random_scalar(const Grid& g, std::uint64_t seed, double scale) {
  FieldSpec spec;
  spec.kind = FieldKind::random_solenoidal;
  spec.n = g.n;
  spec.box_length = g.box_length;
  spec.length_scale = scale;
  spec.seed = seed;
  return generate(spec)[0];
}

// Taylor-Green run used by the identity and bound checks at full resolution
SpaceTimeRecord make_tg64() {
  SimSpec s;
  s.init.kind = FieldKind::taylor_green;
  s.init.n = 64;
  s.init.box_length = 2.0 * kPi;
  s.viscosity = 1.0;
  s.dt = 1e-3;
  s.steps = 100;
  s.save_every = 5;
  return simulate(s);
}

// longer, coarser run: supports unit cylinders and radius sweeps to r ~ 0.22
SpaceTimeRecord make_tg_long() {
  SimSpec s;
  s.init.kind = FieldKind::taylor_green;
  s.init.n = 32;
  s.init.box_length = 2.0 * kPi;
  s.viscosity = 1.0;
  s.dt = 6e-3;
  s.steps = 200;
  s.save_every = 1;
  return simulate(s);
}

std::vector<NamedField> lemma21_family(bool quick, std::uint64_t seed) {
  const Grid g(64, 14.0);
  const Point3 c = {7.0, 7.0, 7.0};
  std::vector<NamedField> fam;
  const std::vector<double> widths = quick ? std::vector<double>{0.70, 0.80}
                                           : std::vector<double>{0.68, 0.72, 0.77, 0.81};
  const std::vector<double> amps = quick ? std::vector<double>{1.0} : std::vector<double>{1.0, 2.5};
  for (double w : widths)
    for (double a : amps)
      fam.push_back({"gauss;s=" + std::to_string(w) + ";a=" + std::to_string(a),
                     gaussian_scalar(g, c, w, a)});
  // vortex velocity profiles are narrower than their stream function, so they
  // need the finer grid to clear the 4 dx resolvability gate
  const std::vector<double> vwidths =
      quick ? std::vector<double>{0.75} : std::vector<double>{0.70, 0.75, 0.80};
  const std::vector<double> vamps = quick ? std::vector<double>{1.0} : std::vector<double>{1.0, 2.0};
  for (double w : vwidths)
    for (double a : vamps) {
      FieldSpec spec;
      spec.kind = FieldKind::gaussian_vortex;
      spec.n = 128;
      spec.box_length = g.box_length;
      spec.length_scale = w;
      spec.amplitude = a;
      fam.push_back({"vortex;s=" + std::to_string(w) + ";a=" + std::to_string(a), generate(spec)});
    }
  const int nrand = quick ? 7 : 16;
  for (int k = 0; k < nrand; ++k) {
    FieldSpec spec;
    spec.kind = FieldKind::random_solenoidal;
    spec.n = g.n;
    spec.box_length = g.box_length;
    spec.length_scale = 1.5;
    spec.seed = seed + k;
    // periodic random fields are not meant to decay; skip the compact gate
    fam.push_back({"random;seed=" + std::to_string(spec.seed), generate(spec), false});
  }
  return fam;
}

double cap_for(const SuiteConfig& cfg, const std::string& suite, const std::string& check,
               double dflt) {
  if (auto it = cfg.cap_overrides.find(check); it != cfg.cap_overrides.end()) return it->second;
  if (auto it = cfg.cap_overrides.find(suite); it != cfg.cap_overrides.end()) return it->second;
  return dflt;
}

std::vector<CheckReport> suite_lemma21(const SuiteConfig& cfg) {
  auto fam = lemma21_family(cfg.quick, cfg.seed);
  auto reports = check_interpolation(fam, cap_for(cfg, "lemma21", "lemma21_L4", 10.0));
  for (auto& r : reports) r.cap = cap_for(cfg, "lemma21", r.check, 10.0);
  return reports;
}

std::vector<CheckReport> suite_lemma22(const SuiteConfig& cfg) {
  const Grid g(64, 12.0);
  const Point3 c = {6.0, 6.0, 6.0};
  std::vector<std::pair<std::string, ScalarField>> fields;
  const std::vector<double> widths =
      cfg.quick ? std::vector<double>{0.5, 0.65}
                : std::vector<double>{0.5, 0.55, 0.6, 0.65, 0.7};
  for (double w : widths)
    fields.emplace_back("gauss;s=" + std::to_string(w), gaussian_scalar(g, c, w, 1.0));
  const int nrand = cfg.quick ? 2 : 5;
  for (int k = 0; k < nrand; ++k)
    fields.emplace_back("random;seed=" + std::to_string(cfg.seed + k),
                        random_scalar(g, cfg.seed + k, 1.2));

  std::vector<std::pair<std::string, ScalarField>> bumps;
  const std::vector<double> bsig =
      cfg.quick ? std::vector<double>{1.2, 2.0} : std::vector<double>{1.2, 1.6, 2.0};
  for (double s : bsig)
    bumps.emplace_back("bump;s=" + std::to_string(s), make_bump(g, c, s));

  CheckReport cutoff = verify_cutoff_lemma(fields, bumps, cap_for(cfg, "lemma22", "lemma22_cutoff", 50.0));

  // Duhamel reconstruction of the commutator against its direct evaluation;
  // the finer grid keeps the bump transition resolved (>= 4 cells)
  const Grid gd(128, 12.0);
  const Point3 cd = {6.0, 6.0, 6.0};
  const ScalarField f = ScalarField::from_function(gd, [&](double x, double y, double z) {
    const double dx = x - cd[0], dy = y - cd[1], dz = z - cd[2];
    return std::exp(-4.0 * (dx * dx + dy * dy + dz * dz));
  });
  const ScalarField phi = make_bump(gd, cd, 2.0);
  std::vector<double> t_grid;
  const int tcount = cfg.quick ? 6 : 10;
  for (int i = 0; i < tcount; ++i)
    t_grid.push_back(1e-3 * std::pow(256.0, double(i) / (tcount - 1)));
  const CommutatorRecord rec = cutoff_commutator(f, phi, t_grid);
  CheckReport duhamel;
  duhamel.check = "lemma22_duhamel";
  duhamel.cap = cap_for(cfg, "lemma22_duhamel", "lemma22_duhamel", 1e-6);
  duhamel.add_case("gauss(4.0)*bump(2.0)", rec.max_reconstruction_error, f.linf() + 1.0);
  return {cutoff, duhamel};
}

std::vector<CheckReport> suite_lemma23(const SuiteConfig& cfg) {
  const Grid g(64, 18.0);
  const Point3 c = {9.0, 9.0, 9.0};
  std::vector<NamedField> fam;
  const std::vector<double> widths = cfg.quick ? std::vector<double>{1.0}
                                               : std::vector<double>{0.9, 1.0};
  const std::vector<double> amps = cfg.quick ? std::vector<double>{1.0} : std::vector<double>{1.0, 2.0};
  for (double w : widths)
    for (double a : amps)
      fam.push_back({"gauss;s=" + std::to_string(w) + ";a=" + std::to_string(a),
                     gaussian_scalar(g, c, w, a)});
  CheckReport r = check_localized(fam, c, {0.5, 1.0, 2.0},
                                  cap_for(cfg, "lemma23", "lemma23_localized", 50.0));
  return {r};
}

std::vector<CheckReport> suite_c_bounds(const SuiteConfig& cfg) {
  const SpaceTimeRecord rec = make_tg_long();
  const double t0 = 1.1;
  std::vector<ParabolicCylinder> cyls;
  const std::vector<Point3> centers =
      cfg.quick ? std::vector<Point3>{{kPi, kPi, kPi}}
                : std::vector<Point3>{{kPi, kPi, kPi}, {kPi / 2, kPi, kPi}, {kPi, kPi / 2, 3 * kPi / 2}};
  const std::vector<double> radii =
      cfg.quick ? std::vector<double>{0.3, 0.5} : std::vector<double>{0.3, 0.4, 0.5};
  for (const auto& c : centers)
    for (double r : radii) cyls.push_back({c, t0, r});
  auto res = check_C_bounds(rec, cyls, cap_for(cfg, "c-bounds", "c_bound_2r", 50.0));
  res.eq_scaled.cap = cap_for(cfg, "c-bounds", "c_bound_scaled", 50.0);

  CheckReport young = check_young_splits(rec, {kPi, kPi, kPi}, t0, {0.8, 1.0}, 4.0, 0.25,
                                         cap_for(cfg, "c-bounds", "young_splits", 50.0));
  return {res.eq_2r, res.eq_scaled, young};
}

std::vector<CheckReport> suite_energy(const SuiteConfig& cfg) {
  const SpaceTimeRecord rec = make_tg64();
  const ParabolicCylinder cyl{{kPi, kPi, kPi}, 0.1, 0.3};
  CheckReport r = check_local_energy(rec, cyl, cap_for(cfg, "energy", "local_energy_identity", 0.02));
  return {r};
}

std::vector<CheckReport> suite_pressure_decay(const SuiteConfig& cfg) {
  const SpaceTimeRecord rec = make_tg_long();
  const std::vector<std::pair<double, double>> pairs =
      cfg.quick ? std::vector<std::pair<double, double>>{{0.3, 0.6}}
                : std::vector<std::pair<double, double>>{{0.3, 0.6}, {0.3, 1.0}, {0.5, 1.0}};
  CheckReport r = check_pressure_decay(rec, {kPi, kPi, kPi}, 1.1, pairs,
                                       cap_for(cfg, "pressure-decay", "pressure_decay", 50.0));
  return {r};
}

std::vector<CheckReport> suite_iteration(const SuiteConfig& cfg) {
  CheckReport closed;
  closed.check = "iteration_closed_form";
  closed.cap = cap_for(cfg, "iteration", "iteration_closed_form", 1e-12);
  std::mt19937_64 rng(cfg.seed ^ 0xabcdef12345ull);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  const int cases = cfg.quick ? 30 : 100;
  for (int k = 0; k < cases; ++k) {
    IterationState s;
    s.theta = std::pow(10.0, -3.0 * unif(rng)) * 0.2; // log-uniform in (2e-4, 0.2]
    s.c_iter = (0.05 + 0.95 * unif(rng)) / (2.0 * std::sqrt(s.theta));
    s.E0 = 10.0 * unif(rng);
    s.M2 = 10.0 * unif(rng);
    s.M6 = 10.0 * unif(rng);
    const IterationResult res = run_iteration(s, 60);
    closed.add_case("sweep;k=" + std::to_string(k), res.max_closed_form_diff, 1.0);
  }
  // degenerate-source decay must match the pure geometric closed form
  {
    IterationState s;
    s.theta = 1.0 / 16.0;
    s.c_iter = 2.0;
    s.E0 = 1.0;
    s.M2 = 0.0;
    s.M6 = 0.0;
    const IterationResult res = run_iteration(s, 50);
    closed.add_case("geometric", res.max_closed_form_diff, 1.0);
  }

  CheckReport young;
  young.check = "young_inequality";
  young.cap = cap_for(cfg, "iteration", "young_inequality", 1.0);
  const int ycases = cfg.quick ? 50 : 200;
  for (int k = 0; k < ycases; ++k) {
    const double a = 100.0 * unif(rng);
    const double b = 100.0 * unif(rng);
    const double d = std::pow(10.0, 2.0 - 4.0 * unif(rng));
    const double lhs = std::pow(a, 0.75) * b;
    const double rhs = d * a + std::pow(d, -3.0) * b * b * b * b;
    young.add_case("spot;k=" + std::to_string(k), lhs, rhs);
  }
  return {closed, young};
}

std::vector<CheckReport> suite_embedding(const SuiteConfig& cfg) {
  const Grid g(32, 8.0);
  const Point3 c = {4.0, 4.0, 4.0};
  CheckReport r;
  r.check = "embedding_l3_weak_l4";
  r.cap = cap_for(cfg, "embedding", "embedding_l3_weak_l4", embedding_sharp_constant() * 1.05);
  const int cases = cfg.quick ? 20 : 100;
  for (int k = 0; k < cases; ++k) {
    const ScalarField u = random_scalar(g, cfg.seed + 1000 + k, 1.0);
    r.cases.push_back(embedding_l3_from_weak_l4(u, c, 1.5, "random;seed=" +
                                                               std::to_string(cfg.seed + 1000 + k)));
  }
  // plateau: the layer-cake computation collapses, ratio = |B|^{1/12}
  {
    FieldSpec spec;
    spec.kind = FieldKind::plateau;
    spec.n = g.n;
    spec.box_length = g.box_length;
    spec.length_scale = 1.0;
    const VectorField p = generate(spec);
    r.cases.push_back(embedding_l3_from_weak_l4(p[0], c, 1.5, "plateau"));
  }
  return {r};
}

std::vector<CheckReport> suite_main_bound(const SuiteConfig& cfg) {
  const SpaceTimeRecord rec = make_tg_long();
  MainBoundResult res = check_main_bound(rec, {kPi, kPi, kPi}, 1.1, 0.5);
  res.report.cap = cap_for(cfg, "main-bound", "main_bound_stability", 2.0);
  return {res.report};
}

} // namespace

std::vector<std::string> suite_names() {
  return {"lemma21", "lemma22", "lemma23", "c-bounds", "energy",
          "pressure-decay", "iteration", "embedding", "main-bound", "all"};
}

std::vector<CheckReport> run_suite(const std::string& name, const SuiteConfig& cfg) {
  if (name == "lemma21") return suite_lemma21(cfg);
  if (name == "lemma22") return suite_lemma22(cfg);
  if (name == "lemma23") return suite_lemma23(cfg);
  if (name == "c-bounds") return suite_c_bounds(cfg);
  if (name == "energy") return suite_energy(cfg);
  if (name == "pressure-decay") return suite_pressure_decay(cfg);
  if (name == "iteration") return suite_iteration(cfg);
  if (name == "embedding") return suite_embedding(cfg);
  if (name == "main-bound") return suite_main_bound(cfg);
  if (name == "all") {
    std::vector<CheckReport> all;
    for (const auto& s : suite_names()) {
      if (s == "all") continue;
      auto part = run_suite(s, cfg);
      all.insert(all.end(), part.begin(), part.end());
    }
    return all;
  }
  throw std::invalid_argument("unknown suite: " + name);
}

} // namespace nsdiag

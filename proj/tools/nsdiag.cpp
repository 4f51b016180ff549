// nsdiag: scale-invariant Navier-Stokes energy diagnostics on periodic boxes.
// Subcommands: gen | besov | quantities | verify | simulate.

#include "nsdiag/check_report.hpp"
#include "nsdiag/field_io.hpp"
#include "nsdiag/generators.hpp"
#include "nsdiag/heat_besov.hpp"
#include "nsdiag/scaled_quantities.hpp"
#include "nsdiag/suites.hpp"
#include "nsdiag/verification.hpp"
#include "nsdiag/version.hpp"

#include <CLI11.hpp>
#ifdef _OPENMP
#include <omp.h>
#endif

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

namespace {

using namespace nsdiag;

// canonicalized invocation: its digest is stamped into every report
struct RunConfig {
  std::string command;
  std::vector<std::pair<std::string, std::string>> params;

  void set(const std::string& k, const std::string& v) { params.emplace_back(k, v); }
  template <typename T>
  void set_num(const std::string& k, T v) {
    std::ostringstream os;
    os.precision(17);
    os << v;
    params.emplace_back(k, os.str());
  }
  std::string canonical() const {
    std::string s = command;
    for (const auto& [k, v] : params) s += ";" + k + "=" + v;
    return s;
  }
  std::string digest() const { return hex_digest(canonical()); }
};

void apply_threads(int threads) {
  if (threads <= 0) {
    if (const char* env = std::getenv("NSDIAG_THREADS")) threads = std::atoi(env);
  }
#ifdef _OPENMP
  if (threads > 0) omp_set_num_threads(threads);
#else
  (void)threads;
#endif
}

std::vector<double> parse_list(const std::string& s) {
  std::vector<double> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(std::stod(item));
  return out;
}

Point3 parse_point(const std::string& s) {
  const auto v = parse_list(s);
  if (v.size() != 3) throw CLI::ValidationError("expected x,y,z");
  return {v[0], v[1], v[2]};
}

void write_or_print(const std::string& path, const std::string& content) {
  if (path.empty() || path == "-") {
    std::cout << content;
    if (!content.empty() && content.back() != '\n') std::cout << '\n';
    return;
  }
  std::ofstream os(path);
  if (!os) throw std::runtime_error("cannot open for writing: " + path);
  os << content;
  if (!content.empty() && content.back() != '\n') os << '\n';
}

std::string slurp(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw std::runtime_error("cannot open: " + path);
  std::ostringstream os;
  os << is.rdbuf();
  return os.str();
}

int cmd_gen(const std::string& spec_file, const std::string& kind, int n, double L, double amp,
            double scale, std::uint64_t seed, const std::string& center, const std::string& out) {
  FieldSpec spec;
  if (!spec_file.empty()) {
    spec = parse_field_spec(slurp(spec_file));
  } else {
    spec.kind = field_kind_from_string(kind);
    spec.n = n;
    spec.box_length = L;
    spec.amplitude = amp;
    spec.length_scale = scale;
    spec.seed = seed;
    if (!center.empty()) spec.center = parse_point(center);
  }
  const VectorField v = generate(spec);
  write_f3b1(out, v);
  return 0;
}

int cmd_besov(const std::string& input, double t_min, double t_max, int per_decade,
              bool allow_mean, const std::string& out) {
  BesovParams p;
  p.t_min = t_min;
  p.t_max = t_max;
  p.points_per_decade = per_decade;
  p.allow_mean = allow_mean;

  RunConfig cfg;
  cfg.command = "besov";
  cfg.set("in", input);
  cfg.set_num("t_min", t_min);
  cfg.set_num("t_max", t_max);
  cfg.set_num("per_decade", per_decade);
  cfg.set_num("allow_mean", allow_mean);

  const AnyField f = read_f3b1(input);
  BesovEstimate est;
  if (const auto* s = std::get_if<ScalarField>(&f)) {
    est = besov_norm(*s, p);
  } else {
    est = besov_norm(std::get<VectorField>(f), p);
  }
  write_or_print(out, est.to_json(kVersion, cfg.digest()));
  return 0;
}

int cmd_quantities(const std::string& input, const std::string& x0s, double t0,
                   const std::string& radii_s, const std::string& out, bool keep_going) {
  const SpaceTimeRecord rec = read_st31(input);
  const Point3 x0 = parse_point(x0s);
  const std::vector<double> radii = parse_list(radii_s);
  if (radii.empty()) throw CLI::ValidationError("--radii must not be empty");
  const RadiusScan scan = scan_radii(rec, x0, t0, radii);

  RunConfig cfg;
  cfg.command = "quantities";
  cfg.set("in", input);
  cfg.set("x0", x0s);
  cfg.set_num("t0", t0);
  cfg.set("radii", radii_s);
  std::ostringstream body;
  body << "# nsdiag " << kVersion << " config " << cfg.digest() << '\n' << scan.to_csv();
  write_or_print(out, body.str());

  if (!keep_going)
    for (const auto& row : scan.rows)
      if (!row.ok) {
        std::cerr << "error: r=" << row.r << ": " << row.error << '\n';
        return 1;
      }
  return 0;
}

int cmd_verify(const std::string& suite, bool quick, const std::vector<std::string>& cap_kvs,
               const std::string& out_dir, std::uint64_t seed) {
  const auto names = suite_names();
  if (std::find(names.begin(), names.end(), suite) == names.end())
    throw CLI::ValidationError("unknown suite: " + suite);
  SuiteConfig cfg;
  cfg.quick = quick;
  cfg.seed = seed;
  for (const auto& kv : cap_kvs) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos) throw CLI::ValidationError("--cap expects name=value");
    cfg.cap_overrides[kv.substr(0, eq)] = std::stod(kv.substr(eq + 1));
  }

  RunConfig rcfg;
  rcfg.command = "verify";
  rcfg.set("suite", suite);
  rcfg.set_num("quick", quick);
  rcfg.set_num("seed", seed);
  for (const auto& kv : cap_kvs) rcfg.set("cap", kv);
  const std::string digest = rcfg.digest();

  const auto reports = run_suite(suite, cfg);

  if (!out_dir.empty()) std::filesystem::create_directories(out_dir);
  for (const auto& r : reports) {
    const std::string body = r.to_json(kVersion, digest);
    if (out_dir.empty()) {
      std::cout << body << '\n';
    } else {
      write_or_print(out_dir + "/" + r.check + ".json", body);
    }
  }
  const std::string summary = reports_csv_summary(reports);
  if (out_dir.empty()) {
    std::cout << summary;
  } else {
    write_or_print(out_dir + "/summary.csv", summary);
  }

  bool all_pass = true;
  for (const auto& r : reports) {
    std::cerr << (r.pass() ? "PASS " : "FAIL ") << r.check << "  max_ratio=" << r.max_ratio()
              << " cap=" << r.cap << '\n';
    all_pass = all_pass && r.pass();
  }
  return all_pass ? 0 : 1;
}

int cmd_simulate(const std::string& spec_file, const std::string& init, double nu, double dt,
                 int steps, int save_every, bool no_dealias, const std::string& out) {
  SpaceTimeRecord rec;
  if (!spec_file.empty()) {
    SimSpec spec = parse_sim_spec(slurp(spec_file));
    rec = simulate(spec);
  } else {
    if (init.empty()) throw CLI::ValidationError("simulate needs --init or --spec");
    const VectorField v0 = read_f3b1_vector(init);
    RunConfig cfg;
    cfg.command = "simulate";
    cfg.set("init", init);
    cfg.set_num("nu", nu);
    cfg.set_num("dt", dt);
    cfg.set_num("steps", steps);
    cfg.set_num("save_every", save_every);
    cfg.set_num("dealias", !no_dealias);
    rec = simulate_from(v0, nu, dt, steps, save_every, !no_dealias, "cli:" + cfg.digest());
  }
  write_st31(out, rec);
  std::cerr << "wrote " << rec.snapshots.size() << " snapshots to " << out << '\n';
  return 0;
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"nsdiag: scaled energy quantities, heat-flow Besov norms and "
               "inequality checks for Navier-Stokes fields on periodic boxes"};
  app.require_subcommand(1);
  int threads = 0;
  app.add_option("--threads", threads, "worker thread count (default: cores, env NSDIAG_THREADS)");

  // gen
  auto* gen = app.add_subcommand("gen", "generate a synthetic divergence-free field");
  std::string g_kind = "taylor-green", g_center, g_out, g_spec;
  int g_n = 64;
  double g_L = 6.283185307179586, g_amp = 1.0, g_scale = 1.0;
  std::uint64_t g_seed = 0;
  gen->add_option("--spec", g_spec, "key = value spec file (overrides the flags)");
  gen->add_option("--kind", g_kind, "taylor-green|gaussian-vortex|abc|random-solenoidal|single-mode|plateau");
  gen->add_option("--n", g_n, "samples per dimension (power of two)");
  gen->add_option("--L", g_L, "box length");
  gen->add_option("--amp", g_amp, "amplitude");
  gen->add_option("--scale", g_scale, "mode multiplier or physical width");
  gen->add_option("--seed", g_seed, "seed for random kinds");
  gen->add_option("--center", g_center, "center x,y,z (default: box center)");
  gen->add_option("-o,--output", g_out, "output F3B1 file")->required();

  // besov
  auto* besov = app.add_subcommand("besov", "heat-flow Besov norm of a field file");
  std::string b_in, b_out;
  double b_tmin = 0.0, b_tmax = 0.0;
  int b_pd = 8;
  bool b_allow_mean = false;
  besov->add_option("input", b_in, "F3B1 field file")->required();
  besov->add_option("--t-min", b_tmin, "scan start (default dx^2/4)");
  besov->add_option("--t-max", b_tmax, "scan end (default (L/4)^2)");
  besov->add_option("--per-decade", b_pd, "scan points per decade");
  besov->add_flag("--allow-mean", b_allow_mean, "drop a nonzero zero mode instead of failing");
  besov->add_option("-o,--output", b_out, "output JSON (default stdout)");

  // quantities
  auto* quant = app.add_subcommand("quantities", "A,E,C,D,G,g over a radius sweep");
  std::string q_in, q_x0 = "3.141592653589793,3.141592653589793,3.141592653589793";
  std::string q_radii, q_out;
  double q_t0 = 0.0;
  bool q_keep = false;
  quant->add_option("input", q_in, "ST31 record file")->required();
  quant->add_option("--x0", q_x0, "cylinder center x,y,z");
  quant->add_option("--t0", q_t0, "cylinder top time")->required();
  quant->add_option("--radii", q_radii, "comma-separated radii")->required();
  quant->add_option("-o,--output", q_out, "output CSV (default stdout)");
  quant->add_flag("--keep-going", q_keep, "exit 0 even when some radii fail");

  // verify
  auto* verify = app.add_subcommand("verify", "run an inequality check suite");
  std::string v_suite, v_out_dir;
  bool v_quick = false;
  std::vector<std::string> v_caps;
  std::uint64_t v_seed = 1;
  verify->add_option("suite", v_suite, "lemma21|lemma22|lemma23|c-bounds|energy|pressure-decay|iteration|embedding|main-bound|all")
      ->required();
  verify->add_flag("--quick", v_quick, "smaller families, same tolerances");
  verify->add_option("--cap", v_caps, "override a ratio cap, e.g. lemma21=0.5");
  verify->add_option("--out-dir", v_out_dir, "write per-check JSON and summary.csv here");
  verify->add_option("--seed", v_seed, "family seed");

  // simulate
  auto* sim = app.add_subcommand("simulate", "pseudospectral Navier-Stokes run");
  std::string s_init, s_out, s_spec;
  double s_nu = 1.0, s_dt = 1e-3;
  int s_steps = 100, s_save = 1;
  bool s_nodealias = false;
  sim->add_option("--spec", s_spec, "key = value run spec file (replaces the flags)");
  sim->add_option("--init", s_init, "initial velocity F3B1 file");
  sim->add_option("--nu", s_nu, "viscosity (the equations fix nu = 1)");
  sim->add_option("--dt", s_dt, "time step");
  sim->add_option("--steps", s_steps, "step count");
  sim->add_option("--save-every", s_save, "snapshot cadence in steps");
  sim->add_flag("--no-dealias", s_nodealias, "disable the 2/3 rule");
  sim->add_option("-o,--output", s_out, "output ST31 record")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2; // usage errors are exit 2, --help is 0
  }

  apply_threads(threads);
  try {
    if (*gen) return cmd_gen(g_spec, g_kind, g_n, g_L, g_amp, g_scale, g_seed, g_center, g_out);
    if (*besov) return cmd_besov(b_in, b_tmin, b_tmax, b_pd, b_allow_mean, b_out);
    if (*quant) return cmd_quantities(q_in, q_x0, q_t0, q_radii, q_out, q_keep);
    if (*verify) return cmd_verify(v_suite, v_quick, v_caps, v_out_dir, v_seed);
    if (*sim) return cmd_simulate(s_spec, s_init, s_nu, s_dt, s_steps, s_save, s_nodealias, s_out);
  } catch (const CLI::ValidationError& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 2;
}

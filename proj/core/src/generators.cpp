#include "nsdiag/generators.hpp"

#include "nsdiag/check_report.hpp"
#include "nsdiag/fft.hpp"

#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>
#include <random>
#include <set>
#include <sstream>
#include <stdexcept>

namespace nsdiag {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

Point3 resolve_center(const FieldSpec& spec) {
  if (spec.center[0] >= 0.0) return spec.center;
  const double half = spec.box_length / 2.0;
  return {half, half, half};
}

int mode_multiplier(const FieldSpec& spec) {
  const int m = static_cast<int>(std::lround(spec.length_scale));
  if (m < 1 || m > spec.n / 4)
    throw std::invalid_argument("generate: mode multiplier must satisfy 1 <= m <= n/4");
  return m;
}

void require_resolved_width(const FieldSpec& spec) {
  const double dx = spec.box_length / spec.n;
  if (spec.length_scale < 4.0 * dx)
    throw std::invalid_argument("generate: length scale below 4 dx is unresolvable");
}

VectorField taylor_green(const FieldSpec& spec) {
  const Grid g(spec.n, spec.box_length);
  const double k = kTwoPi * mode_multiplier(spec) / g.box_length;
  const double a = spec.amplitude;
  VectorField v(g);
  const int n = g.n;
#pragma omp parallel for collapse(2)
  for (int iz = 0; iz < n; ++iz)
    for (int iy = 0; iy < n; ++iy) {
      const double y = g.coord(iy), z = g.coord(iz);
      const double cy = std::cos(k * y), sy = std::sin(k * y), cz = std::cos(k * z);
      for (int ix = 0; ix < n; ++ix) {
        const double x = g.coord(ix);
        const std::size_t i = g.index(ix, iy, iz);
        v[0].values[i] = a * std::sin(k * x) * cy * cz;
        v[1].values[i] = -a * std::cos(k * x) * sy * cz;
        v[2].values[i] = 0.0;
      }
    }
  return v;
}

VectorField abc_flow(const FieldSpec& spec) {
  const Grid g(spec.n, spec.box_length);
  const double k = kTwoPi * mode_multiplier(spec) / g.box_length;
  const double a = spec.amplitude;
  VectorField v(g);
  const int n = g.n;
#pragma omp parallel for collapse(2)
  for (int iz = 0; iz < n; ++iz)
    for (int iy = 0; iy < n; ++iy) {
      const double y = g.coord(iy), z = g.coord(iz);
      for (int ix = 0; ix < n; ++ix) {
        const double x = g.coord(ix);
        const std::size_t i = g.index(ix, iy, iz);
        v[0].values[i] = a * (std::sin(k * z) + std::cos(k * y));
        v[1].values[i] = a * (std::sin(k * x) + std::cos(k * z));
        v[2].values[i] = a * (std::sin(k * y) + std::cos(k * x));
      }
    }
  return v;
}

VectorField single_mode(const FieldSpec& spec) {
  const Grid g(spec.n, spec.box_length);
  const double k = kTwoPi * mode_multiplier(spec) / g.box_length;
  VectorField v(g);
  const int n = g.n;
  for (int iz = 0; iz < n; ++iz)
    for (int iy = 0; iy < n; ++iy) {
      const double s = spec.amplitude * std::sin(k * g.coord(iy));
      for (int ix = 0; ix < n; ++ix) v[0].values[g.index(ix, iy, iz)] = s;
    }
  return v;
}

// v = curl(psi e_z) with psi a Gaussian: exactly divergence-free, decaying
VectorField gaussian_vortex(const FieldSpec& spec) {
  require_resolved_width(spec);
  const Grid g(spec.n, spec.box_length);
  const Point3 c = resolve_center(spec);
  const double s2 = spec.length_scale * spec.length_scale;
  VectorField v(g);
  const int n = g.n;
  const double L = g.box_length;
  auto signed_delta = [L](double a, double b) {
    double d = a - b;
    while (d > L / 2) d -= L;
    while (d <= -L / 2) d += L;
    return d;
  };
#pragma omp parallel for collapse(2)
  for (int iz = 0; iz < n; ++iz)
    for (int iy = 0; iy < n; ++iy) {
      const double dy = signed_delta(g.coord(iy), c[1]);
      const double dz = signed_delta(g.coord(iz), c[2]);
      for (int ix = 0; ix < n; ++ix) {
        const double dx = signed_delta(g.coord(ix), c[0]);
        const double psi = spec.amplitude * std::exp(-(dx * dx + dy * dy + dz * dz) / s2);
        const std::size_t i = g.index(ix, iy, iz);
        v[0].values[i] = -2.0 * dy / s2 * psi; // d psi / dy
        v[1].values[i] = 2.0 * dx / s2 * psi;  // -d psi / dx
        v[2].values[i] = 0.0;
      }
    }
  return v;
}

// shear plateau: u_x = plateau(distance in the y-z plane), x-independent
VectorField plateau(const FieldSpec& spec) {
  require_resolved_width(spec);
  const Grid g(spec.n, spec.box_length);
  const Point3 c = resolve_center(spec);
  VectorField v(g);
  const int n = g.n;
  for (int iz = 0; iz < n; ++iz)
    for (int iy = 0; iy < n; ++iy) {
      const double dy = g.periodic_delta(g.coord(iy), c[1]);
      const double dz = g.periodic_delta(g.coord(iz), c[2]);
      const double u = (dy * dy + dz * dz) / (spec.length_scale * spec.length_scale);
      const double p = spec.amplitude * std::exp(-std::pow(u, 4));
      for (int ix = 0; ix < n; ++ix) v[0].values[g.index(ix, iy, iz)] = p;
    }
  return v;
}

VectorField random_solenoidal(const FieldSpec& spec) {
  require_resolved_width(spec);
  const Grid g(spec.n, spec.box_length);
  const double kc = kTwoPi / spec.length_scale;
  std::mt19937_64 rng(spec.seed ^ 0x9e3779b97f4a7c15ull);
  std::normal_distribution<double> gauss(0.0, 1.0);

  std::array<SpectralField, 3> s = {SpectralField(g), SpectralField(g), SpectralField(g)};
  const int n = g.n;
  const int nhalf = n / 2 + 1;
  const int kband = n / 3; // keep the field dealias-clean
  const double k0 = kTwoPi / g.box_length;
  // serial mode loop in fixed order: bit-for-bit reproducible from the seed
  for (int iz = 0; iz < n; ++iz)
    for (int iy = 0; iy < n; ++iy)
      for (int ikx = 0; ikx < nhalf; ++ikx) {
        const int my = g.signed_mode(iy), mz = g.signed_mode(iz);
        const double kx = k0 * ikx, ky = k0 * my, kz = k0 * mz;
        const double kk = std::sqrt(kx * kx + ky * ky + kz * kz);
        const std::size_t i =
            static_cast<std::size_t>(ikx) +
            static_cast<std::size_t>(nhalf) * (iy + static_cast<std::size_t>(n) * iz);
        double env = std::exp(-(kk * kk) / (2.0 * kc * kc));
        if (kk == 0.0 || std::abs(my) > kband || std::abs(mz) > kband || ikx > kband) env = 0.0;
        for (int c = 0; c < 3; ++c) {
          // draws happen for every slot so the stream layout is fixed
          const double re = gauss(rng), im = gauss(rng);
          s[c].coeff[i] = env * std::complex<double>(re, im);
        }
        if (ikx == 0 || ikx == n / 2) {
          // slots with a conjugate partner in the stored half: keep them real
          // on the self-conjugate lattice points
          const bool self_conj = (iy == 0 || iy == n / 2) && (iz == 0 || iz == n / 2);
          if (self_conj)
            for (int c = 0; c < 3; ++c) s[c].coeff[i] = s[c].coeff[i].real();
        }
      }

  // enforce Hermitian symmetry on the ikx = 0 and ikx = n/2 planes
  for (int pl : {0, n / 2})
    for (int iz = 0; iz < n; ++iz)
      for (int iy = 0; iy < n; ++iy) {
        const int jy = (n - iy) % n, jz = (n - iz) % n;
        if (std::make_pair(jz, jy) < std::make_pair(iz, iy)) {
          const std::size_t i =
              static_cast<std::size_t>(pl) +
              static_cast<std::size_t>(nhalf) * (iy + static_cast<std::size_t>(n) * iz);
          const std::size_t j =
              static_cast<std::size_t>(pl) +
              static_cast<std::size_t>(nhalf) * (jy + static_cast<std::size_t>(n) * jz);
          for (int c = 0; c < 3; ++c) s[c].coeff[i] = std::conj(s[c].coeff[j]);
        }
      }

  VectorField v = leray_project(VectorField(inverse(s[0]), inverse(s[1]), inverse(s[2])));
  const double peak = v.linf();
  if (peak > 0.0) v *= spec.amplitude / peak;
  return v;
}

} // namespace

FieldKind field_kind_from_string(const std::string& s) {
  if (s == "taylor-green" || s == "taylor_green") return FieldKind::taylor_green;
  if (s == "gaussian-vortex" || s == "gaussian_vortex") return FieldKind::gaussian_vortex;
  if (s == "abc") return FieldKind::abc;
  if (s == "random-solenoidal" || s == "random_solenoidal") return FieldKind::random_solenoidal;
  if (s == "single-mode" || s == "single_mode") return FieldKind::single_mode;
  if (s == "plateau") return FieldKind::plateau;
  throw std::invalid_argument("unknown field kind: " + s);
}

std::string to_string(FieldKind k) {
  switch (k) {
    case FieldKind::taylor_green: return "taylor-green";
    case FieldKind::gaussian_vortex: return "gaussian-vortex";
    case FieldKind::abc: return "abc";
    case FieldKind::random_solenoidal: return "random-solenoidal";
    case FieldKind::single_mode: return "single-mode";
    case FieldKind::plateau: return "plateau";
  }
  return "?";
}

std::string FieldSpec::digest_string() const {
  std::ostringstream os;
  os.precision(17);
  os << "kind=" << to_string(kind) << ";n=" << n << ";L=" << box_length << ";amp=" << amplitude
     << ";scale=" << length_scale << ";seed=" << seed << ";center=" << center[0] << ","
     << center[1] << "," << center[2];
  return os.str();
}

VectorField generate(const FieldSpec& spec) {
  switch (spec.kind) {
    case FieldKind::taylor_green: return taylor_green(spec);
    case FieldKind::gaussian_vortex: return gaussian_vortex(spec);
    case FieldKind::abc: return abc_flow(spec);
    case FieldKind::random_solenoidal: return random_solenoidal(spec);
    case FieldKind::single_mode: return single_mode(spec);
    case FieldKind::plateau: return plateau(spec);
  }
  throw std::invalid_argument("generate: unknown kind");
}

std::string SimSpec::digest_string() const {
  std::ostringstream os;
  os.precision(17);
  os << init.digest_string() << ";nu=" << viscosity << ";dt=" << dt << ";steps=" << steps
     << ";save_every=" << save_every << ";dealias=" << dealias;
  return os.str();
}

namespace {

void project_state(std::array<SpectralField, 3>& s) {
  // spectral-space Leray projection (same formula as leray_project)
  const Grid& g = s[0].grid;
  const int n = g.n;
  const int nhalf = n / 2 + 1;
  const double k0 = kTwoPi / g.box_length;
#pragma omp parallel for collapse(2)
  for (int iz = 0; iz < n; ++iz)
    for (int iy = 0; iy < n; ++iy) {
      const double ky = k0 * g.signed_mode(iy);
      const double kz = k0 * g.signed_mode(iz);
      const std::size_t base =
          static_cast<std::size_t>(nhalf) * (iy + static_cast<std::size_t>(n) * iz);
      for (int ikx = 0; ikx < nhalf; ++ikx) {
        const double kx = k0 * ikx;
        const double k2 = kx * kx + ky * ky + kz * kz;
        if (k2 == 0.0) continue;
        const std::size_t i = base + ikx;
        const std::complex<double> kdot =
            (kx * s[0].coeff[i] + ky * s[1].coeff[i] + kz * s[2].coeff[i]) / k2;
        s[0].coeff[i] -= kx * kdot;
        s[1].coeff[i] -= ky * kdot;
        s[2].coeff[i] -= kz * kdot;
      }
    }
}

// N(v) = P[v x omega], dealiased: the gradient part of the convective term
// is absorbed by the projection
std::array<SpectralField, 3> nonlinear_term(const Grid& g,
                                            const std::array<SpectralField, 3>& v_hat,
                                            bool dealias) {
  const int n = g.n;
  const int nhalf = n / 2 + 1;
  const double k0 = kTwoPi / g.box_length;

  std::array<SpectralField, 3> w_hat = {SpectralField(g), SpectralField(g), SpectralField(g)};
#pragma omp parallel for collapse(2)
  for (int iz = 0; iz < n; ++iz)
    for (int iy = 0; iy < n; ++iy) {
      const double ky = k0 * g.signed_mode(iy);
      const double kz = k0 * g.signed_mode(iz);
      const std::size_t base =
          static_cast<std::size_t>(nhalf) * (iy + static_cast<std::size_t>(n) * iz);
      for (int ikx = 0; ikx < nhalf; ++ikx) {
        const double kx = k0 * ikx;
        const std::size_t i = base + ikx;
        const std::complex<double> I(0.0, 1.0);
        w_hat[0].coeff[i] = I * (ky * v_hat[2].coeff[i] - kz * v_hat[1].coeff[i]);
        w_hat[1].coeff[i] = I * (kz * v_hat[0].coeff[i] - kx * v_hat[2].coeff[i]);
        w_hat[2].coeff[i] = I * (kx * v_hat[1].coeff[i] - ky * v_hat[0].coeff[i]);
      }
    }

  std::array<ScalarField, 3> v, w;
  for (int c = 0; c < 3; ++c) {
    v[c] = inverse(v_hat[c]);
    w[c] = inverse(w_hat[c]);
  }
  std::array<ScalarField, 3> cross = {ScalarField(g), ScalarField(g), ScalarField(g)};
  const std::size_t m = g.size();
#pragma omp parallel for
  for (std::size_t i = 0; i < m; ++i) {
    const double vx = v[0].values[i], vy = v[1].values[i], vz = v[2].values[i];
    const double wx = w[0].values[i], wy = w[1].values[i], wz = w[2].values[i];
    cross[0].values[i] = vy * wz - vz * wy;
    cross[1].values[i] = vz * wx - vx * wz;
    cross[2].values[i] = vx * wy - vy * wx;
  }

  std::array<SpectralField, 3> out = {forward(cross[0]), forward(cross[1]), forward(cross[2])};
  if (dealias)
    for (int c = 0; c < 3; ++c) dealias_23(out[c]);
  project_state(out);
  return out;
}

std::vector<double> heat_factors(const Grid& g, double coef) {
  // exp(-coef |k|^2) over the half-spectrum
  std::vector<double> e(g.spectral_size());
  const int n = g.n;
  const int nhalf = n / 2 + 1;
  const double k0 = kTwoPi / g.box_length;
  for (int iz = 0; iz < n; ++iz)
    for (int iy = 0; iy < n; ++iy) {
      const double ky = k0 * g.signed_mode(iy);
      const double kz = k0 * g.signed_mode(iz);
      const std::size_t base =
          static_cast<std::size_t>(nhalf) * (iy + static_cast<std::size_t>(n) * iz);
      for (int ikx = 0; ikx < nhalf; ++ikx) {
        const double kx = k0 * ikx;
        e[base + ikx] = std::exp(-coef * (kx * kx + ky * ky + kz * kz));
      }
    }
  return e;
}

} // namespace

SimState make_sim_state(const VectorField& v0, double viscosity, double dt, bool dealias) {
  if (!(viscosity > 0.0)) throw std::invalid_argument("make_sim_state: viscosity must be positive");
  if (!(dt > 0.0)) throw std::invalid_argument("make_sim_state: dt must be positive");
  const Grid& g = v0.grid;
  const double dx = g.spacing();
  const double vmax = v0.linf();
  if (vmax > 0.0 && dt > 0.5 * dx / vmax)
    throw std::runtime_error("CFL violation: dt > 0.5 dx / max|v| (dt=" + std::to_string(dt) +
                             ", limit=" + std::to_string(0.5 * dx / vmax) + ")");
  if (dt > 0.25 * dx * dx / viscosity)
    throw std::runtime_error("CFL violation: dt > 0.25 dx^2 / nu (dt=" + std::to_string(dt) +
                             ", limit=" + std::to_string(0.25 * dx * dx / viscosity) + ")");
  SimState st;
  st.grid = g;
  st.t = 0.0;
  st.viscosity = viscosity;
  st.dt = dt;
  st.dealias = dealias;
  st.v_hat = {forward(v0[0]), forward(v0[1]), forward(v0[2])};
  if (dealias)
    for (int c = 0; c < 3; ++c) dealias_23(st.v_hat[c]);
  project_state(st.v_hat);
  return st;
}

// shared viscous-factor cache; values are read inside parallel regions via
// pointers captured on the calling thread
struct HeatFactorCache {
  std::mutex mutex;
  int n = -1;
  double L = -1.0, coef = -1.0;
  std::shared_ptr<const std::vector<double>> half, full;
};

void rk4_step(SimState& st) {
  const Grid& g = st.grid;
  const double h = st.dt;
  // integrating-factor RK4: the viscous part is handled exactly
  static HeatFactorCache cache;
  std::shared_ptr<const std::vector<double>> half, full;
  {
    const double coef = st.viscosity * h / 2.0;
    std::lock_guard<std::mutex> lock(cache.mutex);
    if (coef != cache.coef || g.n != cache.n || g.box_length != cache.L) {
      cache.half = std::make_shared<const std::vector<double>>(heat_factors(g, coef));
      cache.full = std::make_shared<const std::vector<double>>(heat_factors(g, 2.0 * coef));
      cache.coef = coef;
      cache.n = g.n;
      cache.L = g.box_length;
    }
    half = cache.half;
    full = cache.full;
  }
  const double* Eh = half->data();
  const double* Ef = full->data();

  const std::size_t m = g.spectral_size();
  const auto a = nonlinear_term(g, st.v_hat, st.dealias);

  std::array<SpectralField, 3> va = st.v_hat;
  for (int c = 0; c < 3; ++c)
#pragma omp parallel for
    for (std::size_t i = 0; i < m; ++i)
      va[c].coeff[i] = Eh[i] * (st.v_hat[c].coeff[i] + (h / 2.0) * a[c].coeff[i]);
  const auto b = nonlinear_term(g, va, st.dealias);

  std::array<SpectralField, 3> vb = st.v_hat;
  for (int c = 0; c < 3; ++c)
#pragma omp parallel for
    for (std::size_t i = 0; i < m; ++i)
      vb[c].coeff[i] = Eh[i] * st.v_hat[c].coeff[i] + (h / 2.0) * b[c].coeff[i];
  const auto cc = nonlinear_term(g, vb, st.dealias);

  std::array<SpectralField, 3> vd = st.v_hat;
  for (int c = 0; c < 3; ++c)
#pragma omp parallel for
    for (std::size_t i = 0; i < m; ++i)
      vd[c].coeff[i] = Ef[i] * st.v_hat[c].coeff[i] + h * Eh[i] * cc[c].coeff[i];
  const auto d = nonlinear_term(g, vd, st.dealias);

  for (int c = 0; c < 3; ++c)
#pragma omp parallel for
    for (std::size_t i = 0; i < m; ++i)
      st.v_hat[c].coeff[i] =
          Ef[i] * st.v_hat[c].coeff[i] +
          (h / 6.0) * (Ef[i] * a[c].coeff[i] + 2.0 * Eh[i] * (b[c].coeff[i] + cc[c].coeff[i]) +
                       d[c].coeff[i]);
  project_state(st.v_hat);
  st.t += h;
}

VectorField state_velocity(const SimState& st) {
  return VectorField(inverse(st.v_hat[0]), inverse(st.v_hat[1]), inverse(st.v_hat[2]));
}

SpaceTimeRecord simulate_from(const VectorField& v0, double viscosity, double dt, int steps,
                              int save_every, bool dealias, const std::string& provenance) {
  if (steps < 0) throw std::invalid_argument("simulate: steps must be nonnegative");
  if (save_every < 1) throw std::invalid_argument("simulate: save_every must be >= 1");
  SimState st = make_sim_state(v0, viscosity, dt, dealias);

  SpaceTimeRecord rec;
  rec.viscosity = viscosity;
  rec.provenance = provenance;

  auto save = [&]() {
    Snapshot s;
    s.t = st.t;
    s.v = state_velocity(st);
    s.q = pressure_from_velocity(s.v);
    rec.snapshots.push_back(std::move(s));
  };
  save();
  for (int k = 1; k <= steps; ++k) {
    rk4_step(st);
    if (k % save_every == 0) save();
  }
  rec.validate();
  return rec;
}

SpaceTimeRecord simulate(const SimSpec& spec) {
  const VectorField v0 = generate(spec.init);
  return simulate_from(v0, spec.viscosity, spec.dt, spec.steps, spec.save_every, spec.dealias,
                       "sim:" + hex_digest(spec.digest_string()));
}

namespace {

std::map<std::string, std::string> parse_kv(const std::string& text) {
  std::map<std::string, std::string> kv;
  std::istringstream is(text);
  std::string line;
  while (std::getline(is, line)) {
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    const auto eq = line.find('=');
    if (eq == std::string::npos) continue;
    auto trim = [](std::string s) {
      const auto a = s.find_first_not_of(" \t\r");
      const auto b = s.find_last_not_of(" \t\r");
      return a == std::string::npos ? std::string{} : s.substr(a, b - a + 1);
    };
    const std::string key = trim(line.substr(0, eq));
    const std::string val = trim(line.substr(eq + 1));
    if (!key.empty()) kv[key] = val;
  }
  return kv;
}

void apply_field_keys(FieldSpec& spec, const std::map<std::string, std::string>& kv,
                      std::set<std::string>& consumed) {
  auto take = [&](const char* key) -> const std::string* {
    auto it = kv.find(key);
    if (it == kv.end()) return nullptr;
    consumed.insert(key);
    return &it->second;
  };
  if (const auto* v = take("kind")) spec.kind = field_kind_from_string(*v);
  if (const auto* v = take("n")) spec.n = std::stoi(*v);
  if (const auto* v = take("L")) spec.box_length = std::stod(*v);
  if (const auto* v = take("amp")) spec.amplitude = std::stod(*v);
  if (const auto* v = take("scale")) spec.length_scale = std::stod(*v);
  if (const auto* v = take("seed")) spec.seed = std::stoull(*v);
  if (const auto* v = take("center")) {
    std::stringstream ss(*v);
    std::string item;
    for (int i = 0; i < 3 && std::getline(ss, item, ','); ++i) spec.center[i] = std::stod(item);
  }
}

void reject_unknown(const std::map<std::string, std::string>& kv,
                    const std::set<std::string>& consumed) {
  for (const auto& [key, value] : kv)
    if (!consumed.count(key)) throw std::invalid_argument("spec file: unknown key '" + key + "'");
}

} // namespace

FieldSpec parse_field_spec(const std::string& text) {
  FieldSpec spec;
  const auto kv = parse_kv(text);
  std::set<std::string> consumed;
  apply_field_keys(spec, kv, consumed);
  reject_unknown(kv, consumed);
  return spec;
}

SimSpec parse_sim_spec(const std::string& text) {
  SimSpec spec;
  const auto kv = parse_kv(text);
  std::set<std::string> consumed;
  apply_field_keys(spec.init, kv, consumed);
  auto take = [&](const char* key) -> const std::string* {
    auto it = kv.find(key);
    if (it == kv.end()) return nullptr;
    consumed.insert(key);
    return &it->second;
  };
  if (const auto* v = take("nu")) spec.viscosity = std::stod(*v);
  if (const auto* v = take("dt")) spec.dt = std::stod(*v);
  if (const auto* v = take("steps")) spec.steps = std::stoi(*v);
  if (const auto* v = take("save_every")) spec.save_every = std::stoi(*v);
  if (const auto* v = take("dealias")) spec.dealias = (*v == "true" || *v == "1");
  reject_unknown(kv, consumed);
  return spec;
}

} // namespace nsdiag

#include "nsdiag/grid.hpp"

#include "nsdiag/fft.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace nsdiag {

namespace {

bool is_pow2(int n) { return n > 0 && (n & (n - 1)) == 0; }

constexpr double kTwoPi = 2.0 * std::numbers::pi;

} // namespace

Grid::Grid(int n_, double box_length_) : n(n_), box_length(box_length_) {
  if (n < 8 || !is_pow2(n)) throw std::invalid_argument("Grid: n must be a power of two >= 8");
  if (!(box_length > 0.0)) throw std::invalid_argument("Grid: box_length must be positive");
}

double Grid::periodic_delta(double a, double b) const {
  double d = std::fmod(a - b, box_length);
  if (d < 0) d += box_length;
  return std::min(d, box_length - d);
}

double Grid::periodic_distance(const Point3& a, const Point3& b) const {
  const double dx = periodic_delta(a[0], b[0]);
  const double dy = periodic_delta(a[1], b[1]);
  const double dz = periodic_delta(a[2], b[2]);
  return std::sqrt(dx * dx + dy * dy + dz * dz);
}

ScalarField ScalarField::from_function(
    const Grid& g, const std::function<double(double, double, double)>& f) {
  ScalarField out(g);
  const int n = g.n;
#pragma omp parallel for collapse(2)
  for (int iz = 0; iz < n; ++iz)
    for (int iy = 0; iy < n; ++iy) {
      const double y = g.coord(iy), z = g.coord(iz);
      double* row = out.values.data() + g.index(0, iy, iz);
      for (int ix = 0; ix < n; ++ix) row[ix] = f(g.coord(ix), y, z);
    }
  return out;
}

double ScalarField::mean() const {
  const double* v = values.data();
  double s = detail::chunked_sum(values.size(), [v](std::size_t i) { return v[i]; });
  return s / static_cast<double>(values.size());
}

double ScalarField::linf() const {
  double m = 0.0;
  for (double v : values) m = std::max(m, std::abs(v));
  return m;
}

double ScalarField::l2() const {
  const double* v = values.data();
  double s = detail::chunked_sum(values.size(), [v](std::size_t i) { return v[i] * v[i]; });
  return std::sqrt(s * grid.cell_volume());
}

ScalarField& ScalarField::operator*=(double a) {
  for (double& v : values) v *= a;
  return *this;
}
ScalarField& ScalarField::operator+=(const ScalarField& o) {
  if (!(grid == o.grid)) throw std::invalid_argument("ScalarField: grid mismatch");
  for (std::size_t i = 0; i < values.size(); ++i) values[i] += o.values[i];
  return *this;
}
ScalarField& ScalarField::operator-=(const ScalarField& o) {
  if (!(grid == o.grid)) throw std::invalid_argument("ScalarField: grid mismatch");
  for (std::size_t i = 0; i < values.size(); ++i) values[i] -= o.values[i];
  return *this;
}

VectorField::VectorField(ScalarField u, ScalarField v, ScalarField w)
    : grid(u.grid), comp{std::move(u), std::move(v), std::move(w)} {
  if (!(comp[0].grid == comp[1].grid) || !(comp[0].grid == comp[2].grid))
    throw std::invalid_argument("VectorField: components must share one grid");
}

ScalarField VectorField::magnitude() const {
  ScalarField out(grid);
  const std::size_t m = out.values.size();
  const double* a = comp[0].values.data();
  const double* b = comp[1].values.data();
  const double* c = comp[2].values.data();
#pragma omp parallel for
  for (std::size_t i = 0; i < m; ++i)
    out.values[i] = std::sqrt(a[i] * a[i] + b[i] * b[i] + c[i] * c[i]);
  return out;
}

double VectorField::linf() const {
  const std::size_t m = comp[0].values.size();
  const double* a = comp[0].values.data();
  const double* b = comp[1].values.data();
  const double* c = comp[2].values.data();
  double best = 0.0;
  for (std::size_t i = 0; i < m; ++i)
    best = std::max(best, a[i] * a[i] + b[i] * b[i] + c[i] * c[i]);
  return std::sqrt(best);
}

double VectorField::l2() const {
  const std::size_t m = comp[0].values.size();
  const double* a = comp[0].values.data();
  const double* b = comp[1].values.data();
  const double* c = comp[2].values.data();
  double s = detail::chunked_sum(
      m, [&](std::size_t i) { return a[i] * a[i] + b[i] * b[i] + c[i] * c[i]; });
  return std::sqrt(s * grid.cell_volume());
}

VectorField& VectorField::operator*=(double a) {
  for (auto& c : comp) c *= a;
  return *this;
}
VectorField& VectorField::operator+=(const VectorField& o) {
  for (int i = 0; i < 3; ++i) comp[i] += o.comp[i];
  return *this;
}
VectorField& VectorField::operator-=(const VectorField& o) {
  for (int i = 0; i < 3; ++i) comp[i] -= o.comp[i];
  return *this;
}

SpectralField forward(const ScalarField& f) {
  SpectralField out(f.grid);
  fft::forward(f.grid.n, f.values.data(), out.coeff.data());
  return out;
}

ScalarField inverse(const SpectralField& f) {
  ScalarField out(f.grid);
  fft::inverse(f.grid.n, f.coeff.data(), out.values.data());
  return out;
}

namespace {

// Applies op(coeff_ref, kx, ky, kz) over the half-spectrum; k are signed modes
// in units of 2*pi/L, kx in [0, n/2].
template <typename Op>
void for_each_mode(SpectralField& f, Op&& op) {
  const int n = f.grid.n;
  const int nhalf = n / 2 + 1;
  const double k0 = kTwoPi / f.grid.box_length;
#pragma omp parallel for collapse(2)
  for (int iz = 0; iz < n; ++iz)
    for (int iy = 0; iy < n; ++iy) {
      const double ky = k0 * f.grid.signed_mode(iy);
      const double kz = k0 * f.grid.signed_mode(iz);
      std::complex<double>* row =
          f.coeff.data() + static_cast<std::size_t>(nhalf) * (iy + static_cast<std::size_t>(n) * iz);
      for (int ikx = 0; ikx < nhalf; ++ikx) op(row[ikx], k0 * ikx, ky, kz);
    }
}

bool nyquist_any(const Grid& g, double k0, double kx, double ky, double kz) {
  const double knyq = k0 * (g.n / 2);
  return kx >= knyq - 0.5 * k0 || std::abs(ky) >= knyq - 0.5 * k0 ||
         std::abs(kz) >= knyq - 0.5 * k0;
}

} // namespace

ScalarField derivative(const ScalarField& f, int axis) {
  if (axis < 0 || axis > 2) throw std::invalid_argument("derivative: axis out of range");
  SpectralField s = forward(f);
  const double k0 = kTwoPi / f.grid.box_length;
  const double knyq = k0 * (f.grid.n / 2);
  for_each_mode(s, [&](std::complex<double>& c, double kx, double ky, double kz) {
    const double k = axis == 0 ? kx : (axis == 1 ? ky : kz);
    // first derivative of a real field is ill-defined at the Nyquist mode
    if (std::abs(k) >= knyq - 0.5 * k0) {
      c = 0.0;
    } else {
      c *= std::complex<double>(0.0, k);
    }
  });
  return inverse(s);
}

VectorField gradient(const ScalarField& f) {
  return VectorField(derivative(f, 0), derivative(f, 1), derivative(f, 2));
}

ScalarField divergence(const VectorField& v) {
  SpectralField acc(v.grid);
  const double k0 = kTwoPi / v.grid.box_length;
  const double knyq = k0 * (v.grid.n / 2);
  for (int axis = 0; axis < 3; ++axis) {
    SpectralField s = forward(v[axis]);
    const std::size_t m = s.coeff.size();
    SpectralField* accp = &acc;
    for_each_mode(s, [&, axis](std::complex<double>& c, double kx, double ky, double kz) {
      const double k = axis == 0 ? kx : (axis == 1 ? ky : kz);
      if (std::abs(k) >= knyq - 0.5 * k0) c = 0.0;
      else c *= std::complex<double>(0.0, k);
    });
    for (std::size_t i = 0; i < m; ++i) accp->coeff[i] += s.coeff[i];
  }
  return inverse(acc);
}

ScalarField laplacian(const ScalarField& f) {
  SpectralField s = forward(f);
  for_each_mode(s, [](std::complex<double>& c, double kx, double ky, double kz) {
    c *= -(kx * kx + ky * ky + kz * kz);
  });
  return inverse(s);
}

std::array<std::array<ScalarField, 3>, 3> jacobian(const VectorField& v) {
  std::array<std::array<ScalarField, 3>, 3> out;
  for (int j = 0; j < 3; ++j) {
    SpectralField s = forward(v[j]);
    for (int i = 0; i < 3; ++i) {
      SpectralField d = s;
      const double k0 = kTwoPi / v.grid.box_length;
      const double knyq = k0 * (v.grid.n / 2);
      for_each_mode(d, [&](std::complex<double>& c, double kx, double ky, double kz) {
        const double k = i == 0 ? kx : (i == 1 ? ky : kz);
        if (std::abs(k) >= knyq - 0.5 * k0) c = 0.0;
        else c *= std::complex<double>(0.0, k);
      });
      out[i][j] = inverse(d);
    }
  }
  return out;
}

VectorField leray_project(const VectorField& v) {
  std::array<SpectralField, 3> s = {forward(v[0]), forward(v[1]), forward(v[2])};
  const Grid& g = v.grid;
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
        const std::size_t idx = base + ikx;
        if (k2 == 0.0) continue; // zero mode preserved
        if (nyquist_any(g, k0, kx, ky, kz)) {
          // sign-ambiguous wavevector: annihilate to keep the output Hermitian
          s[0].coeff[idx] = 0.0;
          s[1].coeff[idx] = 0.0;
          s[2].coeff[idx] = 0.0;
          continue;
        }
        const std::complex<double> kdot =
            (kx * s[0].coeff[idx] + ky * s[1].coeff[idx] + kz * s[2].coeff[idx]) / k2;
        s[0].coeff[idx] -= kx * kdot;
        s[1].coeff[idx] -= ky * kdot;
        s[2].coeff[idx] -= kz * kdot;
      }
    }
  return VectorField(inverse(s[0]), inverse(s[1]), inverse(s[2]));
}

double max_abs_divergence(const VectorField& v) { return divergence(v).linf(); }

ScalarField pressure_from_velocity(const VectorField& v) {
  const Grid& g = v.grid;
  const double k0 = kTwoPi / g.box_length;
  const double div_tol = 1e-8 * (1.0 + v.linf()) * (k0 * g.n / 2);
  if (max_abs_divergence(v) > div_tol)
    throw std::invalid_argument("pressure_from_velocity: input is not divergence-free");

  // q_hat = -k_i k_j T_ij_hat / |k|^2 with T_ij = v_i v_j
  SpectralField q(g);
  const std::size_t m = g.size();
  ScalarField prod(g);
  for (int a = 0; a < 3; ++a)
    for (int b = a; b < 3; ++b) {
      const double* va = v[a].values.data();
      const double* vb = v[b].values.data();
#pragma omp parallel for
      for (std::size_t i = 0; i < m; ++i) prod.values[i] = va[i] * vb[i];
      SpectralField t = forward(prod);
      const double w = (a == b) ? 1.0 : 2.0;
      SpectralField* qp = &q;
      const int aa = a, bb = b;
      for_each_mode(t, [&, aa, bb, w](std::complex<double>& c, double kx, double ky, double kz) {
        const double k2 = kx * kx + ky * ky + kz * kz;
        if (k2 == 0.0) {
          c = 0.0;
          return;
        }
        const double ka = aa == 0 ? kx : (aa == 1 ? ky : kz);
        const double kb = bb == 0 ? kx : (bb == 1 ? ky : kz);
        c *= -w * ka * kb / k2;
      });
      const std::size_t sm = q.coeff.size();
      for (std::size_t i = 0; i < sm; ++i) qp->coeff[i] += t.coeff[i];
    }
  // zero mean by construction (k=0 coefficient dropped above)
  return inverse(q);
}

BallSamples restrict_ball(const Grid& g, const Point3& x0, double r) {
  if (!(r > 0.0)) throw std::invalid_argument("restrict_ball: r must be positive");
  if (!(2.0 * r < g.box_length / 2.0))
    throw std::invalid_argument("restrict_ball: ball too large for box (need 2r < L/2)");
  BallSamples out;
  out.cell_volume = g.cell_volume();
  const int n = g.n;
  const double r2 = r * r;
  // per-axis distances are separable
  std::vector<double> dx2(n), dy2(n), dz2(n);
  for (int i = 0; i < n; ++i) {
    const double c = g.coord(i);
    double a = g.periodic_delta(c, x0[0]);
    double b = g.periodic_delta(c, x0[1]);
    double d = g.periodic_delta(c, x0[2]);
    dx2[i] = a * a;
    dy2[i] = b * b;
    dz2[i] = d * d;
  }
  for (int iz = 0; iz < n; ++iz) {
    if (dz2[iz] > r2) continue;
    for (int iy = 0; iy < n; ++iy) {
      const double dzy = dz2[iz] + dy2[iy];
      if (dzy > r2) continue;
      for (int ix = 0; ix < n; ++ix)
        if (dzy + dx2[ix] <= r2) out.indices.push_back(g.index(ix, iy, iz));
    }
  }
  return out;
}

bool decays_by_quarter_box(const ScalarField& f, const Point3& center, double tol) {
  const double peak = f.linf();
  if (peak == 0.0) return true;
  const Grid& g = f.grid;
  const double quarter = g.box_length / 4.0;
  double far_max = 0.0;
  for (int iz = 0; iz < g.n; ++iz)
    for (int iy = 0; iy < g.n; ++iy)
      for (int ix = 0; ix < g.n; ++ix) {
        const Point3 x = {g.coord(ix), g.coord(iy), g.coord(iz)};
        if (g.periodic_distance(x, center) >= quarter)
          far_max = std::max(far_max, std::abs(f.values[g.index(ix, iy, iz)]));
      }
  return far_max <= tol * peak;
}

void dealias_23(SpectralField& f) {
  const int kcut = f.grid.n / 3;
  const double k0 = kTwoPi / f.grid.box_length;
  const double kmax = k0 * kcut;
  for_each_mode(f, [&](std::complex<double>& c, double kx, double ky, double kz) {
    if (kx > kmax + 0.5 * k0 || std::abs(ky) > kmax + 0.5 * k0 ||
        std::abs(kz) > kmax + 0.5 * k0)
      c = 0.0;
  });
}

namespace detail {

double chunked_sum(std::size_t count, const std::function<double(std::size_t)>& term) {
  if (count == 0) return 0.0;
  constexpr std::size_t kChunks = 256;
  if (count < 4 * kChunks) {
    double s = 0.0;
    for (std::size_t i = 0; i < count; ++i) s += term(i);
    return s;
  }
  std::array<double, kChunks> partial{};
#pragma omp parallel for
  for (std::size_t c = 0; c < kChunks; ++c) {
    const std::size_t lo = c * count / kChunks;
    const std::size_t hi = (c + 1) * count / kChunks;
    double s = 0.0;
    for (std::size_t i = lo; i < hi; ++i) s += term(i);
    partial[c] = s;
  }
  double total = 0.0;
  for (double p : partial) total += p;
  return total;
}

} // namespace detail

} // namespace nsdiag

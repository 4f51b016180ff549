#pragma once

#include <array>
#include <complex>
#include <cstddef>
#include <functional>
#include <vector>

namespace nsdiag {

using Point3 = std::array<double, 3>;

// Uniform periodic box [0,L)^3 with n samples per dimension at x_i = i*L/n.
struct Grid {
  int n = 0;
  double box_length = 0.0;

  Grid() = default;
  Grid(int n_, double box_length_);

  double spacing() const { return box_length / n; }
  double cell_volume() const { double h = spacing(); return h * h * h; }
  std::size_t size() const { return static_cast<std::size_t>(n) * n * n; }
  std::size_t spectral_size() const {
    return static_cast<std::size_t>(n / 2 + 1) * n * n;
  }
  std::size_t index(int ix, int iy, int iz) const {
    return static_cast<std::size_t>(ix) +
           static_cast<std::size_t>(n) * (iy + static_cast<std::size_t>(n) * iz);
  }
  double coord(int i) const { return i * spacing(); }
  // integer mode in [-n/2, n/2] for storage slot k in [0, n)
  int signed_mode(int k) const { return k <= n / 2 ? k : k - n; }
  // shortest periodic displacement a-b along one axis
  double periodic_delta(double a, double b) const;
  double periodic_distance(const Point3& a, const Point3& b) const;

  bool operator==(const Grid&) const = default;
};

struct ScalarField {
  Grid grid;
  std::vector<double> values;

  ScalarField() = default;
  explicit ScalarField(const Grid& g) : grid(g), values(g.size(), 0.0) {}

  static ScalarField from_function(const Grid& g,
                                   const std::function<double(double, double, double)>& f);

  double& at(int ix, int iy, int iz) { return values[grid.index(ix, iy, iz)]; }
  double at(int ix, int iy, int iz) const { return values[grid.index(ix, iy, iz)]; }

  double mean() const;
  double linf() const;
  double l2() const; // sqrt(sum v^2 * dx^3) over the box

  ScalarField& operator*=(double a);
  ScalarField& operator+=(const ScalarField& o);
  ScalarField& operator-=(const ScalarField& o);
};

struct VectorField {
  Grid grid;
  std::array<ScalarField, 3> comp;

  VectorField() = default;
  explicit VectorField(const Grid& g) : grid(g), comp{ScalarField(g), ScalarField(g), ScalarField(g)} {}
  VectorField(ScalarField u, ScalarField v, ScalarField w);

  ScalarField& operator[](int i) { return comp[i]; }
  const ScalarField& operator[](int i) const { return comp[i]; }

  // pointwise Euclidean magnitude
  ScalarField magnitude() const;
  double linf() const; // max over samples of |v|
  double l2() const;   // sqrt(sum |v|^2 dx^3)

  VectorField& operator*=(double a);
  VectorField& operator+=(const VectorField& o);
  VectorField& operator-=(const VectorField& o);
};

// Fourier coefficients in r2c half-spectrum layout, Hermitian by construction.
struct SpectralField {
  Grid grid;
  std::vector<std::complex<double>> coeff;

  SpectralField() = default;
  explicit SpectralField(const Grid& g) : grid(g), coeff(g.spectral_size()) {}
};

SpectralField forward(const ScalarField& f);
ScalarField inverse(const SpectralField& f);

// Spectral derivative along axis (0=x,1=y,2=z); Nyquist mode zeroed.
ScalarField derivative(const ScalarField& f, int axis);
VectorField gradient(const ScalarField& f);
ScalarField divergence(const VectorField& v);
ScalarField laplacian(const ScalarField& f);

// Full Jacobian d v_j / d x_i, row index i = axis, column j = component.
std::array<std::array<ScalarField, 3>, 3> jacobian(const VectorField& v);

// Orthogonal projection onto divergence-free fields; zero mode preserved.
VectorField leray_project(const VectorField& v);
double max_abs_divergence(const VectorField& v);

// Solves -lap q = d_i d_j (v_i v_j) with mean(q) = 0. Rejects non-solenoidal input.
ScalarField pressure_from_velocity(const VectorField& v);

// Samples with periodic distance |x - x0| <= r.
struct BallSamples {
  std::vector<std::size_t> indices;
  double cell_volume = 0.0;
};
BallSamples restrict_ball(const Grid& g, const Point3& x0, double r);

// Decay gate for fields meant to be compactly supported on R^3: max |f| over
// samples at periodic distance >= L/4 from center must be <= tol * max|f|.
bool decays_by_quarter_box(const ScalarField& f, const Point3& center, double tol = 1e-8);

// Zeroes every mode with any |k| > n/3 (2/3 dealiasing rule).
void dealias_23(SpectralField& f);

namespace detail {
// Order-independent deterministic sum: fixed 256-chunk partials, sequential merge.
double chunked_sum(std::size_t count, const std::function<double(std::size_t)>& term);
} // namespace detail

} // namespace nsdiag

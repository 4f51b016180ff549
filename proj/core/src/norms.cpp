#include "nsdiag/norms.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

namespace nsdiag {

namespace {

std::vector<double> ball_magnitudes(const ScalarField& u, const BallSamples& ball) {
  std::vector<double> m;
  m.reserve(ball.indices.size());
  for (std::size_t idx : ball.indices) m.push_back(std::abs(u.values[idx]));
  return m;
}

std::vector<double> ball_magnitudes(const VectorField& u, const BallSamples& ball) {
  std::vector<double> m;
  m.reserve(ball.indices.size());
  const double* a = u[0].values.data();
  const double* b = u[1].values.data();
  const double* c = u[2].values.data();
  for (std::size_t i : ball.indices)
    m.push_back(std::sqrt(a[i] * a[i] + b[i] * b[i] + c[i] * c[i]));
  return m;
}

double lp_of(std::vector<double> mags, double cell_volume, int p) {
  if (p != 2 && p != 3 && p != 4) throw std::invalid_argument("lp_ball: p must be 2, 3 or 4");
  double s = 0.0;
  for (double m : mags) {
    double t = m * m;
    if (p == 3) t *= m;
    if (p == 4) t *= m * m;
    s += t;
  }
  return std::pow(s * cell_volume, 1.0 / p);
}

// sup over levels of v * vol{|u| >= v}^{1/4}, exact on the discrete measure
double weak_l4_of(std::vector<double> mags, double cell_volume) {
  std::sort(mags.begin(), mags.end(), std::greater<double>());
  double best = 0.0;
  for (std::size_t i = 0; i < mags.size(); ++i) {
    if (i + 1 < mags.size() && mags[i + 1] == mags[i]) continue; // collapse ties
    best = std::max(best, mags[i] * std::pow((i + 1) * cell_volume, 0.25));
  }
  return best;
}

BallSamples whole_box(const Grid& g) {
  BallSamples b;
  b.cell_volume = g.cell_volume();
  b.indices.resize(g.size());
  for (std::size_t i = 0; i < b.indices.size(); ++i) b.indices[i] = i;
  return b;
}

} // namespace

double lp_ball(const ScalarField& u, const Point3& x0, double r, int p) {
  const BallSamples ball = restrict_ball(u.grid, x0, r);
  if (ball.indices.empty()) throw std::invalid_argument("lp_ball: empty ball");
  return lp_of(ball_magnitudes(u, ball), ball.cell_volume, p);
}

double lp_ball(const VectorField& u, const Point3& x0, double r, int p) {
  const BallSamples ball = restrict_ball(u.grid, x0, r);
  if (ball.indices.empty()) throw std::invalid_argument("lp_ball: empty ball");
  return lp_of(ball_magnitudes(u, ball), ball.cell_volume, p);
}

double weak_l4_ball(const ScalarField& u, const Point3& x0, double r) {
  const BallSamples ball = restrict_ball(u.grid, x0, r);
  return weak_l4_of(ball_magnitudes(u, ball), ball.cell_volume);
}

double weak_l4_ball(const VectorField& u, const Point3& x0, double r) {
  const BallSamples ball = restrict_ball(u.grid, x0, r);
  return weak_l4_of(ball_magnitudes(u, ball), ball.cell_volume);
}

double weak_l4_box(const ScalarField& u) {
  return weak_l4_of(ball_magnitudes(u, whole_box(u.grid)), u.grid.cell_volume());
}

double weak_l4_box(const VectorField& u) {
  return weak_l4_of(ball_magnitudes(u, whole_box(u.grid)), u.grid.cell_volume());
}

namespace {

H1BallNorms h1_of(const std::vector<double>& grad_sq, const std::vector<double>& val_sq,
                  const BallSamples& ball, double r) {
  double gs = 0.0, vs = 0.0;
  for (std::size_t k = 0; k < ball.indices.size(); ++k) {
    gs += grad_sq[k];
    vs += val_sq[k];
  }
  H1BallNorms out;
  out.grad_l2 = std::sqrt(gs * ball.cell_volume);
  out.l2 = std::sqrt(vs * ball.cell_volume);
  out.combination = out.grad_l2 + out.l2 / r;
  return out;
}

} // namespace

H1BallNorms h1_ball(const ScalarField& u, const Point3& x0, double r) {
  const BallSamples ball = restrict_ball(u.grid, x0, r);
  const VectorField grad = gradient(u); // global spectral gradient, then restrict
  std::vector<double> gs(ball.indices.size()), vs(ball.indices.size());
  for (std::size_t k = 0; k < ball.indices.size(); ++k) {
    const std::size_t i = ball.indices[k];
    const double gx = grad[0].values[i], gy = grad[1].values[i], gz = grad[2].values[i];
    gs[k] = gx * gx + gy * gy + gz * gz;
    vs[k] = u.values[i] * u.values[i];
  }
  return h1_of(gs, vs, ball, r);
}

H1BallNorms h1_ball(const VectorField& u, const Point3& x0, double r) {
  const BallSamples ball = restrict_ball(u.grid, x0, r);
  const auto jac = jacobian(u);
  std::vector<double> gs(ball.indices.size(), 0.0), vs(ball.indices.size(), 0.0);
  for (std::size_t k = 0; k < ball.indices.size(); ++k) {
    const std::size_t i = ball.indices[k];
    double g2 = 0.0;
    for (int a = 0; a < 3; ++a)
      for (int b = 0; b < 3; ++b) g2 += jac[a][b].values[i] * jac[a][b].values[i];
    gs[k] = g2;
    double v2 = 0.0;
    for (int c = 0; c < 3; ++c) v2 += u[c].values[i] * u[c].values[i];
    vs[k] = v2;
  }
  return h1_of(gs, vs, ball, r);
}

double evaluate_local_norm(const ScalarField& u, const LocalNormRequest& req) {
  switch (req.kind) {
    case LocalNormKind::L2:
      return lp_ball(u, req.x0, req.r, 2);
    case LocalNormKind::L3:
      return lp_ball(u, req.x0, req.r, 3);
    case LocalNormKind::L4:
      return lp_ball(u, req.x0, req.r, 4);
    case LocalNormKind::L4weak:
      return weak_l4_ball(u, req.x0, req.r);
    case LocalNormKind::H1:
      return h1_ball(u, req.x0, req.r).combination;
    case LocalNormKind::gradL2:
      return h1_ball(u, req.x0, req.r).grad_l2;
  }
  throw std::invalid_argument("evaluate_local_norm: unknown kind");
}

double embedding_sharp_constant() {
  // layer-cake optimal split: q/(q-p) = 4 inside the 1/3 root, |B_1| = 4 pi / 3
  return std::pow(4.0, 1.0 / 3.0) * std::pow(4.0 * std::numbers::pi / 3.0, 1.0 / 12.0);
}

CheckCase embedding_l3_from_weak_l4(const ScalarField& u, const Point3& x0, double r,
                                    const std::string& digest) {
  CheckCase c;
  c.input_digest = digest;
  c.lhs = lp_ball(u, x0, r, 3);
  c.rhs_no_constant = std::pow(r, 0.25) * weak_l4_ball(u, x0, r);
  if (c.rhs_no_constant > 1e-14) {
    c.ratio = c.lhs / c.rhs_no_constant;
  } else {
    c.degenerate = true;
  }
  return c;
}

} // namespace nsdiag

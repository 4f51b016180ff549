#include "nsdiag/scaled_quantities.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <optional>
#include <sstream>
#include <stdexcept>

namespace nsdiag {

namespace {

constexpr double kTimeTol = 1e-9;

bool has_pressure(const Snapshot& s) { return s.q.values.size() == s.v.grid.size(); }

double ball_sum(const std::vector<double>& field, const BallSamples& ball) {
  double s = 0.0;
  for (std::size_t i : ball.indices) s += field[i];
  return s;
}

// |v|^2 over ball samples
double ball_v2(const VectorField& v, const BallSamples& ball) {
  const double* a = v[0].values.data();
  const double* b = v[1].values.data();
  const double* c = v[2].values.data();
  double s = 0.0;
  for (std::size_t i : ball.indices) s += a[i] * a[i] + b[i] * b[i] + c[i] * c[i];
  return s * ball.cell_volume;
}

double ball_v3(const VectorField& v, const BallSamples& ball) {
  const double* a = v[0].values.data();
  const double* b = v[1].values.data();
  const double* c = v[2].values.data();
  double s = 0.0;
  for (std::size_t i : ball.indices) {
    const double m2 = a[i] * a[i] + b[i] * b[i] + c[i] * c[i];
    s += m2 * std::sqrt(m2);
  }
  return s * ball.cell_volume;
}

double ball_q32(const ScalarField& q, const BallSamples& ball) {
  double s = 0.0;
  for (std::size_t i : ball.indices) {
    const double m = std::abs(q.values[i]);
    s += m * std::sqrt(m);
  }
  return s * ball.cell_volume;
}

// integral over [a,b] of the piecewise-linear interpolant of per-snapshot
// values; eval(i) is called only for the snapshots actually touched
double integrate_window(const SpaceTimeRecord& rec, double a, double b,
                        const std::function<double(std::size_t)>& eval) {
  const auto& snaps = rec.snapshots;
  const double tol = kTimeTol * std::max(1.0, std::abs(b));
  if (a < snaps.front().t - tol || b > snaps.back().t + tol)
    throw std::invalid_argument("time window extends beyond the record");
  a = std::max(a, snaps.front().t);
  b = std::min(b, snaps.back().t);
  if (!(b > a)) throw std::invalid_argument("empty time window");

  std::vector<std::optional<double>> memo(snaps.size());
  auto value = [&](std::size_t i) {
    if (!memo[i]) memo[i] = eval(i);
    return *memo[i];
  };
  auto interp = [&](double t) {
    // linear interpolation inside the bracketing snapshot interval
    std::size_t hi = 1;
    while (hi + 1 < snaps.size() && snaps[hi].t < t) ++hi;
    const std::size_t lo = hi - 1;
    const double t0 = snaps[lo].t, t1 = snaps[hi].t;
    const double w = (t - t0) / (t1 - t0);
    return (1.0 - w) * value(lo) + w * value(hi);
  };

  // breakpoints: window ends plus every snapshot time strictly inside
  std::vector<std::pair<double, double>> pts; // (t, value)
  pts.emplace_back(a, interp(a));
  for (std::size_t i = 0; i < snaps.size(); ++i)
    if (snaps[i].t > a + tol && snaps[i].t < b - tol) pts.emplace_back(snaps[i].t, value(i));
  pts.emplace_back(b, interp(b));

  double total = 0.0;
  for (std::size_t i = 0; i + 1 < pts.size(); ++i)
    total += 0.5 * (pts[i].second + pts[i + 1].second) * (pts[i + 1].first - pts[i].first);
  return total;
}

std::vector<std::size_t> snapshots_in_window(const SpaceTimeRecord& rec, double a, double b) {
  std::vector<std::size_t> out;
  const double tol = kTimeTol * std::max(1.0, std::abs(b));
  for (std::size_t i = 0; i < rec.snapshots.size(); ++i) {
    const double t = rec.snapshots[i].t;
    if (t >= a - tol && t <= b + tol) out.push_back(i);
  }
  return out;
}

} // namespace

double SpaceTimeRecord::dt_save() const {
  if (snapshots.size() < 2)
    throw std::invalid_argument("SpaceTimeRecord: need >= 2 snapshots for dt_save");
  return snapshots[1].t - snapshots[0].t;
}

void SpaceTimeRecord::validate() const {
  if (snapshots.empty()) throw std::invalid_argument("SpaceTimeRecord: empty");
  const Grid& g = snapshots.front().v.grid;
  for (std::size_t i = 0; i < snapshots.size(); ++i) {
    const auto& s = snapshots[i];
    if (!(s.v.grid == g)) throw std::invalid_argument("SpaceTimeRecord: snapshot grid mismatch");
    if (i && !(s.t > snapshots[i - 1].t))
      throw std::invalid_argument("SpaceTimeRecord: times must be strictly increasing");
    if (has_pressure(s)) {
      const double m = s.q.mean();
      if (std::abs(m) > 1e-8 * (1.0 + s.q.linf()))
        throw std::invalid_argument("SpaceTimeRecord: pressure must be zero-mean");
    }
  }
  if (snapshots.size() >= 3) {
    const double dt = dt_save();
    for (std::size_t i = 2; i < snapshots.size(); ++i) {
      const double d = snapshots[i].t - snapshots[i - 1].t;
      if (std::abs(d - dt) > 1e-6 * dt)
        throw std::invalid_argument("SpaceTimeRecord: snapshot cadence must be uniform");
    }
  }
}

void validate_cylinder(const SpaceTimeRecord& rec, const ParabolicCylinder& cyl) {
  if (!(cyl.r > 0.0)) throw std::invalid_argument("cylinder: r must be positive");
  const Grid& g = rec.grid();
  if (!(2.0 * cyl.r < g.box_length / 2.0))
    throw std::invalid_argument("cylinder: ball too large for box");
  const double tol = kTimeTol * std::max(1.0, std::abs(cyl.t0));
  if (cyl.t0 - cyl.r * cyl.r < rec.t_first() - tol)
    throw std::invalid_argument("cylinder: window starts before the record");
  if (cyl.t0 > rec.t_last() + tol)
    throw std::invalid_argument("cylinder: t0 exceeds the record");
}

const ScalarField& RecordCache::grad_sq(std::size_t snapshot_index) {
  std::lock_guard<std::mutex> lock(mutex_);
  auto& slot = gradsq_[snapshot_index];
  if (!slot) {
    const VectorField& v = rec_->snapshots[snapshot_index].v;
    const auto jac = jacobian(v);
    auto f = std::make_unique<ScalarField>(v.grid);
    const std::size_t m = v.grid.size();
    for (int a = 0; a < 3; ++a)
      for (int b = 0; b < 3; ++b) {
        const double* j = jac[a][b].values.data();
        for (std::size_t i = 0; i < m; ++i) f->values[i] += j[i] * j[i];
      }
    slot = std::move(f);
  }
  return *slot;
}

double compute_A(const SpaceTimeRecord& rec, const ParabolicCylinder& cyl) {
  validate_cylinder(rec, cyl);
  const auto window = snapshots_in_window(rec, cyl.t0 - cyl.r * cyl.r, cyl.t0);
  if (window.size() < 2)
    throw std::invalid_argument("compute_A: fewer than 2 snapshots in the time window");
  const BallSamples ball = restrict_ball(rec.grid(), cyl.x0, cyl.r);
  double sup = 0.0;
  for (std::size_t i : window) sup = std::max(sup, ball_v2(rec.snapshots[i].v, ball));
  return sup / cyl.r;
}

double compute_E(const SpaceTimeRecord& rec, const ParabolicCylinder& cyl, RecordCache* cache) {
  validate_cylinder(rec, cyl);
  std::optional<RecordCache> local;
  if (!cache) {
    local.emplace(rec);
    cache = &*local;
  }
  const BallSamples ball = restrict_ball(rec.grid(), cyl.x0, cyl.r);
  const double integral = integrate_window(
      rec, cyl.t0 - cyl.r * cyl.r, cyl.t0, [&](std::size_t i) {
        return ball_sum(cache->grad_sq(i).values, ball) * ball.cell_volume;
      });
  return integral / cyl.r;
}

double compute_C(const SpaceTimeRecord& rec, const ParabolicCylinder& cyl) {
  validate_cylinder(rec, cyl);
  const BallSamples ball = restrict_ball(rec.grid(), cyl.x0, cyl.r);
  const double integral =
      integrate_window(rec, cyl.t0 - cyl.r * cyl.r, cyl.t0,
                       [&](std::size_t i) { return ball_v3(rec.snapshots[i].v, ball); });
  return integral / (cyl.r * cyl.r);
}

double compute_D(const SpaceTimeRecord& rec, const ParabolicCylinder& cyl) {
  validate_cylinder(rec, cyl);
  for (const auto& s : rec.snapshots)
    if (!has_pressure(s))
      throw std::invalid_argument("compute_D: record has no stored pressure");
  const BallSamples ball = restrict_ball(rec.grid(), cyl.x0, cyl.r);
  const double integral =
      integrate_window(rec, cyl.t0 - cyl.r * cyl.r, cyl.t0,
                       [&](std::size_t i) { return ball_q32(rec.snapshots[i].q, ball); });
  return integral / (cyl.r * cyl.r);
}

ScaledQuantities compute_quantities(const SpaceTimeRecord& rec, const ParabolicCylinder& cyl,
                                    RecordCache* cache) {
  ScaledQuantities q;
  q.A = compute_A(rec, cyl);
  q.E = compute_E(rec, cyl, cache);
  q.C = compute_C(rec, cyl);
  q.D = compute_D(rec, cyl);
  return q;
}

RadiusScan scan_radii(const SpaceTimeRecord& rec, const Point3& x0, double t0,
                      const std::vector<double>& radii) {
  RadiusScan scan;
  scan.rows.resize(radii.size());
  RecordCache cache(rec);
  const double dt = rec.dt_save();
#pragma omp parallel for schedule(dynamic)
  for (std::size_t k = 0; k < radii.size(); ++k) {
    RadiusScanRow& row = scan.rows[k];
    row.r = radii[k];
    try {
      if (dt > row.r * row.r / 8.0)
        throw std::invalid_argument("cadence gate: dt_save > r^2/8");
      const ParabolicCylinder cyl{x0, t0, row.r};
      row.q = compute_quantities(rec, cyl, &cache);
      row.ok = true;
    } catch (const std::exception& e) {
      row.error = e.what();
    }
  }
  bool any = false;
  for (const auto& row : scan.rows)
    if (row.ok) {
      scan.sup_G = std::max(scan.sup_G, row.q.G());
      scan.sup_g = std::max(scan.sup_g, row.q.g());
      any = true;
    }
  if (!any) {
    scan.sup_G = 0.0;
    scan.sup_g = 0.0;
  }
  return scan;
}

std::string RadiusScan::to_csv() const {
  auto fmt = [](double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return std::string(buf);
  };
  std::ostringstream os;
  os << "r,A,E,C,D,G,g\n";
  for (const auto& row : rows) {
    if (row.ok) {
      os << fmt(row.r) << ',' << fmt(row.q.A) << ',' << fmt(row.q.E) << ',' << fmt(row.q.C)
         << ',' << fmt(row.q.D) << ',' << fmt(row.q.G()) << ',' << fmt(row.q.g()) << '\n';
    } else {
      std::string msg = row.error;
      for (char& ch : msg)
        if (ch == ',') ch = ';';
      os << fmt(row.r) << ",ERROR: " << msg << ",,,,,\n";
    }
  }
  os << "sup,,,,," << fmt(sup_G) << ',' << fmt(sup_g) << '\n';
  return os.str();
}

SpaceTimeRecord ns_rescale(const SpaceTimeRecord& rec, double lambda) {
  if (!(lambda > 0.0) || !std::isfinite(lambda))
    throw std::invalid_argument("ns_rescale: lambda must be positive and finite");
  rec.validate();
  const Grid& g = rec.grid();
  const Grid g2(g.n, g.box_length / lambda);
  SpaceTimeRecord out;
  out.viscosity = rec.viscosity;
  out.provenance = rec.provenance + ";rescaled(lambda=" + std::to_string(lambda) + ")";
  out.snapshots.reserve(rec.snapshots.size());
  const double l2 = lambda * lambda;
  for (const auto& s : rec.snapshots) {
    Snapshot ns;
    ns.t = s.t / l2;
    ns.v = VectorField(g2);
    for (int c = 0; c < 3; ++c)
      for (std::size_t i = 0; i < ns.v[c].values.size(); ++i)
        ns.v[c].values[i] = lambda * s.v[c].values[i];
    if (has_pressure(s)) {
      ns.q = ScalarField(g2);
      for (std::size_t i = 0; i < ns.q.values.size(); ++i)
        ns.q.values[i] = l2 * s.q.values[i];
    }
    out.snapshots.push_back(std::move(ns));
  }
  return out;
}

ParabolicCylinder rescale_cylinder(const ParabolicCylinder& cyl, double lambda) {
  return ParabolicCylinder{{cyl.x0[0] / lambda, cyl.x0[1] / lambda, cyl.x0[2] / lambda},
                           cyl.t0 / (lambda * lambda), cyl.r / lambda};
}

} // namespace nsdiag

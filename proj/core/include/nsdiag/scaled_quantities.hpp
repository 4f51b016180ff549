#pragma once

#include "nsdiag/grid.hpp"

#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

namespace nsdiag {

struct Snapshot {
  double t = 0.0;
  VectorField v;
  ScalarField q;
};

// Time-ordered (velocity, pressure) trajectory on one grid, uniform cadence.
struct SpaceTimeRecord {
  std::vector<Snapshot> snapshots;
  double viscosity = 1.0;
  std::string provenance;

  const Grid& grid() const { return snapshots.front().v.grid; }
  double t_first() const { return snapshots.front().t; }
  double t_last() const { return snapshots.back().t; }
  double dt_save() const;
  void validate() const;
};

// Q(z0, r) = B(x0, r) x ]t0 - r^2, t0[
struct ParabolicCylinder {
  Point3 x0{};
  double t0 = 0.0;
  double r = 0.0;
};

void validate_cylinder(const SpaceTimeRecord& rec, const ParabolicCylinder& cyl);

struct ScaledQuantities {
  double A = 0.0, E = 0.0, C = 0.0, D = 0.0;
  double G() const { return std::max(A, std::max(E, C)); }
  double g() const { return std::min(A, std::min(E, C)); }
};

// Per-record cache of |grad v|^2 snapshots; fills lazily, thread-safe.
class RecordCache {
 public:
  explicit RecordCache(const SpaceTimeRecord& rec) : rec_(&rec), gradsq_(rec.snapshots.size()) {}
  const ScalarField& grad_sq(std::size_t snapshot_index);

 private:
  const SpaceTimeRecord* rec_;
  std::vector<std::unique_ptr<ScalarField>> gradsq_;
  std::mutex mutex_;
};

double compute_A(const SpaceTimeRecord& rec, const ParabolicCylinder& cyl);
double compute_E(const SpaceTimeRecord& rec, const ParabolicCylinder& cyl,
                 RecordCache* cache = nullptr);
double compute_C(const SpaceTimeRecord& rec, const ParabolicCylinder& cyl);
double compute_D(const SpaceTimeRecord& rec, const ParabolicCylinder& cyl);
ScaledQuantities compute_quantities(const SpaceTimeRecord& rec, const ParabolicCylinder& cyl,
                                    RecordCache* cache = nullptr);

struct RadiusScanRow {
  double r = 0.0;
  bool ok = false;
  std::string error;
  ScaledQuantities q;
};

struct RadiusScan {
  std::vector<RadiusScanRow> rows;
  double sup_G = 0.0;
  double sup_g = 0.0; // running sup of g over accepted radii
  std::string to_csv() const; // columns r, A, E, C, D, G, g plus sup rows
};

// Per-radius quantities at fixed (x0, t0); radii failing the cadence gate
// dt_save <= r^2/8 (or any per-radius error) are reported, the scan continues.
RadiusScan scan_radii(const SpaceTimeRecord& rec, const Point3& x0, double t0,
                      const std::vector<double>& radii);

// Navier-Stokes rescaling v -> lambda v(lambda x, lambda^2 t),
// q -> lambda^2 q(lambda x, lambda^2 t). On the periodic box this is exact:
// samples are reused and the box length becomes L / lambda.
SpaceTimeRecord ns_rescale(const SpaceTimeRecord& rec, double lambda);
ParabolicCylinder rescale_cylinder(const ParabolicCylinder& cyl, double lambda);

} // namespace nsdiag

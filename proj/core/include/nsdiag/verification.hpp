#pragma once

#include "nsdiag/check_report.hpp"
#include "nsdiag/grid.hpp"
#include "nsdiag/heat_besov.hpp"
#include "nsdiag/scaled_quantities.hpp"

#include <string>
#include <variant>
#include <vector>

namespace nsdiag {

using AnyFieldRef = std::variant<const ScalarField*, const VectorField*>;

struct NamedField {
  std::string name;
  std::variant<ScalarField, VectorField> field;
  // marks fields standing in for compactly supported data; those are checked
  // against the quarter-box decay gate (warning only)
  bool compact_intent = true;
};

double besov_of(const NamedField& f, const BesovParams& p = {});
// max over snapshots of the per-snapshot Besov norm, the stand-in for the
// L_infty-in-time mixed norm
double record_besov_sup(const SpaceTimeRecord& rec, const BesovParams& p = {});
double linf_of(const NamedField& f);
double l4_box_of(const NamedField& f);
double weak_l4_box_of(const NamedField& f);
double grad_l2_box_of(const NamedField& f); // Frobenius Jacobian for vectors

// ||u||_L4 <= c ||u||_B^{1/2} ||grad u||_L2^{1/2}; strong and weak-L4 numerators.
std::vector<CheckReport> check_interpolation(const std::vector<NamedField>& family,
                                             double cap = 10.0, const BesovParams& bp = {});

// weak-L4(B_R) vs besov^{1/2} (||grad u||_{L2(B_2R)} + ||u||_{L2(B_2R)}/R)^{1/2};
// ratios must sit in a band of +-band_tol around their median across the R sweep.
CheckReport check_localized(const std::vector<NamedField>& family, const Point3& x0,
                            const std::vector<double>& radii, double cap = 50.0,
                            double band_tol = 0.25, const BesovParams& bp = {});

// C(z0,r) vs M^{3/2} (A^{3/4} + E^{3/4}) at 2r, and the (R/r)^{3/4} variant.
struct CBoundsReports {
  CheckReport eq_2r;     // radius-doubling form
  CheckReport eq_scaled; // explicit (R/r)^{3/4} form at R = 2r
  double besov_sup = 0.0;
};
CBoundsReports check_C_bounds(const SpaceTimeRecord& rec,
                              const std::vector<ParabolicCylinder>& cylinders,
                              double cap = 50.0, const BesovParams& bp = {});

// Local energy balance over Q(z0,R) with a product test function
// chi(x) psi(t): quartic compact bump in space, smooth quintic ramp in time.
// For smooth records both sides agree; "ratio" is |LHS-RHS| / max(|LHS|,|RHS|).
struct LocalEnergyOptions {
  double ramp_fraction = 0.5; // portion of the window spent ramping psi 0 -> 1
};
CheckReport check_local_energy(const SpaceTimeRecord& rec, const ParabolicCylinder& cyl,
                               double residual_cap = 0.02, const LocalEnergyOptions& opt = {});

// Pressure decay: D(z0,r) vs (r/R) D(z0,R) + (R/r)^2 C(z0,R).
CheckReport check_pressure_decay(const SpaceTimeRecord& rec, const Point3& x0, double t0,
                                 const std::vector<std::pair<double, double>>& radius_pairs,
                                 double cap = 50.0);

// Young splittings with c = 1; the empirical constant lives in the report.
struct YoungSplit {
  double for_C = 0.0;      // delta (A+E) + delta^-3 M^6 (rho/r)^3
  double for_C23 = 0.0;    // delta (A+E) + delta^-1 M^2 (rho/r)
  double for_scaled = 0.0; // delta (A+E) + delta^-3 M^6 (rho/r)^8
};
YoungSplit young_split(double A_rho, double E_rho, double rho_over_r, double M, double delta);

CheckReport check_young_splits(const SpaceTimeRecord& rec, const Point3& x0, double t0,
                               const std::vector<double>& rho_list, double rho_over_r,
                               double delta, double cap = 50.0, const BesovParams& bp = {});

// Radius-decay recursion E_{k+1} = theta^{1/2} E_k + c (M2 theta^-2 + M6 theta^-11).
struct IterationState {
  double theta = 0.0625;
  double c_iter = 2.0;
  double E0 = 1.0;
  double M2 = 0.0;
  double M6 = 0.0;
};
struct IterationResult {
  std::vector<double> trajectory; // E_0 .. E_K
  double max_closed_form_diff = 0.0;
  double bound_constant = 0.0; // max_k E_k / (theta^{k/2} E0 + M2 + M6)
};
bool iteration_admissible(const IterationState& s);
IterationResult run_iteration(const IterationState& s, int K);

// sup_{r < r0} G(z0, r) vs r0^{1/2} + M^2 + M^6; the empirical constant must
// be stable within x2 under halving r0 and under lambda = 2 rescaling.
struct MainBoundResult {
  double sup_G = 0.0;
  double rhs = 0.0;
  double c_emp = 0.0;
  double C_unit = 0.0; // C(z0, 1)
  double D_unit = 0.0; // D(z0, 1)
  CheckReport report;
};
MainBoundResult check_main_bound(const SpaceTimeRecord& rec, const Point3& x0, double t0,
                                 double r0, const BesovParams& bp = {});

std::vector<double> geometric_radii(double r_max, double r_min, double factor = 0.84);

} // namespace nsdiag

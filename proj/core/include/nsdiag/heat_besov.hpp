#pragma once

#include "nsdiag/check_report.hpp"
#include "nsdiag/grid.hpp"

#include <string>
#include <vector>

namespace nsdiag {

// Heat semigroup S(t): multiplier exp(-t |k|^2) on Fourier coefficients.
ScalarField heat_evolve(const ScalarField& f, double t);
VectorField heat_evolve(const VectorField& f, double t);

struct BesovParams {
  double t_min = 0.0;         // <=0 picks dx^2/4
  double t_max = 0.0;         // <=0 picks (L/4)^2
  int points_per_decade = 8;
  bool allow_mean = false;    // opt in to dropping a nonzero zero mode
};

// sup_{t>0} sqrt(t) ||S(t) f||_inf, taken over a geometric t grid.
struct BesovEstimate {
  double norm_value = 0.0;
  double argmax_t = 0.0;
  std::vector<double> t_grid;
  std::vector<double> profile;

  std::string to_json(const std::string& toolkit_version = "",
                      const std::string& config_digest = "") const;
};

std::vector<double> besov_t_grid(const Grid& g, const BesovParams& p = {});

BesovEstimate besov_norm(const ScalarField& f, const BesovParams& p = {});
BesovEstimate besov_norm(const VectorField& f, const BesovParams& p = {});

// int_{R^3} exp(-|u|^2) |u| du by radial quadrature.
double appendix_constant_C0(double truncation_radius = 12.0, int panels = 2048);

// Commutator u = phi S(t)f - S(t)(phi f) and its Duhamel reconstruction
// I + J from the forcings -2 div(grad(phi) w) and w lap(phi).
struct CommutatorRecord {
  std::vector<double> t_grid;
  std::vector<ScalarField> u;
  std::vector<ScalarField> duhamel_I;
  std::vector<ScalarField> duhamel_J;
  double support_volume = 0.0;
  std::vector<double> sqrt_t_u_inf;      // sqrt(t) ||u(.,t)||_inf per t
  double max_reconstruction_error = 0.0; // max_t ||u - (I+J)||_inf
};

CommutatorRecord cutoff_commutator(const ScalarField& f, const ScalarField& phi,
                                   const std::vector<double>& t_grid);

// Ratio besov(f*phi) / besov(f) over a (field x bump) family.
CheckReport verify_cutoff_lemma(const std::vector<std::pair<std::string, ScalarField>>& fields,
                                const std::vector<std::pair<std::string, ScalarField>>& bumps,
                                double cap = 50.0, const BesovParams& p = {});

// Radial plateau exp(-((|x-c|^2)/sigma^2)^power): ~1 inside sigma, below
// 1e-8 past ~1.44 sigma for power 4. Entire in the coordinates, so it is
// spectrally clean, unlike a true compactly supported bump.
ScalarField make_bump(const Grid& g, const Point3& center, double sigma,
                      int power = 4, double height = 1.0);
double bump_support_radius(double sigma, int power = 4, double eps = 1e-8);

} // namespace nsdiag

#pragma once

#include "nsdiag/grid.hpp"
#include "nsdiag/scaled_quantities.hpp"

#include <cstdint>
#include <string>

namespace nsdiag {

enum class FieldKind {
  taylor_green,
  gaussian_vortex,
  abc,
  random_solenoidal,
  single_mode,
  plateau,
};

FieldKind field_kind_from_string(const std::string& s);
std::string to_string(FieldKind k);

// Deterministic synthetic divergence-free fields. length_scale is the mode
// multiplier for trigonometric kinds and the physical width otherwise.
struct FieldSpec {
  FieldKind kind = FieldKind::taylor_green;
  int n = 64;
  double box_length = 6.283185307179586;
  double amplitude = 1.0;
  double length_scale = 1.0;
  std::uint64_t seed = 0;
  Point3 center{-1.0, -1.0, -1.0}; // negative -> box center

  std::string digest_string() const;
};

VectorField generate(const FieldSpec& spec);

// Pseudospectral unit-viscosity Navier-Stokes stepper: rotational-form
// nonlinearity, 2/3 dealiasing, integrating-factor RK4.
struct SimSpec {
  FieldSpec init;
  double viscosity = 1.0;
  double dt = 1e-3;
  int steps = 100;
  int save_every = 1;
  bool dealias = true;

  std::string digest_string() const;
};

struct SimState {
  Grid grid;
  double t = 0.0;
  double viscosity = 1.0;
  double dt = 0.0;
  bool dealias = true;
  std::array<SpectralField, 3> v_hat;
};

SimState make_sim_state(const VectorField& v0, double viscosity, double dt, bool dealias = true);
void rk4_step(SimState& state);
VectorField state_velocity(const SimState& state);

SpaceTimeRecord simulate(const SimSpec& spec);
SpaceTimeRecord simulate_from(const VectorField& v0, double viscosity, double dt, int steps,
                              int save_every, bool dealias = true,
                              const std::string& provenance = "");

// Declarative key = value spec text ('#' comments allowed). Field keys:
// kind, n, L, amp, scale, seed, center (x,y,z). Sim files add nu, dt, steps,
// save_every, dealias on top of the field keys.
FieldSpec parse_field_spec(const std::string& text);
SimSpec parse_sim_spec(const std::string& text);

} // namespace nsdiag

#pragma once

#include <span>

#include "unileak/metrics.hpp"
#include "unileak/model.hpp"

namespace unileak {

struct Propagator {
  CMatrix u;
  double t = 0.0;
};

/// Interaction-picture dipole, entrywise mu_ij exp(i (E_i - E_j) t).
CMatrix mu_tilde(const SystemModel& model, double t);

/// H = -mu~ E - mu~^dagger E*
CMatrix hamiltonian_from(const CMatrix& mu_t, Complex e_field);
CMatrix hamiltonian(const SystemModel& model, Complex e_field, double t);

/// Largest stable step: dt * max_coupled_frequency <= 0.5.
inline constexpr double kMaxPhasePerStep = 0.5;

/// Throws ConfigError when dt is non-positive or too coarse for the model.
void check_step_size(const SystemModel& model, double dt);

/// min(0.05 / omega_max, t_final / 2^16)
double default_dt(const SystemModel& model, double t_final);

/// One zeroth-order-hold step: the field is held over [t, t + dt) and mu~ is
/// taken at the midpoint, U(t + dt) = exp(-i H(E, t + dt/2) dt) U(t).
Propagator step(const Propagator& prop, const SystemModel& model, Complex e_field, double dt);

struct FieldSample {
  double t = 0.0;
  Complex e;
};

/// Open-loop propagation of a stored field from u0, recording J and C against
/// `target` on the way. Field rows follow the Trajectory convention: sample k
/// is held on [t_k, t_k + dt), and the grid must start at 0 and be uniform.
Trajectory replay(const SystemModel& model, std::span<const FieldSample> field,
                  const CMatrix& u0, const CMatrix& target);

/// Spacing of a uniform grid starting at t = 0; throws InputError otherwise.
double uniform_spacing(std::span<const FieldSample> field);

}  // namespace unileak

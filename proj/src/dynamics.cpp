#include "unileak/dynamics.hpp"

#include <algorithm>
#include <cmath>

namespace unileak {

CMatrix mu_tilde(const SystemModel& model, double t) {
  const auto& mu = model.dipole();
  const auto& e = model.energies();
  CMatrix out = CMatrix::Zero(mu.rows(), mu.cols());
  for (Eigen::Index j = 0; j < mu.cols(); ++j) {
    for (Eigen::Index i = 0; i < mu.rows(); ++i) {
      const Complex m = mu(i, j);
      if (m == Complex(0.0)) continue;
      const double phase = (e[static_cast<std::size_t>(i)] - e[static_cast<std::size_t>(j)]) * t;
      out(i, j) = m * std::polar(1.0, phase);
    }
  }
  return out;
}

CMatrix hamiltonian_from(const CMatrix& mu_t, Complex e_field) {
  CMatrix h = -e_field * mu_t;
  h -= std::conj(e_field) * mu_t.adjoint();
  return h;
}

CMatrix hamiltonian(const SystemModel& model, Complex e_field, double t) {
  return hamiltonian_from(mu_tilde(model, t), e_field);
}

void check_step_size(const SystemModel& model, double dt) {
  if (!(dt > 0.0) || !std::isfinite(dt)) {
    throw ConfigError("dt: must be positive and finite");
  }
  const double phase = dt * model.max_coupled_frequency();
  if (phase > kMaxPhasePerStep) {
    throw ConfigError("dt: " + std::to_string(dt) + " too coarse; dt * omega_max = " +
                      std::to_string(phase) + " exceeds " + std::to_string(kMaxPhasePerStep));
  }
}

double default_dt(const SystemModel& model, double t_final) {
  const double by_grid = t_final / 65536.0;
  const double w = model.max_coupled_frequency();
  if (w <= 0.0) return by_grid;
  return std::min(0.05 / w, by_grid);
}

Propagator step(const Propagator& prop, const SystemModel& model, Complex e_field, double dt) {
  if (!(dt > 0.0)) throw ConfigError("dt: must be positive");
  if (dt * model.max_coupled_frequency() > kMaxPhasePerStep) check_step_size(model, dt);
  const CMatrix h = hamiltonian(model, e_field, prop.t + 0.5 * dt);
  return {expm_skew(h, dt) * prop.u, prop.t + dt};
}

double uniform_spacing(std::span<const FieldSample> field) {
  if (field.size() < 2) throw InputError("field: need at least two samples");
  if (field[0].t != 0.0) throw InputError("field: grid must start at t = 0");
  const double dt = field[1].t - field[0].t;
  if (!(dt > 0.0)) throw InputError("field: times must increase");
  for (std::size_t k = 0; k < field.size(); ++k) {
    const double expected = static_cast<double>(k) * dt;
    if (std::abs(field[k].t - expected) > 1e-9 * std::max(1.0, expected)) {
      throw InputError("field: nonuniform time grid at row " + std::to_string(k) + " (t = " +
                       std::to_string(field[k].t) + ", expected " + std::to_string(expected) +
                       ")");
    }
  }
  return dt;
}

Trajectory replay(const SystemModel& model, std::span<const FieldSample> field,
                  const CMatrix& u0, const CMatrix& target) {
  const double dt = uniform_spacing(field);
  check_step_size(model, dt);
  const CMatrix p_r = projector(model);
  require_same_dim(u0, p_r, "replay");

  Trajectory traj;
  traj.dt = dt;
  traj.reserve(field.size());
  Propagator prop{u0, 0.0};
  for (const auto& sample : field) {
    prop.t = sample.t;
    traj.append(prop.t, sample.e, objective(prop.u, target, p_r), constraint(prop.u, p_r),
                unitarity_residual(prop.u));
    prop = step(prop, model, sample.e, dt);
  }
  prop.t = static_cast<double>(field.size()) * dt;
  traj.final_u = prop.u;
  traj.final_state = {prop.t, objective(prop.u, target, p_r), constraint(prop.u, p_r),
                      unitarity_residual(prop.u)};
  return traj;
}

}  // namespace unileak

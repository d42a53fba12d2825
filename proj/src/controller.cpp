#include "unileak/controller.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace unileak {

double Envelope::operator()(double t, double t_final) const {
  if (kind == Kind::constant) return amplitude;
  const double s = std::sin(M_PI * t / t_final);
  return amplitude * s * s;
}

Envelope Envelope::parse(const std::string& text) {
  Envelope env;
  std::string number = text;
  if (text.rfind("sin2:", 0) == 0) {
    env.kind = Kind::sin2;
    number = text.substr(5);
  }
  std::size_t used = 0;
  try {
    env.amplitude = std::stod(number, &used);
  } catch (const std::exception&) {
    throw ConfigError("gain: cannot parse \"" + text + "\" (expected REAL or sin2:REAL)");
  }
  if (used != number.size()) {
    throw ConfigError("gain: cannot parse \"" + text + "\" (expected REAL or sin2:REAL)");
  }
  if (!std::isfinite(env.amplitude) || env.amplitude < 0.0) {
    throw ConfigError("gain: amplitude must be finite and >= 0");
  }
  return env;
}

std::string Envelope::to_string() const {
  std::ostringstream out;
  out.precision(17);
  if (kind == Kind::sin2) out << "sin2:";
  out << amplitude;
  return out.str();
}

std::string_view to_string(PhaseLock lock) {
  return lock == PhaseLock::continuous ? "continuous" : "discrete";
}

PhaseLock parse_phase_lock(const std::string& text) {
  if (text == "continuous") return PhaseLock::continuous;
  if (text == "discrete") return PhaseLock::discrete;
  throw ConfigError("lock: expected continuous or discrete, got \"" + text + "\"");
}

void ControlParams::validate() const {
  if (!std::isfinite(e_max) || e_max <= 0.0) throw ConfigError("e_max: must be > 0");
  if (!std::isfinite(gain.amplitude) || gain.amplitude < 0.0) {
    throw ConfigError("gain: amplitude must be finite and >= 0");
  }
  if (!(seed_eps >= 0.0 && seed_eps <= 0.1)) throw ConfigError("seed_eps: must lie in [0, 0.1]");
  if (!(g_floor >= 1e-14 && g_floor <= 1e-6)) throw ConfigError("g_floor: must lie in [1e-14, 1e-6]");
  if (!std::isfinite(t_final) || t_final <= 0.0) throw ConfigError("t_final: must be > 0");
  if (!std::isfinite(dt) || dt <= 0.0) throw ConfigError("dt: must be > 0");
  if (dt > t_final) throw ConfigError("dt: larger than t_final");
}

ControlParams default_params(const SystemModel& model, double t_final) {
  ControlParams p;
  p.t_final = t_final;
  p.dt = default_dt(model, t_final);
  return p;
}

Complex compute_g(const CMatrix& u, const CMatrix& mu_t, const CMatrix& p_r) {
  require_same_dim(u, mu_t, "compute_g");
  require_same_dim(u, p_r, "compute_g");
  const CMatrix u_r = p_r * u * p_r;
  const CMatrix forward = p_r * mu_t * u * p_r;                // P mu~ U P
  const CMatrix backward = p_r * u.adjoint() * mu_t * p_r;     // P U^dagger mu~ P
  return trace_of_product(u_r.adjoint(), forward) - trace_of_product(backward, u_r);
}

EtaF compute_f(const CMatrix& u, const CMatrix& mu_t, const CMatrix& o_r, const CMatrix& p_r) {
  require_same_dim(u, mu_t, "compute_f");
  require_same_dim(u, o_r, "compute_f");
  require_same_dim(u, p_r, "compute_f");
  const CMatrix u_r = p_r * u * p_r;
  const Complex eta = trace_of_product(o_r.adjoint(), u_r);
  const CMatrix forward = p_r * mu_t * u * p_r;
  const CMatrix backward = p_r * u.adjoint() * mu_t * p_r;
  const Complex a = trace_of_product(o_r.adjoint(), forward);
  const Complex b = trace_of_product(backward, o_r);
  return {eta, kI * (std::conj(eta) * a - eta * b)};
}

ControllerQuantities controller_quantities(const CMatrix& u, const CMatrix& mu_t,
                                           const CMatrix& o_r, const CMatrix& p_r) {
  require_same_dim(u, mu_t, "controller_quantities");
  require_same_dim(u, o_r, "controller_quantities");
  require_same_dim(u, p_r, "controller_quantities");
  // Same expressions as compute_g / compute_f, sharing the two products.
  const CMatrix u_r = p_r * u * p_r;
  const CMatrix forward = p_r * mu_t * u * p_r;
  const CMatrix backward = p_r * u.adjoint() * mu_t * p_r;
  ControllerQuantities q;
  q.g = trace_of_product(u_r.adjoint(), forward) - trace_of_product(backward, u_r);
  q.eta = trace_of_product(o_r.adjoint(), u_r);
  const Complex a = trace_of_product(o_r.adjoint(), forward);
  const Complex b = trace_of_product(backward, o_r);
  q.f = kI * (std::conj(q.eta) * a - q.eta * b);
  q.alpha = std::real(q.f * std::conj(q.g));
  const CMatrix kick = p_r * mu_t * (mu_t.adjoint() * u * p_r);
  q.leak = forward.squaredNorm() - std::real(trace_of_product(u_r.adjoint(), kick));
  return q;
}

double leak_coefficient(const CMatrix& u, const CMatrix& mu_t, const CMatrix& p_r) {
  require_same_dim(u, mu_t, "leak_coefficient");
  require_same_dim(u, p_r, "leak_coefficient");
  const CMatrix u_r = p_r * u * p_r;
  const CMatrix forward = p_r * mu_t * u * p_r;
  const CMatrix kick = p_r * mu_t * (mu_t.adjoint() * u * p_r);
  return forward.squaredNorm() - std::real(trace_of_product(u_r.adjoint(), kick));
}

Complex field_law(const ControllerQuantities& q, double s_t, double e_max, double g_floor) {
  const double mag = std::abs(q.g);
  if (!(mag >= g_floor)) return {0.0, 0.0};
  const Complex direction = std::conj(q.g) / mag;
  const double alpha = std::real(q.f * std::conj(q.g)) * s_t;
  return e_max * std::tanh(alpha / e_max) * direction;
}

Complex field_law_discrete(const ControllerQuantities& q, double s_t, double e_max,
                           double g_floor, double dt) {
  const double mag = std::abs(q.g);
  if (!(mag >= g_floor)) return {0.0, 0.0};
  const double alpha = std::real(q.f * std::conj(q.g)) * s_t;
  double amp = e_max * std::tanh(alpha / e_max);
  // |sin(phi)| <= 1 bounds the amplitude the lock can hold over one step.
  if (q.leak != 0.0) {
    const double cap = 2.0 * mag / (dt * std::abs(q.leak));
    amp = std::clamp(amp, -cap, cap);
  }
  const double sin_phi = amp * dt * q.leak / (2.0 * mag);
  const double cos_phi = std::sqrt(std::max(0.0, 1.0 - sin_phi * sin_phi));
  return amp * (std::conj(q.g) / mag) * Complex(cos_phi, sin_phi);
}

CMatrix seed_initial(const SystemModel& model, double seed_eps) {
  if (!(seed_eps >= 0.0)) throw ConfigError("seed_eps: must be >= 0");
  if (seed_eps == 0.0) return CMatrix::Identity(model.n_levels(), model.n_levels());
  const CMatrix k = model.dipole() + model.dipole().adjoint();
  return expm_skew(k, seed_eps);
}

std::size_t step_count(double t_final, double dt) {
  const auto n = std::llround(t_final / dt);
  return n < 1 ? 1 : static_cast<std::size_t>(n);
}

namespace {

void require_register_unitary(const CMatrix& o_r, const CMatrix& p_r) {
  require_same_dim(o_r, p_r, "synthesize");
  const double outside = (o_r - p_r * o_r * p_r).cwiseAbs().maxCoeff();
  const double defect = (o_r.adjoint() * o_r - p_r).cwiseAbs().maxCoeff();
  if (outside > 1e-12 || defect > 1e-12) {
    throw ContractError("target: must be supported on the register and unitary there "
                        "(max |O^dagger O - P_r| = " + std::to_string(defect) + ")");
  }
}

}  // namespace

Trajectory synthesize(const SystemModel& model, const CMatrix& o_r, const ControlParams& params,
                      const SynthesisOptions& options) {
  params.validate();
  check_step_size(model, params.dt);
  const CMatrix p_r = projector(model);
  require_register_unitary(o_r, p_r);

  const double dt = params.dt;
  const std::size_t n_steps = step_count(params.t_final, dt);
  const double t_end = static_cast<double>(n_steps) * dt;

  std::vector<std::size_t> snap_at;
  if (options.snapshots == 1) {
    snap_at.push_back(n_steps);
  } else if (options.snapshots > 1) {
    for (int i = 0; i < options.snapshots; ++i) {
      snap_at.push_back(static_cast<std::size_t>(std::llround(
          static_cast<double>(i) * static_cast<double>(n_steps) / (options.snapshots - 1))));
    }
  }
  auto next_snap = snap_at.begin();

  Trajectory traj;
  traj.dt = dt;
  traj.reserve(n_steps);
  Propagator prop{seed_initial(model, params.seed_eps), 0.0};

  for (std::size_t k = 0; k <= n_steps; ++k) {
    prop.t = static_cast<double>(k) * dt;
    const double residual = unitarity_residual(prop.u);
    if (!(residual <= options.max_unit_residual)) {
      throw NumericalError("synthesize: unitarity residual " + std::to_string(residual) +
                           " exceeds " + std::to_string(options.max_unit_residual) +
                           " at t = " + std::to_string(prop.t) + " (step " +
                           std::to_string(k) + ")");
    }
    while (next_snap != snap_at.end() && *next_snap == k) {
      traj.snapshots.push_back({prop.t, prop.u});
      ++next_snap;
    }
    const double j = objective(prop.u, o_r, p_r);
    const double c = constraint(prop.u, p_r);
    if (k == n_steps) {
      traj.final_u = prop.u;
      traj.final_state = {prop.t, j, c, residual};
      break;
    }

    const CMatrix mu_mid = mu_tilde(model, prop.t + 0.5 * dt);
    const ControllerQuantities q = controller_quantities(prop.u, mu_mid, o_r, p_r);
    const double s_t = params.gain(prop.t, t_end);
    const Complex e = params.lock == PhaseLock::discrete
                          ? field_law_discrete(q, s_t, params.e_max, params.g_floor, dt)
                          : field_law(q, s_t, params.e_max, params.g_floor);
    traj.append(prop.t, e, j, c, residual);
    prop = step(prop, model, e, dt);
  }
  return traj;
}

}  // namespace unileak

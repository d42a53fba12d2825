#pragma once

#include <functional>
#include <optional>
#include <string>

#include "unileak/dynamics.hpp"
#include "unileak/metrics.hpp"
#include "unileak/model.hpp"

namespace unileak {

/// Positive gain profile S(t) applied to (f . g) before saturation.
struct Envelope {
  enum class Kind { constant, sin2 };
  Kind kind = Kind::constant;
  double amplitude = 1.0;

  /// S(t): amplitude, or amplitude * sin^2(pi t / t_final).
  double operator()(double t, double t_final) const;

  /// "0.5" or "sin2:0.5"
  static Envelope parse(const std::string& text);
  std::string to_string() const;
};

/// How the field phase is tied to g.
///  continuous: E parallel to conj(g), so Im(g E) = 0 and dC/dt = 0 at the
///              decision instant.
///  discrete:   phase tilted so that C is stationary across the whole
///              zeroth-order-hold step to second order in dt.
enum class PhaseLock { continuous, discrete };

std::string_view to_string(PhaseLock lock);
PhaseLock parse_phase_lock(const std::string& text);

/// Constant gain S used when none is given. Independent of t_final: with a
/// constant envelope the closed-loop dynamics do not depend on the horizon.
inline constexpr double kDefaultGain = 3.0;

/// Seed rotation used when none is given. The excited-manifold population is
/// frozen at its seeded value and is what the field acts through, so the
/// seed sets the speed of convergence; too small a seed stalls at the saddle
/// J ~ eps^4 of traceless targets such as FT(6), too large a seed makes the
/// field less faithful when replayed from the exact identity.
inline constexpr double kDefaultSeedEps = 0.055;

struct ControlParams {
  double e_max = 1.0;
  Envelope gain{Envelope::Kind::constant, kDefaultGain};
  double seed_eps = kDefaultSeedEps;
  double g_floor = 1e-12;
  double dt = 0.0;
  double t_final = 0.0;
  PhaseLock lock = PhaseLock::discrete;

  void validate() const;
};

/// Default control parameters for a model and final time; dt follows
/// default_dt.
ControlParams default_params(const SystemModel& model, double t_final);

struct ControllerQuantities {
  Complex g;
  Complex eta;
  Complex f;
  double alpha = 0.0;  // Re(f conj(g))
  // dt^2 coefficient of C across a held step: C' = C - 2 dt Im(g E) + dt^2 |E|^2 leak.
  double leak = 0.0;
};

/// g with dC/dt = -2 Im(g E):
///   g = Tr(U_r^dagger P_r mu~ U P_r - P_r U^dagger mu~ P_r U_r).
Complex compute_g(const CMatrix& u, const CMatrix& mu_t, const CMatrix& p_r);

struct EtaF {
  Complex eta;
  Complex f;
};

/// eta = Tr(O_r^dagger U_r) and f with dJ/dt = 2 Re(f E):
///   f = i (eta* Tr(O_r^dagger P_r mu~ U P_r) - eta Tr(P_r U^dagger mu~ P_r O_r)).
EtaF compute_f(const CMatrix& u, const CMatrix& mu_t, const CMatrix& o_r, const CMatrix& p_r);

ControllerQuantities controller_quantities(const CMatrix& u, const CMatrix& mu_t,
                                           const CMatrix& o_r, const CMatrix& p_r);

/// E = e_max tanh(s (f . g) / e_max) conj(g)/|g|, or 0 when |g| < g_floor.
Complex field_law(const ControllerQuantities& q, double s_t, double e_max, double g_floor);

/// Second-order coefficient of C over a step with constant generator:
///   ||P mu~ U P||^2 - Re Tr(U_r^dagger P mu~ mu~^dagger U P).
double leak_coefficient(const CMatrix& u, const CMatrix& mu_t, const CMatrix& p_r);

/// Field for one held step of length dt under the discrete lock: magnitude as
/// in field_law, phase rotated by phi with sin(phi) = a dt leak / (2 |g|) where
/// a is the signed amplitude, so that -2 Im(g E) + dt |E|^2 leak = 0. The
/// amplitude is capped where no such phase exists.
Complex field_law_discrete(const ControllerQuantities& q, double s_t, double e_max,
                           double g_floor, double dt);

/// exp(-i (mu + mu^dagger) seed_eps): a small deterministic rotation that moves
/// some register population onto the excited levels so that g != 0.
CMatrix seed_initial(const SystemModel& model, double seed_eps);

struct SynthesisOptions {
  /// Number of U snapshots, evenly spaced in time including t = 0 and t_final.
  int snapshots = 0;
  /// Abort threshold on ||U^dagger U - I||_F.
  double max_unit_residual = 1e-4;
};

/// Closed-loop run. At each t_k: mu~ at the step midpoint, g/eta/f from U(t_k),
/// field from field_law, one dynamics step. Runs to t_final.
Trajectory synthesize(const SystemModel& model, const CMatrix& o_r, const ControlParams& params,
                      const SynthesisOptions& options = {});

/// Number of steps for a run: round(t_final / dt), at least one.
std::size_t step_count(double t_final, double dt);

}  // namespace unileak

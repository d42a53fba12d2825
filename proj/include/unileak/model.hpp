#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "unileak/numkernel.hpp"

namespace unileak {

enum class Manifold { ground, excited };

std::string_view to_string(Manifold m);

/// Vibrational-ladder level generator: E_k = offset + omega (k + 1/2) - chi (k + 1/2)^2.
struct LadderSpec {
  int n = 1;
  double omega = 1.0;
  double chi = 0.0;
  double offset = 0.0;

  void validate(std::string_view where = "ladder") const;
  std::vector<double> energies() const;
};

/// One explicit dipole entry mu(lower, upper).
struct DipoleEntry {
  int lower = 0;
  int upper = 0;
  Complex value{1.0, 0.0};
};

/// How ground-excited couplings are filled when building a model.
/// Every ground-excited pair gets `uniform` unless overridden by an entry;
/// with `uniform` = 0 only the listed entries couple.
struct DipoleRule {
  Complex uniform{1.0, 0.0};
  std::vector<DipoleEntry> overrides;
};

/// Multilevel system in scaled units (hbar = 1). Validated on construction and
/// immutable afterwards.
///
/// The dipole matrix follows the convention mu = sum mu_ij |i><j| with i in the
/// ground manifold and j in the excited manifold, so it maps excited -> ground
/// and only the ground-row/excited-column block may be nonzero.
class SystemModel {
 public:
  SystemModel(std::vector<double> energies, std::vector<Manifold> manifold, CMatrix dipole,
              std::vector<int> register_levels);

  int n_levels() const { return static_cast<int>(energies_.size()); }
  int register_size() const { return static_cast<int>(register_.size()); }
  const std::vector<double>& energies() const { return energies_; }
  const std::vector<Manifold>& manifold() const { return manifold_; }
  const CMatrix& dipole() const { return dipole_; }
  const std::vector<int>& register_levels() const { return register_; }

  std::vector<int> levels_in(Manifold m) const;
  bool in_register(int level) const;

  /// Largest |E_i - E_j| over coupled pairs; sets the step-size limit.
  double max_coupled_frequency() const { return max_coupled_frequency_; }

  /// Same levels and couplings with a different register.
  SystemModel with_register(std::vector<int> register_levels) const;

 private:
  std::vector<double> energies_;
  std::vector<Manifold> manifold_;
  CMatrix dipole_;
  std::vector<int> register_;
  double max_coupled_frequency_ = 0.0;
};

SystemModel build_ladder(const LadderSpec& ground, const LadderSpec& excited,
                         const DipoleRule& rule, int register_size);

/// Parses and validates a JSON model config. Errors name the offending field.
SystemModel load_model(std::string_view config_text);
SystemModel load_model_file(const std::string& path);

/// Diagonal 0/1 matrix selecting the register levels.
CMatrix projector(const SystemModel& model);

struct Transition {
  int lower = 0;
  int upper = 0;
  double frequency = 0.0;
};

/// One-photon: ground level <-> excited level pairs with nonzero coupling.
/// Two-photon: distinct register pairs (Raman differences).
struct TransitionTable {
  std::vector<Transition> one_photon;
  std::vector<Transition> two_photon;
};

TransitionTable transition_table(const SystemModel& model);

/// Smallest |nu1 - nu2| between a one-photon and a two-photon frequency;
/// +inf when either set is empty.
double spectral_gap(const TransitionTable& table);

inline constexpr double kMinSpectralGap = 0.1;

/// Reporting helpers. `energy_unit_cm1` is the size of one scaled energy unit
/// in cm^-1; the matching time unit is hbar / that energy.
double to_wavenumbers(double energy, double energy_unit_cm1);
double to_picoseconds(double time, double energy_unit_cm1);

}  // namespace unileak

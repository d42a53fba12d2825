#pragma once

#include <optional>
#include <vector>

#include "unileak/metrics.hpp"
#include "unileak/model.hpp"

namespace unileak {

/// Quantum Fourier transform on the register block, entries w^{jk} / sqrt(n_r)
/// with w = exp(2 pi i / n_r), j and k in register order; zero elsewhere.
CMatrix fourier_target(int n_r, const SystemModel& model);

/// P_r: the identity gate on the register.
CMatrix identity_target(const SystemModel& model);

enum class FeatureKind { one_photon_dip, two_photon_peak };

struct FeatureCheck {
  FeatureKind kind = FeatureKind::one_photon_dip;
  Transition transition;
  bool evaluable = false;
  double ratio = 0.0;  // local amplitude / band median
  bool pass = false;
};

struct SpectrumThresholds {
  double dip_ratio = 0.5;    // dip passes when ratio <= this
  double peak_ratio = 2.0;   // peak passes when ratio >= this
  double window = 0.0;       // band half-width; <= 0 selects 10 bins
};

struct SpectrumReport {
  std::vector<double> freqs;            // two-sided axis of the field spectrum
  std::vector<double> field_amp;
  std::vector<double> intensity_freqs;  // w >= 0 axis of the intensity spectrum
  std::vector<double> intensity_amp;
  double resolution = 0.0;
  double window = 0.0;
  std::vector<FeatureCheck> one_photon_dips;
  std::vector<FeatureCheck> two_photon_peaks;

  int evaluable_dips() const;
  int passed_dips() const;
  int evaluable_peaks() const;
  int passed_peaks() const;
};

/// Field spectrum |E~(w)| with a hole check at every one-photon frequency, and
/// intensity spectrum |(|E|^2)~(w)| with a peak check at every two-photon
/// frequency. Holes are looked for at +nu: the resonant part of the field runs
/// as exp(+i nu t) in the interaction picture.
SpectrumReport spectrum_report(const Trajectory& traj, const SystemModel& model,
                               const SpectrumThresholds& thresholds = {});

struct SnapshotEntry {
  int row = 0;  // position within the register
  int col = 0;
  double re = 0.0;
  double im = 0.0;
};

/// Register-block elements, row-major in register order.
std::vector<SnapshotEntry> snapshot_export(const CMatrix& u, const CMatrix& p_r);

/// Element phases relative to element (0, 0), in (-pi, pi].
std::vector<double> relative_phases(const std::vector<SnapshotEntry>& entries);

}  // namespace unileak

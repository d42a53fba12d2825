#include "unileak/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace unileak {

// --- Trajectory -------------------------------------------------------------

void Trajectory::validate() const {
  const std::size_t n = times.size();
  if (fields.size() != n || j_vals.size() != n || c_vals.size() != n ||
      unit_residuals.size() != n) {
    throw StructuralError("trajectory: columns have different lengths");
  }
  if (n == 0) return;
  if (!(dt > 0.0)) throw StructuralError("trajectory: dt must be positive");
  for (std::size_t k = 0; k < n; ++k) {
    const double expected = times.front() + static_cast<double>(k) * dt;
    if (std::abs(times[k] - expected) > 1e-9 * std::max(1.0, std::abs(expected))) {
      throw StructuralError("trajectory: nonuniform time grid at row " + std::to_string(k));
    }
  }
}

std::vector<double> Trajectory::j_series() const {
  std::vector<double> out(j_vals);
  out.push_back(final_state.j);
  return out;
}

std::vector<double> Trajectory::c_series() const {
  std::vector<double> out(c_vals);
  out.push_back(final_state.c);
  return out;
}

double Trajectory::max_constraint_drift() const {
  const auto c = c_series();
  double drift = 0.0;
  for (double v : c) drift = std::max(drift, std::abs(v - c.front()));
  return drift;
}

double Trajectory::max_unit_residual() const {
  double r = final_state.unit_residual;
  for (double v : unit_residuals) r = std::max(r, v);
  return r;
}

// --- targets ----------------------------------------------------------------

CMatrix fourier_target(int n_r, const SystemModel& model) {
  if (n_r != model.register_size()) {
    throw ConfigError("target: Fourier size " + std::to_string(n_r) +
                      " does not match register size " + std::to_string(model.register_size()));
  }
  const int n = model.n_levels();
  const auto& reg = model.register_levels();
  CMatrix o = CMatrix::Zero(n, n);
  const double norm = 1.0 / std::sqrt(static_cast<double>(n_r));
  for (int j = 0; j < n_r; ++j) {
    for (int k = 0; k < n_r; ++k) {
      // Reduce jk mod n_r so the phase is exact for large products.
      const int power = (j * k) % n_r;
      o(reg[static_cast<std::size_t>(j)], reg[static_cast<std::size_t>(k)]) =
          std::polar(norm, 2.0 * M_PI * power / n_r);
    }
  }
  return o;
}

CMatrix identity_target(const SystemModel& model) { return projector(model); }

// --- spectra ----------------------------------------------------------------

namespace {

double median(std::vector<double> v) {
  if (v.empty()) return 0.0;
  const auto mid = v.begin() + static_cast<std::ptrdiff_t>(v.size() / 2);
  std::nth_element(v.begin(), mid, v.end());
  if (v.size() % 2 == 1) return *mid;
  const double upper = *mid;
  const double lower = *std::max_element(v.begin(), mid);
  return 0.5 * (lower + upper);
}

FeatureCheck check_feature(const std::vector<double>& freqs, const std::vector<double>& amps,
                           double resolution, double window, const Transition& tr,
                           FeatureKind kind, const SpectrumThresholds& th) {
  FeatureCheck check;
  check.kind = kind;
  check.transition = tr;
  const double nu = tr.frequency;
  if (freqs.empty() || nu - window < freqs.front() || nu + window > freqs.back()) return check;

  // freqs is an ascending uniform grid.
  const auto centre = static_cast<std::ptrdiff_t>(std::llround((nu - freqs.front()) / resolution));
  const auto last = static_cast<std::ptrdiff_t>(freqs.size()) - 1;
  double local = 0.0;
  for (std::ptrdiff_t k = std::max<std::ptrdiff_t>(0, centre - 1);
       k <= std::min(last, centre + 1); ++k) {
    local = std::max(local, amps[static_cast<std::size_t>(k)]);
  }
  std::vector<double> band;
  for (std::size_t k = 0; k < freqs.size(); ++k) {
    const auto offset = static_cast<std::ptrdiff_t>(k) - centre;
    if (offset >= -1 && offset <= 1) continue;
    if (std::abs(freqs[k] - nu) <= window) band.push_back(amps[k]);
  }
  const double med = median(std::move(band));
  if (med > 0.0) {
    check.ratio = local / med;
  } else if (local > 0.0) {
    check.ratio = std::numeric_limits<double>::infinity();
  } else {
    return check;  // flat zero: nothing to judge
  }
  check.evaluable = true;
  check.pass = kind == FeatureKind::one_photon_dip ? check.ratio <= th.dip_ratio
                                                   : check.ratio >= th.peak_ratio;
  return check;
}

}  // namespace

SpectrumReport spectrum_report(const Trajectory& traj, const SystemModel& model,
                               const SpectrumThresholds& thresholds) {
  traj.validate();
  if (traj.size() < 2) throw StructuralError("spectrum_report: trajectory too short");
  const double dt = traj.dt;

  SpectrumReport report;
  const auto field_spec = fft_amplitude(traj.fields, dt);
  report.freqs = field_spec.freqs;
  report.field_amp = field_spec.amps;

  std::vector<double> intensity(traj.fields.size());
  std::transform(traj.fields.begin(), traj.fields.end(), intensity.begin(),
                 [](Complex e) { return std::norm(e); });
  const auto intensity_spec = fft_amplitude_real(intensity, dt);
  report.intensity_freqs = intensity_spec.freqs;
  report.intensity_amp = intensity_spec.amps;

  report.resolution = frequency_resolution(traj.size(), dt);
  report.window = thresholds.window > 0.0 ? thresholds.window : 10.0 * report.resolution;

  const auto table = transition_table(model);
  for (const auto& tr : table.one_photon) {
    report.one_photon_dips.push_back(check_feature(report.freqs, report.field_amp,
                                                   report.resolution, report.window, tr,
                                                   FeatureKind::one_photon_dip, thresholds));
  }
  for (const auto& tr : table.two_photon) {
    report.two_photon_peaks.push_back(
        check_feature(report.intensity_freqs, report.intensity_amp, report.resolution,
                      report.window, tr, FeatureKind::two_photon_peak, thresholds));
  }
  return report;
}

namespace {
int count_if_checks(const std::vector<FeatureCheck>& checks, bool need_pass) {
  return static_cast<int>(std::count_if(checks.begin(), checks.end(), [&](const FeatureCheck& c) {
    return c.evaluable && (!need_pass || c.pass);
  }));
}
}  // namespace

int SpectrumReport::evaluable_dips() const { return count_if_checks(one_photon_dips, false); }
int SpectrumReport::passed_dips() const { return count_if_checks(one_photon_dips, true); }
int SpectrumReport::evaluable_peaks() const { return count_if_checks(two_photon_peaks, false); }
int SpectrumReport::passed_peaks() const { return count_if_checks(two_photon_peaks, true); }

// --- compass snapshots ------------------------------------------------------

std::vector<SnapshotEntry> snapshot_export(const CMatrix& u, const CMatrix& p_r) {
  require_same_dim(u, p_r, "snapshot_export");
  std::vector<int> reg;
  for (Eigen::Index i = 0; i < p_r.rows(); ++i) {
    if (p_r(i, i) != Complex(0.0)) reg.push_back(static_cast<int>(i));
  }
  std::vector<SnapshotEntry> out;
  out.reserve(reg.size() * reg.size());
  for (std::size_t a = 0; a < reg.size(); ++a) {
    for (std::size_t b = 0; b < reg.size(); ++b) {
      const Complex z = u(reg[a], reg[b]);
      out.push_back({static_cast<int>(a), static_cast<int>(b), z.real(), z.imag()});
    }
  }
  return out;
}

std::vector<double> relative_phases(const std::vector<SnapshotEntry>& entries) {
  std::vector<double> out;
  if (entries.empty()) return out;
  const double ref = std::atan2(entries.front().im, entries.front().re);
  out.reserve(entries.size());
  for (const auto& e : entries) {
    double d = std::atan2(e.im, e.re) - ref;
    while (d <= -M_PI) d += 2.0 * M_PI;
    while (d > M_PI) d -= 2.0 * M_PI;
    out.push_back(d);
  }
  return out;
}

}  // namespace unileak

#include "unileak/numkernel.hpp"

#define EIGEN_FFTW_DEFAULT
#include <unsupported/Eigen/FFT>

namespace unileak {

namespace {

void require_grid(std::size_t n, double dt, const char* what) {
  if (n == 0) throw StructuralError(std::string(what) + ": empty input");
  if (n < 2) throw StructuralError(std::string(what) + ": need at least two samples");
  if (!(dt > 0.0) || !std::isfinite(dt)) {
    throw StructuralError(std::string(what) + ": sample spacing must be positive");
  }
}

}  // namespace

AmplitudeSpectrum fft_amplitude(std::span<const Complex> samples, double dt) {
  const std::size_t n = samples.size();
  require_grid(n, dt, "fft_amplitude");

  std::vector<Complex> in(samples.begin(), samples.end());
  std::vector<Complex> out;
  Eigen::FFT<double> fft;
  fft.fwd(out, in);

  // Bins k >= ceil(n/2) are the negative frequencies k - n.
  const std::size_t n_neg = n / 2;
  const std::size_t first = n - n_neg;
  const double dw = frequency_resolution(n, dt);

  AmplitudeSpectrum spec;
  spec.freqs.reserve(n);
  spec.amps.reserve(n);
  for (std::size_t k = first; k < n; ++k) {
    spec.freqs.push_back(dw * (static_cast<double>(k) - static_cast<double>(n)));
    spec.amps.push_back(std::abs(out[k]));
  }
  for (std::size_t k = 0; k < first; ++k) {
    spec.freqs.push_back(dw * static_cast<double>(k));
    spec.amps.push_back(std::abs(out[k]));
  }
  return spec;
}

AmplitudeSpectrum fft_amplitude_real(std::span<const double> samples, double dt) {
  const std::size_t n = samples.size();
  require_grid(n, dt, "fft_amplitude_real");

  std::vector<double> in(samples.begin(), samples.end());
  std::vector<Complex> out;
  Eigen::FFT<double> fft;
  fft.SetFlag(Eigen::FFT<double>::HalfSpectrum);
  fft.fwd(out, in);

  const double dw = frequency_resolution(n, dt);
  AmplitudeSpectrum spec;
  const std::size_t n_pos = n / 2 + 1;
  spec.freqs.reserve(n_pos);
  spec.amps.reserve(n_pos);
  for (std::size_t k = 0; k < n_pos && k < out.size(); ++k) {
    spec.freqs.push_back(dw * static_cast<double>(k));
    spec.amps.push_back(std::abs(out[k]));
  }
  return spec;
}

}  // namespace unileak

#include <algorithm>
#include <numeric>

#include "doctest.h"
#include "support/oracles.hpp"
#include "unileak/numkernel.hpp"

using namespace unileak;

namespace {

std::size_t argmax(const std::vector<double>& v) {
  return static_cast<std::size_t>(std::max_element(v.begin(), v.end()) - v.begin());
}

}  // namespace

TEST_CASE("matmul: identity, diagonal and naive-loop oracle") {
  std::mt19937_64 rng(11);
  const CMatrix a = oracle::random_matrix(3, rng);
  CHECK((matmul(CMatrix::Identity(3, 3), a) - a).norm() == 0.0);

  CMatrix d1 = CMatrix::Zero(2, 2), d2 = CMatrix::Zero(2, 2), d3 = CMatrix::Zero(2, 2);
  d1.diagonal() << 1.0, 2.0;
  d2.diagonal() << 3.0, 4.0;
  d3.diagonal() << 3.0, 8.0;
  CHECK((matmul(d1, d2) - d3).norm() == 0.0);

  const CMatrix x = oracle::random_matrix(4, rng);
  const CMatrix y = oracle::random_matrix(4, rng);
  CHECK((matmul(x, y) - oracle::naive_matmul(x, y)).cwiseAbs().maxCoeff() <= 1e-14);
}

TEST_CASE("matmul rejects mismatched and non-square operands") {
  CHECK_THROWS_AS(matmul(CMatrix::Identity(3, 3), CMatrix::Identity(4, 4)), StructuralError);
  CHECK_THROWS_AS(matmul(CMatrix::Zero(2, 3), CMatrix::Zero(3, 2)), StructuralError);
}

TEST_CASE("adjoint: Hermitian fixed point, sign flip, product rule") {
  std::mt19937_64 rng(12);
  const CMatrix h = oracle::random_hermitian(4, rng);
  CHECK((adjoint(h) - h).norm() == 0.0);

  const CMatrix ii = kI * CMatrix::Identity(3, 3);
  CHECK((adjoint(ii) + ii).norm() == 0.0);

  const CMatrix a = oracle::random_matrix(3, rng);
  const CMatrix b = oracle::random_matrix(3, rng);
  CHECK((adjoint(CMatrix(a * b)) - adjoint(b) * adjoint(a)).norm() <= 1e-13);
}

TEST_CASE("trace: identity, nilpotent, cyclic property") {
  CHECK(trace(CMatrix::Identity(6, 6)) == Complex(6.0, 0.0));

  CMatrix nil = CMatrix::Zero(4, 4);
  nil(0, 1) = 2.0;
  nil(1, 3) = Complex(0.0, 1.0);
  nil(2, 3) = -5.0;
  CHECK(trace(nil) == Complex(0.0, 0.0));

  std::mt19937_64 rng(13);
  const CMatrix a = oracle::random_matrix(5, rng);
  const CMatrix b = oracle::random_matrix(5, rng);
  CHECK(std::abs(trace(CMatrix(a * b)) - trace(CMatrix(b * a))) <= 1e-12);
  CHECK(std::abs(trace_of_product(a, b) - trace(oracle::naive_matmul(a, b))) <= 1e-12);
  CHECK_THROWS_AS(trace(CMatrix::Zero(2, 3)), StructuralError);
}

TEST_CASE("expm_skew: zero generator, two-level rotation, unitarity") {
  CHECK((expm_skew(CMatrix(CMatrix::Zero(3, 3)), 7.3) - CMatrix::Identity(3, 3)).norm() == 0.0);

  CMatrix sx = CMatrix::Zero(2, 2);
  sx(0, 1) = sx(1, 0) = 1.0;
  const CMatrix w = expm_skew(sx, M_PI / 2);
  CHECK(std::abs(w(0, 0)) <= 1e-15);
  CHECK(std::abs(w(1, 1)) <= 1e-15);
  CHECK(std::abs(w(0, 1) - Complex(0.0, -1.0)) <= 1e-15);
  CHECK(std::abs(w(1, 0) - Complex(0.0, -1.0)) <= 1e-15);

  std::mt19937_64 rng(14);
  const CMatrix h = oracle::random_hermitian(6, rng);
  const CMatrix u = expm_skew(h, 3.7);
  CHECK(unitarity_residual(u) <= 1e-12);

  const CMatrix gen = Complex(0.0, -3.7) * h;
  const CMatrix pade = gen.exp();
  CHECK((u - pade).cwiseAbs().maxCoeff() <= 1e-12);
}

TEST_CASE("expm_skew is generic in the real scalar") {
  std::mt19937_64 rng(15);
  const CMatrix hd = oracle::random_hermitian(4, rng);
  const CMatrixT<float> hf = hd.cast<std::complex<float>>();
  const CMatrixT<float> uf = expm_skew<float>(hf, 0.5f, 1e-5f);
  CHECK(unitarity_residual(uf) <= 1e-5f);
  const CMatrix ud = expm_skew(hd, 0.5);
  CHECK((uf.cast<Complex>() - ud).cwiseAbs().maxCoeff() <= 1e-5);
}

TEST_CASE("expm_skew rejects non-Hermitian or non-finite generators") {
  CMatrix a = CMatrix::Zero(2, 2);
  a(0, 1) = 1.0;
  CHECK_THROWS_AS(expm_skew(a, 1.0), ContractError);
  CMatrix b = CMatrix::Identity(2, 2);
  b(1, 1) = std::numeric_limits<double>::quiet_NaN();
  CHECK_THROWS_AS(expm_skew(b, 1.0), ContractError);
}

TEST_CASE("fft_amplitude: constant signal peaks at zero frequency only") {
  const std::vector<Complex> x(64, Complex(2.0, 0.0));
  const auto s = fft_amplitude(x, 0.1);
  REQUIRE(s.freqs.size() == 64);
  const auto k = argmax(s.amps);
  CHECK(s.freqs[k] == doctest::Approx(0.0));
  CHECK(s.amps[k] == doctest::Approx(128.0));
  double rest = 0.0;
  for (std::size_t i = 0; i < s.amps.size(); ++i) {
    if (i != k) rest = std::max(rest, s.amps[i]);
  }
  CHECK(rest <= 1e-12);
}

TEST_CASE("fft_amplitude: a pure tone sits at its signed frequency") {
  const std::size_t n = 256;
  const double dt = 0.05;
  const double dw = frequency_resolution(n, dt);
  const double w0 = 17 * dw;
  std::vector<Complex> neg(n), pos(n);
  for (std::size_t m = 0; m < n; ++m) {
    neg[m] = std::polar(1.0, -w0 * static_cast<double>(m) * dt);
    pos[m] = std::polar(1.0, +w0 * static_cast<double>(m) * dt);
  }
  const auto sn = fft_amplitude(neg, dt);
  const auto sp = fft_amplitude(pos, dt);
  CHECK(sn.freqs[argmax(sn.amps)] == doctest::Approx(-w0));
  CHECK(sp.freqs[argmax(sp.amps)] == doctest::Approx(+w0));
  CHECK(std::is_sorted(sn.freqs.begin(), sn.freqs.end()));
}

TEST_CASE("fft_amplitude: two tones against the direct DFT, Parseval") {
  const std::size_t n = 200;  // not a power of two
  const double dt = 0.07;
  std::vector<Complex> x(n);
  for (std::size_t m = 0; m < n; ++m) {
    const double t = static_cast<double>(m) * dt;
    x[m] = 1.5 * std::polar(1.0, 3.1 * t) + Complex(0.0, 0.4) * std::polar(1.0, -7.9 * t);
  }
  const auto s = fft_amplitude(x, dt);
  const auto ref = oracle::naive_dft(x);

  // Map each reference bin onto the ascending axis and compare.
  const double dw = frequency_resolution(n, dt);
  double worst = 0.0, energy_t = 0.0, energy_f = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    const long signed_k = k < (n + 1) / 2 ? static_cast<long>(k) : static_cast<long>(k) - static_cast<long>(n);
    const double w = static_cast<double>(signed_k) * dw;
    const auto it = std::min_element(s.freqs.begin(), s.freqs.end(), [w](double a, double b) {
      return std::abs(a - w) < std::abs(b - w);
    });
    const auto i = static_cast<std::size_t>(it - s.freqs.begin());
    CHECK(*it == doctest::Approx(w).epsilon(1e-12));
    worst = std::max(worst, std::abs(s.amps[i] - std::abs(ref[k])));
    energy_f += s.amps[i] * s.amps[i];
    energy_t += std::norm(x[k]);
  }
  const double peak = *std::max_element(s.amps.begin(), s.amps.end());
  CHECK(worst <= 0.01 * peak);
  CHECK(worst <= 1e-9);
  CHECK(energy_f / static_cast<double>(n) == doctest::Approx(energy_t).epsilon(1e-12));
}

TEST_CASE("fft_amplitude_real keeps the non-negative half") {
  const std::size_t n = 128;
  const double dt = 0.1;
  std::vector<double> xr(n);
  std::vector<Complex> xc(n);
  for (std::size_t m = 0; m < n; ++m) {
    xr[m] = 1.0 + std::cos(2.0 * static_cast<double>(m) * dt);
    xc[m] = xr[m];
  }
  const auto r = fft_amplitude_real(xr, dt);
  const auto c = fft_amplitude(xc, dt);
  CHECK(r.freqs.front() == 0.0);
  CHECK(r.freqs.size() == n / 2 + 1);
  for (std::size_t k = 0; k < r.freqs.size(); ++k) {
    const auto it = std::find_if(c.freqs.begin(), c.freqs.end(),
                                 [&](double w) { return std::abs(w - r.freqs[k]) < 1e-9; });
    if (it == c.freqs.end()) continue;  // +Nyquist appears as -Nyquist on the two-sided axis
    CHECK(r.amps[k] == doctest::Approx(c.amps[static_cast<std::size_t>(it - c.freqs.begin())]));
  }
}

TEST_CASE("fft_amplitude rejects too-short input") {
  const std::vector<Complex> one(1, Complex(1.0, 0.0));
  CHECK_THROWS_AS(fft_amplitude(one, 0.1), StructuralError);
  CHECK_THROWS_AS(fft_amplitude(std::span<const Complex>{}, 0.1), StructuralError);
}

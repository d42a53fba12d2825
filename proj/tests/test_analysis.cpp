#include "doctest.h"
#include "support/oracles.hpp"
#include "unileak/analysis.hpp"
#include "unileak/controller.hpp"

using namespace unileak;

namespace {

SystemModel reference_instance() {
  return build_ladder({7, 1.0, 0.01, 0.0}, {3, 0.8, 0.01, 30.0}, DipoleRule{}, 6);
}

SystemModel register_only(int n_r) {
  return build_ladder({n_r, 1.0, 0.0, 0.0}, {1, 1.0, 0.0, 50.0}, DipoleRule{}, n_r);
}

Trajectory synthetic(const std::function<Complex(double)>& e, double dt, std::size_t n) {
  Trajectory traj;
  traj.dt = dt;
  for (std::size_t k = 0; k < n; ++k) {
    const double t = static_cast<double>(k) * dt;
    traj.append(t, e(t), 0.0, 0.0, 0.0);
  }
  traj.final_state.t = static_cast<double>(n) * dt;
  return traj;
}

const FeatureCheck& check_at(const std::vector<FeatureCheck>& checks, double nu) {
  return *std::min_element(checks.begin(), checks.end(), [nu](const auto& a, const auto& b) {
    return std::abs(a.transition.frequency - nu) < std::abs(b.transition.frequency - nu);
  });
}

}  // namespace

TEST_CASE("objective: maximal for the embedded target, phase blind, zero without a register block") {
  const auto m = reference_instance();
  const CMatrix o = fourier_target(6, m);
  const CMatrix p = projector(m);
  CMatrix u = o + (CMatrix::Identity(10, 10) - p);
  CHECK(objective(u, o, p) == doctest::Approx(36.0).epsilon(1e-14));
  CHECK(std::abs(std::sqrt(objective(u, o, p)) - 6.0) <= 1e-9);

  const CMatrix ph = std::polar(1.0, 1.234) * o + (CMatrix::Identity(10, 10) - p);
  CHECK(objective(ph, o, p) == doctest::Approx(36.0).epsilon(1e-14));

  CHECK(objective(CMatrix(CMatrix::Identity(10, 10) - p), o, p) == 0.0);
}

TEST_CASE("constraint: identity, one leaked column, seeded start") {
  const auto m = reference_instance();
  const CMatrix p = projector(m);
  CHECK(constraint(CMatrix::Identity(10, 10), p) == 6.0);

  CMatrix u = CMatrix::Identity(10, 10);
  u(0, 0) = 0.0;
  u(7, 7) = 0.0;
  u(7, 0) = 1.0;
  u(0, 7) = 1.0;
  CHECK(constraint(u, p) == 5.0);

  // Frozen from an independent dense-exponential evaluation.
  CHECK(6.0 - constraint(seed_initial(m, 1e-3), p) ==
        doctest::Approx(1.7999887500508294e-05).epsilon(1e-8));
}

TEST_CASE("fidelity and its logarithm") {
  CHECK(fidelity(36.0, 6) == 1.0);
  CHECK(fidelity(0.0, 6) == 0.0);
  CHECK(fidelity(9.0, 6) == 0.25);
  CHECK_FALSE(log10_infidelity(1.0).has_value());
  CHECK(*log10_infidelity(0.99) == doctest::Approx(-2.0));
}

TEST_CASE("Fourier target: two-level block") {
  const auto m = register_only(2);
  const CMatrix o = fourier_target(2, m);
  const double r = 1.0 / std::sqrt(2.0);
  CHECK(std::abs(o(0, 0) - r) <= 1e-15);
  CHECK(std::abs(o(0, 1) - r) <= 1e-15);
  CHECK(std::abs(o(1, 0) - r) <= 1e-15);
  CHECK(std::abs(o(1, 1) + r) <= 1e-15);
  CHECK(std::abs(o(2, 2)) == 0.0);
}

TEST_CASE("Fourier target: six-level entries are powers of the sixth root of unity") {
  const auto m = reference_instance();
  const CMatrix o = fourier_target(6, m);
  const Complex w = std::polar(1.0, 2.0 * M_PI / 6.0);
  const double r = 1.0 / std::sqrt(6.0);
  CHECK(std::abs(o(1, 1) - r * w) <= 1e-15);
  CHECK(std::abs(o(2, 4) - r * w * w) <= 1e-15);  // w^8 = w^2
  for (int k = 0; k < 6; ++k) {
    CHECK(std::abs(o(0, k) - r) <= 1e-15);
    CHECK(std::abs(o(k, 0) - r) <= 1e-15);
  }
  // Traceless: the Gauss sum for n = 6 vanishes.
  CHECK(std::abs(o.trace()) <= 1e-14);
}

TEST_CASE("Fourier target is unitary on the register") {
  for (int n = 2; n <= 8; ++n) {
    const auto m = register_only(n);
    const CMatrix o = fourier_target(n, m);
    CHECK((o.adjoint() * o - projector(m)).cwiseAbs().maxCoeff() <= 1e-14);
  }
}

TEST_CASE("spectrum report: zero field has nothing to judge") {
  const auto m = reference_instance();
  const auto rep = spectrum_report(synthetic([](double) { return Complex(0.0); }, 0.01, 4096), m);
  for (double a : rep.field_amp) CHECK(a == 0.0);
  for (double a : rep.intensity_amp) CHECK(a == 0.0);
  CHECK(rep.one_photon_dips.size() == 21);
  CHECK(rep.two_photon_peaks.size() == 15);
  CHECK(rep.evaluable_dips() == 0);
  CHECK(rep.evaluable_peaks() == 0);
}

TEST_CASE("spectrum report: a tone on a one-photon line fails that hole check") {
  const auto m = reference_instance();
  const double nu = transition_table(m).one_photon.front().frequency;
  const auto rep = spectrum_report(
      synthetic([nu](double t) { return std::polar(1.0, nu * t); }, 0.02, 1 << 14), m);
  const auto& c = check_at(rep.one_photon_dips, nu);
  CHECK(c.evaluable);
  CHECK_FALSE(c.pass);
  CHECK(c.ratio > 10.0);
}

TEST_CASE("spectrum report: the counter-rotating tone leaves +nu alone") {
  const auto m = reference_instance();
  const double nu = transition_table(m).one_photon.front().frequency;
  const auto rep = spectrum_report(
      synthetic([nu](double t) { return std::polar(1.0, -nu * t); }, 0.02, 1 << 14), m);
  const auto it = std::max_element(rep.field_amp.begin(), rep.field_amp.end());
  CHECK(rep.freqs[static_cast<std::size_t>(it - rep.field_amp.begin())] ==
        doctest::Approx(-nu).epsilon(1e-3));
}

TEST_CASE("spectrum report: a notched comb passes, two-photon beats show as peaks") {
  const auto m = reference_instance();
  const auto table = transition_table(m);
  const double dt = 0.02;
  const std::size_t n = 1 << 14;
  const double dw = frequency_resolution(n, dt);
  // Flat comb on every bin of the one-photon band except the three bins
  // around each line.
  std::vector<double> comb;
  for (long b = std::lround(22.0 / dw); b <= std::lround(33.0 / dw); ++b) {
    bool near = false;
    for (const auto& tr : table.one_photon) near |= std::abs(b - std::lround(tr.frequency / dw)) <= 1;
    if (!near) comb.push_back(static_cast<double>(b) * dw);
  }
  const auto field = [&comb](double t) {
    Complex s = 0.0;
    for (std::size_t k = 0; k < comb.size(); ++k) {
      // Quadratic phases keep the comb from piling up into a single spike.
      s += std::polar(1.0, comb[k] * t + 0.37 * static_cast<double>(k * k));
    }
    return s;
  };
  const auto rep = spectrum_report(synthetic(field, dt, n), m);
  CHECK(rep.evaluable_dips() == 21);
  CHECK(rep.passed_dips() == 21);

  // Intensity of a few strong carriers beating at register differences.
  const auto beats = [&table](double t) {
    Complex s = 3.0;
    for (std::size_t k = 0; k < table.two_photon.size(); ++k) {
      s += 0.2 * std::polar(1.0, table.two_photon[k].frequency * t);
    }
    return s;
  };
  const auto rep2 = spectrum_report(synthetic(beats, dt, n), m);
  CHECK(rep2.evaluable_peaks() == 15);
  CHECK(rep2.passed_peaks() == 15);
}

TEST_CASE("spectrum report: lines beyond the sampled band are not evaluable") {
  const auto m = reference_instance();
  // Nyquist = pi / dt = 15.7, below every one-photon line.
  const auto rep = spectrum_report(
      synthetic([](double t) { return std::polar(1.0, 2.0 * t); }, 0.2, 2048), m);
  CHECK(rep.evaluable_dips() == 0);
  CHECK(rep.evaluable_peaks() > 0);
}

TEST_CASE("snapshot export: identity, direct read-out, Fourier phases") {
  const auto m = reference_instance();
  const CMatrix p = projector(m);
  const auto id = snapshot_export(CMatrix::Identity(10, 10), p);
  REQUIRE(id.size() == 36);
  for (const auto& e : id) {
    CHECK(e.re == (e.row == e.col ? 1.0 : 0.0));
    CHECK(e.im == 0.0);
  }

  std::mt19937_64 rng(41);
  const CMatrix u = oracle::random_unitary(10, rng);
  for (const auto& e : snapshot_export(u, p)) {
    CHECK(e.re == u(e.row, e.col).real());
    CHECK(e.im == u(e.row, e.col).imag());
  }

  const CMatrix ft = std::polar(1.0, 0.7) * fourier_target(6, m);
  const auto phases = relative_phases(snapshot_export(ft, p));
  for (double ph : phases) {
    const double steps = ph / (2.0 * M_PI / 6.0);
    CHECK(std::abs(steps - std::round(steps)) <= 1e-12);
  }
}

TEST_CASE("trajectory validation") {
  Trajectory t = synthetic([](double) { return Complex(1.0); }, 0.1, 10);
  CHECK_NOTHROW(t.validate());
  t.j_vals.pop_back();
  CHECK_THROWS_AS(t.validate(), StructuralError);
  Trajectory u = synthetic([](double) { return Complex(1.0); }, 0.1, 10);
  u.times[4] += 0.05;
  CHECK_THROWS_AS(u.validate(), StructuralError);
}

#include "doctest.h"
#include "support/oracles.hpp"
#include "unileak/analysis.hpp"
#include "unileak/dynamics.hpp"

using namespace unileak;

namespace {

SystemModel two_level(double e0, double e1) {
  CMatrix mu = CMatrix::Zero(2, 2);
  mu(0, 1) = 1.0;
  return SystemModel({e0, e1}, {Manifold::ground, Manifold::excited}, mu, {0});
}

Complex smooth_field(double t) {
  return 0.8 * std::exp(-(t - 1.0) * (t - 1.0)) * std::polar(1.0, 9.0 * t + 0.3 * t * t);
}

}  // namespace

TEST_CASE("mu_tilde: no phase at t = 0") {
  std::mt19937_64 rng(21);
  const auto m = oracle::random_model(3, 2, 2, rng);
  CHECK((mu_tilde(m, 0.0) - m.dipole()).norm() == 0.0);
}

TEST_CASE("mu_tilde: two-level phase runs as exp(-i w0 t)") {
  const double w0 = 7.25;
  const auto m = two_level(0.0, w0);
  for (double t : {0.1, 1.0, 13.7}) {
    CHECK(std::abs(mu_tilde(m, t)(0, 1) - std::polar(1.0, -w0 * t)) <= 1e-13);
  }
}

TEST_CASE("mu_tilde against exp(i H0 t) mu exp(-i H0 t)") {
  std::mt19937_64 rng(22);
  std::uniform_real_distribution<double> tdist(-20.0, 20.0);
  for (int trial = 0; trial < 5; ++trial) {
    const auto m = oracle::random_model(3, 3, 2, rng);
    const double t = tdist(rng);
    CHECK((mu_tilde(m, t) - oracle::rotated_dipole(m, t)).cwiseAbs().maxCoeff() <= 1e-12);
  }
}

TEST_CASE("hamiltonian_from: zero field, two-level form, Hermiticity") {
  const auto m = two_level(0.0, 0.0);
  CHECK(hamiltonian(m, 0.0, 3.0).norm() == 0.0);

  const double eps = 0.37;
  const CMatrix h = hamiltonian(m, eps, 2.0);
  CHECK(std::abs(h(0, 1) + eps) <= 1e-15);
  CHECK(std::abs(h(1, 0) + eps) <= 1e-15);
  CHECK(std::abs(h(0, 0)) == 0.0);
  CHECK(std::abs(h(1, 1)) == 0.0);

  std::mt19937_64 rng(23);
  for (int trial = 0; trial < 5; ++trial) {
    const auto r = oracle::random_model(4, 2, 3, rng);
    const CMatrix hr = hamiltonian(r, oracle::random_complex(rng), 5.0 * trial);
    CHECK(hermiticity_defect(hr) <= 1e-12);
  }
}

TEST_CASE("step: zero field leaves U unchanged") {
  std::mt19937_64 rng(24);
  const auto m = oracle::random_model(3, 2, 2, rng);
  const CMatrix u0 = oracle::random_unitary(5, rng);
  const auto next = step({u0, 1.5}, m, 0.0, 0.01);
  CHECK((next.u - u0).norm() <= 1e-15);
  CHECK(next.t == doctest::Approx(1.51));
}

TEST_CASE("step: two-level Rabi oscillation |U01| = |sin(eps t)|") {
  const auto m = two_level(0.0, 0.0);
  const double eps = 0.5;
  const double dt = 1e-3;
  for (double target : {M_PI / 4, M_PI / 2}) {
    const auto n = static_cast<long>(std::llround(target / eps / dt));
    Propagator p{CMatrix::Identity(2, 2), 0.0};
    for (long k = 0; k < n; ++k) p = step(p, m, eps, dt);
    CHECK(std::abs(std::abs(p.u(0, 1)) - std::abs(std::sin(eps * p.t))) <= 1e-8);
  }
}

TEST_CASE("step: production step size against a 100x refined integration") {
  std::mt19937_64 rng(25);
  const auto m = oracle::random_model(2, 2, 2, rng);
  const double t_final = 2.0;
  const double dt = 2.5e-4;
  const auto n = static_cast<long>(std::llround(t_final / dt));
  Propagator p{CMatrix::Identity(4, 4), 0.0};
  for (long k = 0; k < n; ++k) p = step(p, m, smooth_field(p.t + 0.5 * dt), dt);
  const CMatrix ref = oracle::fine_propagate(m, smooth_field, t_final, n * 100);
  CHECK((p.u - ref).norm() <= 1e-6);
  CHECK(unitarity_residual(p.u) <= 1e-10);
}

TEST_CASE("step size guard and default") {
  const auto m = two_level(0.0, 10.0);
  CHECK_THROWS_AS(check_step_size(m, 0.0), ConfigError);
  CHECK_THROWS_AS(check_step_size(m, 0.06), ConfigError);
  CHECK_NOTHROW(check_step_size(m, 0.05));
  CHECK(default_dt(m, 1000.0) == doctest::Approx(0.005));
  CHECK(default_dt(m, 10.0) == doctest::Approx(10.0 / 65536.0));
}

TEST_CASE("replay: zero field from the identity keeps J and C constant") {
  const auto m = build_ladder({3, 1.0, 0.0, 0.0}, {2, 1.0, 0.0, 10.0}, {}, 2);
  const CMatrix target = identity_target(m);
  std::vector<FieldSample> field;
  for (int k = 0; k < 50; ++k) field.push_back({0.01 * k, 0.0});
  const auto traj = replay(m, field, CMatrix::Identity(5, 5), target);
  REQUIRE(traj.size() == 50);
  for (double j : traj.j_series()) CHECK(j == doctest::Approx(4.0).epsilon(1e-15));
  for (double c : traj.c_series()) CHECK(c == doctest::Approx(2.0).epsilon(1e-15));
  CHECK(traj.final_state.t == doctest::Approx(0.5));
}

TEST_CASE("replay matches stepping by hand") {
  std::mt19937_64 rng(26);
  const auto m = oracle::random_model(2, 2, 2, rng);
  const double dt = 0.01;
  std::vector<FieldSample> field;
  Propagator p{CMatrix::Identity(4, 4), 0.0};
  for (int k = 0; k < 200; ++k) {
    const Complex e = smooth_field(k * dt);
    field.push_back({k * dt, e});
    p = step(p, m, e, dt);
  }
  const auto traj = replay(m, field, CMatrix::Identity(4, 4), identity_target(m));
  CHECK((traj.final_u - p.u).norm() <= 1e-13);
}

TEST_CASE("uniform_spacing rejects malformed grids") {
  CHECK(uniform_spacing(std::vector<FieldSample>{{0.0, 0.0}, {0.5, 0.0}, {1.0, 0.0}}) ==
        doctest::Approx(0.5));
  CHECK_THROWS_AS(uniform_spacing(std::vector<FieldSample>{{0.1, 0.0}, {0.2, 0.0}}), InputError);
  CHECK_THROWS_AS(uniform_spacing(std::vector<FieldSample>{{0.0, 0.0}, {0.1, 0.0}, {0.3, 0.0}}),
                  InputError);
  CHECK_THROWS_AS(uniform_spacing(std::vector<FieldSample>{{0.0, 0.0}}), InputError);
}

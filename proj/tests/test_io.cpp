#include <filesystem>
#include <fstream>

#include "doctest.h"
#include "support/oracles.hpp"
#include "unileak/io.hpp"

using namespace unileak;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / "unileak_test_io";
  fs::create_directories(dir);
  return dir / name;
}

Trajectory sample_trajectory(std::size_t n) {
  std::mt19937_64 rng(51);
  std::uniform_real_distribution<double> d(-1.0, 1.0);
  Trajectory traj;
  traj.dt = 0.0123;
  for (std::size_t k = 0; k < n; ++k) {
    traj.append(static_cast<double>(k) * traj.dt, Complex(d(rng), d(rng)), 30.0 + d(rng),
                6.0 - 1e-3 * d(rng), 1e-12 * (1.0 + d(rng)));
  }
  traj.final_state = {static_cast<double>(n) * traj.dt, 35.5, 5.999, 2e-12};
  return traj;
}

void write_file(const fs::path& p, const std::string& text) {
  std::ofstream(p) << text;
}

}  // namespace

TEST_CASE("real numbers round-trip exactly through text") {
  for (double v : {0.0, -1.5, M_PI, 1e-300, 6.02214076e23, 0.1 + 0.2}) {
    CHECK(parse_real(format_real(v), "v") == v);
  }
  CHECK_THROWS_AS(parse_real("1.5x", "cell"), InputError);
  CHECK_THROWS_AS(parse_real("", "cell"), InputError);
}

TEST_CASE("field CSV round trip") {
  const auto traj = sample_trajectory(100);
  const auto path = scratch("field.csv").string();
  write_field_csv(path, traj);
  const auto back = read_field_csv(path);
  REQUIRE(back.size() == traj.size());
  for (std::size_t k = 0; k < back.size(); ++k) {
    CHECK(back[k].t == traj.times[k]);
    CHECK(back[k].e == traj.fields[k]);
  }
}

TEST_CASE("trajectory CSV round trip") {
  const auto traj = sample_trajectory(64);
  const auto path = scratch("trajectory.csv").string();
  write_trajectory_csv(path, traj);
  const auto back = read_trajectory_csv(path);
  REQUIRE(back.size() == traj.size());
  CHECK(back.dt == doctest::Approx(traj.dt).epsilon(1e-12));
  CHECK(back.fields == traj.fields);
  CHECK(back.j_vals == traj.j_vals);
  CHECK(back.c_vals == traj.c_vals);
  CHECK(back.unit_residuals == traj.unit_residuals);
}

TEST_CASE("CSV readers reject malformed input") {
  const auto p = scratch("bad.csv");
  write_file(p, "time,re,im\n0,1,2\n");
  CHECK_THROWS_AS(read_field_csv(p.string()), InputError);

  write_file(p, "t,e_re,e_im,J,C,unit_residual\n0,1,0,1,1,0\n0.1,1,0,1\n");
  CHECK_THROWS_AS(read_trajectory_csv(p.string()), InputError);

  write_file(p, "t,e_re,e_im,J,C,unit_residual\n0,1,0,1,1,0\n");
  CHECK_THROWS_AS(read_trajectory_csv(p.string()), InputError);

  write_file(p, "t,e_re,e_im\n0,1,0\n0.1,one,0\n");
  CHECK_THROWS_AS(read_field_csv(p.string()), InputError);

  CHECK_THROWS_AS(read_field_csv(scratch("missing.csv").string()), InputError);
}

TEST_CASE("JSON exports") {
  ControlParams p;
  p.dt = 0.001;
  p.t_final = 10.0;
  p.gain = Envelope::parse("sin2:2");
  const auto j = to_json(p);
  CHECK(j["e_max"] == 1.0);
  CHECK(j["gain"] == "sin2:2");
  CHECK(j["lock"] == "discrete");
  CHECK(j["seed_eps"] == kDefaultSeedEps);

  const auto path = scratch("x.json").string();
  write_text(path, j.dump());
  CHECK(read_json_file(path) == j);
  write_file(path, "{oops");
  CHECK_THROWS_AS(read_json_file(path), InputError);
}

TEST_CASE("file digest is content addressed") {
  const auto a = scratch("a.txt"), b = scratch("b.txt");
  write_file(a, "levels");
  write_file(b, "levels");
  CHECK(file_digest(a.string()) == file_digest(b.string()));
  CHECK(file_digest(a.string()).size() == 16);
  write_file(b, "levelz");
  CHECK(file_digest(a.string()) != file_digest(b.string()));
}

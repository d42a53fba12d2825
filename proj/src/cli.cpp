#include "unileak/cli.hpp"

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <future>
#include <ostream>
#include <sstream>

#include "unileak/io.hpp"
#include "unileak/svg.hpp"

namespace unileak::cli {

namespace fs = std::filesystem;
using nlohmann::json;

std::string resolve_out_dir(const std::string& flag) {
  if (!flag.empty()) return flag;
  if (const char* env = std::getenv("UNILEAK_OUT"); env != nullptr && *env != '\0') return env;
  return "unileak_out";
}

SystemModel load_run_model(const RunOptions& opts) {
  if (opts.config_path.empty()) throw ConfigError("--config: required");
  SystemModel model = load_model_file(opts.config_path);
  if (opts.register_size) {
    const int k = *opts.register_size;
    const auto ground = model.levels_in(Manifold::ground);
    if (k < 1 || k > static_cast<int>(ground.size())) {
      throw ConfigError("--register-size: " + std::to_string(k) + " does not fit " +
                        std::to_string(ground.size()) + " ground levels");
    }
    model = model.with_register(std::vector<int>(ground.begin(), ground.begin() + k));
  }
  return model;
}

namespace {

CMatrix load_target_file(const std::string& path, const SystemModel& model) {
  const json doc = read_json_file(path);
  if (!doc.is_object() || !doc.contains("matrix") || !doc["matrix"].is_array()) {
    throw ConfigError("target file " + path + ": expected {\"matrix\": [[[re, im], ...], ...]}");
  }
  const auto& rows = doc["matrix"];
  const int n_r = model.register_size();
  if (static_cast<int>(rows.size()) != n_r) {
    throw ConfigError("target file " + path + ": matrix must be " + std::to_string(n_r) + "x" +
                      std::to_string(n_r) + " (register size)");
  }
  const auto& reg = model.register_levels();
  CMatrix o = CMatrix::Zero(model.n_levels(), model.n_levels());
  for (int a = 0; a < n_r; ++a) {
    const auto& row = rows[static_cast<std::size_t>(a)];
    if (!row.is_array() || static_cast<int>(row.size()) != n_r) {
      throw ConfigError("target file " + path + ": row " + std::to_string(a) + " has wrong length");
    }
    for (int b = 0; b < n_r; ++b) {
      const auto& v = row[static_cast<std::size_t>(b)];
      Complex z;
      if (v.is_number()) {
        z = v.get<double>();
      } else if (v.is_array() && v.size() == 2 && v[0].is_number() && v[1].is_number()) {
        z = {v[0].get<double>(), v[1].get<double>()};
      } else {
        throw ConfigError("target file " + path + ": entry [" + std::to_string(a) + "][" +
                          std::to_string(b) + "] must be a number or [re, im]");
      }
      o(reg[static_cast<std::size_t>(a)], reg[static_cast<std::size_t>(b)]) = z;
    }
  }
  const CMatrix p_r = projector(model);
  if ((o.adjoint() * o - p_r).cwiseAbs().maxCoeff() > 1e-12) {
    throw ConfigError("target file " + path + ": matrix is not unitary to 1e-12");
  }
  return o;
}

}  // namespace

CMatrix resolve_target(const std::string& spec, const SystemModel& model) {
  if (spec == "ft") return fourier_target(model.register_size(), model);
  if (spec == "identity") return identity_target(model);
  if (spec.rfind("file:", 0) == 0) return load_target_file(spec.substr(5), model);
  throw ConfigError("--target: expected ft, identity or file:PATH, got \"" + spec + "\"");
}

ControlParams resolve_params(const RunOptions& opts, const SystemModel& model) {
  const double t_final = opts.t_final.value_or(kDefaultTFinal);
  if (!(t_final > 0.0) || !std::isfinite(t_final)) throw ConfigError("--t-final: must be > 0");
  ControlParams p = default_params(model, t_final);
  if (opts.dt) p.dt = *opts.dt;
  if (opts.e_max) p.e_max = *opts.e_max;
  if (opts.gain) p.gain = Envelope::parse(*opts.gain);
  if (opts.seed_eps) p.seed_eps = *opts.seed_eps;
  if (opts.g_floor) p.g_floor = *opts.g_floor;
  if (opts.lock) p.lock = parse_phase_lock(*opts.lock);
  p.validate();
  check_step_size(model, p.dt);
  return p;
}

std::vector<std::pair<double, std::optional<double>>> threshold_times(const Trajectory& traj,
                                                                      int n_r) {
  std::vector<std::pair<double, std::optional<double>>> out;
  for (double level : {0.5, 0.9, 0.99}) {
    std::optional<double> when;
    for (std::size_t k = 0; k < traj.size() && !when; ++k) {
      if (fidelity(traj.j_vals[k], n_r) >= level) when = traj.times[k];
    }
    if (!when && fidelity(traj.final_state.j, n_r) >= level) when = traj.final_state.t;
    out.emplace_back(level, when);
  }
  return out;
}

namespace {

json optional_json(std::optional<double> v) { return v ? json(*v) : json(nullptr); }

json state_json(const StateRecord& s, int n_r) {
  const double f = fidelity(s.j, n_r);
  return {{"t", s.t},
          {"J", s.j},
          {"sqrt_J", std::sqrt(std::max(0.0, s.j))},
          {"C", s.c},
          {"F", f},
          {"log10_1mF", optional_json(log10_infidelity(f))},
          {"unit_residual", s.unit_residual}};
}

// Largest single-step decrease of J, >= 0.
double max_objective_drop(const Trajectory& traj) {
  const auto j = traj.j_series();
  double drop = 0.0;
  for (std::size_t k = 1; k < j.size(); ++k) drop = std::max(drop, j[k - 1] - j[k]);
  return drop;
}

std::string join(const fs::path& dir, const char* name) { return (dir / name).string(); }

}  // namespace

RunReport cmd_synth(const RunOptions& opts, std::ostream& log) {
  const auto started = std::chrono::steady_clock::now();
  const SystemModel model = load_run_model(opts);
  const CMatrix target = resolve_target(opts.target, model);
  const ControlParams params = resolve_params(opts, model);
  const int n_r = model.register_size();

  const double gap = spectral_gap(transition_table(model));
  if (gap < kMinSpectralGap) {
    log << "warning: one- and two-photon frequencies are only " << gap
        << " apart; spectral checks may be ambiguous\n";
  }

  const fs::path out_dir = resolve_out_dir(opts.out_dir);
  fs::create_directories(out_dir);

  log << "synth: " << model.n_levels() << " levels, register " << n_r << ", target "
      << opts.target << ", t_final " << params.t_final << ", dt " << params.dt << ", steps "
      << step_count(params.t_final, params.dt) << '\n';

  SynthesisOptions sopts;
  sopts.snapshots = opts.snapshots;
  const Trajectory traj = synthesize(model, target, params, sopts);
  const CMatrix p_r = projector(model);

  RunReport report;
  auto emit = [&](const char* name) {
    report.artifacts.push_back(join(out_dir, name));
    return report.artifacts.back();
  };
  write_field_csv(emit("field.csv"), traj);
  write_trajectory_csv(emit("trajectory.csv"), traj);
  write_text(emit("field_objective.svg"), svg::field_and_objective(traj, p_r));

  const SpectrumReport spectrum = spectrum_report(traj, model, opts.thresholds);
  write_text(emit("spectrum.json"), to_json(spectrum).dump(2) + "\n");
  write_text(emit("spectrum.svg"), svg::spectra(spectrum));

  if (!traj.snapshots.empty()) {
    write_text(emit("snapshots.json"), to_json(traj.snapshots, p_r).dump(2) + "\n");
    write_text(emit("compass.svg"), svg::compass(traj.snapshots, p_r));
  }

  json thresholds = json::array();
  for (const auto& [level, when] : threshold_times(traj, n_r)) {
    thresholds.push_back({{"F", level}, {"t", optional_json(when)}});
  }

  const double wall =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
  const std::string report_path = join(out_dir, "report.json");
  report.artifacts.push_back(report_path);
  report.body = {{"command", "synth"},
                 {"config", opts.config_path},
                 {"config_digest", file_digest(opts.config_path)},
                 {"n_levels", model.n_levels()},
                 {"register", model.register_levels()},
                 {"N_r", n_r},
                 {"target", opts.target},
                 {"params", to_json(params)},
                 {"steps", traj.size()},
                 {"initial", state_json({0.0, traj.j_vals.front(), traj.c_vals.front(),
                                         traj.unit_residuals.front()},
                                        n_r)},
                 {"final", state_json(traj.final_state, n_r)},
                 {"max_constraint_drift", traj.max_constraint_drift()},
                 {"max_unit_residual", traj.max_unit_residual()},
                 {"max_objective_drop", max_objective_drop(traj)},
                 {"fidelity_thresholds", thresholds},
                 {"spectrum", to_json(spectrum)["summary"]},
                 {"wall_time_s", wall},
                 {"artifacts", report.artifacts}};
  write_text(report_path, report.body.dump(2) + "\n");

  const double f = fidelity(traj.final_state.j, n_r);
  log << "final: sqrt(J) = " << std::sqrt(traj.final_state.j) << ", F = " << f;
  if (auto l = log10_infidelity(f)) log << ", log10(1-F) = " << *l;
  log << ", C drift = " << traj.max_constraint_drift()
      << ", unitarity = " << traj.max_unit_residual() << '\n';
  log << "spectrum: dips " << spectrum.passed_dips() << "/" << spectrum.evaluable_dips()
      << ", peaks " << spectrum.passed_peaks() << "/" << spectrum.evaluable_peaks() << '\n';
  log << "wrote " << out_dir.string() << '\n';
  return report;
}

RunReport cmd_replay(const ReplayOptions& opts, std::ostream& log) {
  const auto started = std::chrono::steady_clock::now();
  const std::vector<FieldSample> field = read_field_csv(opts.field_csv);
  const double dt = uniform_spacing(field);
  if (opts.run.dt && std::abs(*opts.run.dt - dt) > 1e-12 * dt) {
    throw InputError("field: grid spacing " + format_real(dt) + " does not match --dt " +
                     format_real(*opts.run.dt));
  }

  // Settings recorded by the synthesis run next to the field file, if any.
  const fs::path sibling = fs::path(opts.field_csv).parent_path() / "report.json";
  std::optional<json> synth_report;
  if (fs::exists(sibling)) synth_report = read_json_file(sibling.string());

  RunOptions run = opts.run;
  if (synth_report) {
    if (!run.seed_eps && synth_report->contains("params")) {
      run.seed_eps = (*synth_report)["params"].value("seed_eps", kDefaultSeedEps);
    }
    if (!run.register_size && synth_report->contains("N_r")) {
      run.register_size = (*synth_report)["N_r"].get<int>();
    }
  }
  const SystemModel model = load_run_model(run);
  const CMatrix target = resolve_target(run.target, model);
  const double seed_eps = run.seed_eps.value_or(kDefaultSeedEps);
  if (!(seed_eps >= 0.0 && seed_eps <= 0.1)) throw ConfigError("--seed-eps: must lie in [0, 0.1]");
  const CMatrix u0 = opts.pure ? CMatrix::Identity(model.n_levels(), model.n_levels()).eval()
                               : seed_initial(model, seed_eps);
  const Trajectory traj = replay(model, field, u0, target);
  const int n_r = model.register_size();

  const fs::path out_dir = resolve_out_dir(run.out_dir);
  fs::create_directories(out_dir);
  RunReport report;
  report.artifacts.push_back((out_dir / "replay_trajectory.csv").string());
  write_trajectory_csv(report.artifacts.back(), traj);

  const double f = fidelity(traj.final_state.j, n_r);
  const double wall =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
  const std::string report_path = (out_dir / "replay_report.json").string();
  report.artifacts.push_back(report_path);
  report.body = {{"command", "replay"},
                 {"field", opts.field_csv},
                 {"config", run.config_path},
                 {"config_digest", file_digest(run.config_path)},
                 {"N_r", n_r},
                 {"target", run.target},
                 {"initial_condition", opts.pure ? "identity" : "seeded"},
                 {"seed_eps", opts.pure ? 0.0 : seed_eps},
                 {"dt", dt},
                 {"steps", traj.size()},
                 {"final", state_json(traj.final_state, n_r)},
                 {"max_constraint_drift", traj.max_constraint_drift()},
                 {"max_unit_residual", traj.max_unit_residual()},
                 {"wall_time_s", wall}};
  if (synth_report && synth_report->contains("final")) {
    const double f_synth = (*synth_report)["final"]["F"].get<double>();
    report.body["synth_F"] = f_synth;
    report.body["delta_F"] = f - f_synth;
  }
  report.body["artifacts"] = report.artifacts;
  write_text(report_path, report.body.dump(2) + "\n");

  log << "replay (" << (opts.pure ? "identity" : "seeded") << "): F = " << f;
  if (report.body.contains("delta_F")) log << ", delta F vs synth = " << report.body["delta_F"];
  log << '\n';
  return report;
}

SpectrumReport cmd_analyze(const AnalyzeOptions& opts, std::ostream& log) {
  RunOptions run;
  run.config_path = opts.config_path;
  run.register_size = opts.register_size;
  const SystemModel model = load_run_model(run);
  const Trajectory traj = read_trajectory_csv(opts.trajectory_csv);
  const SpectrumReport report = spectrum_report(traj, model, opts.thresholds);

  const fs::path out_dir = resolve_out_dir(opts.out_dir);
  fs::create_directories(out_dir);
  write_text((out_dir / "spectrum.json").string(), to_json(report).dump(2) + "\n");
  write_text((out_dir / "spectrum.svg").string(), svg::spectra(report));

  auto row = [&](const FeatureCheck& c) {
    log << "  " << (c.kind == FeatureKind::one_photon_dip ? "dip " : "peak") << "  "
        << c.transition.lower << "-" << c.transition.upper << "  w = " << c.transition.frequency
        << "  ";
    if (!c.evaluable) {
      log << "unevaluable\n";
    } else {
      log << "ratio = " << c.ratio << (c.pass ? "  pass\n" : "  FAIL\n");
    }
  };
  log << "one-photon holes (ratio <= " << opts.thresholds.dip_ratio << "):\n";
  for (const auto& c : report.one_photon_dips) row(c);
  log << "two-photon peaks (ratio >= " << opts.thresholds.peak_ratio << "):\n";
  for (const auto& c : report.two_photon_peaks) row(c);
  log << "dips " << report.passed_dips() << "/" << report.evaluable_dips() << ", peaks "
      << report.passed_peaks() << "/" << report.evaluable_peaks() << '\n';
  return report;
}

Sweep parse_sweep(const std::string& text) {
  const auto eq = text.find('=');
  const auto bad = [&] {
    return ConfigError("--sweep: expected KEY=a:b:n, got \"" + text + "\"");
  };
  if (eq == std::string::npos) throw bad();
  Sweep sweep;
  sweep.key = text.substr(0, eq);
  static const char* keys[] = {"t-final", "dt", "e-max", "gain", "seed-eps"};
  if (std::find(std::begin(keys), std::end(keys), sweep.key) == std::end(keys)) {
    throw ConfigError("--sweep: unknown key \"" + sweep.key +
                      "\" (t-final, dt, e-max, gain, seed-eps)");
  }
  std::vector<std::string> parts;
  std::stringstream ss(text.substr(eq + 1));
  for (std::string item; std::getline(ss, item, ':');) parts.push_back(item);
  if (parts.size() != 3) throw bad();
  double a = 0.0, b = 0.0;
  int n = 0;
  try {
    a = std::stod(parts[0]);
    b = std::stod(parts[1]);
    n = std::stoi(parts[2]);
  } catch (const std::exception&) {
    throw bad();
  }
  if (n < 1) throw ConfigError("--sweep: point count must be >= 1");
  for (int i = 0; i < n; ++i) {
    sweep.values.push_back(n == 1 ? a : a + (b - a) * i / (n - 1));
  }
  return sweep;
}

json cmd_sweep(const RunOptions& opts, const Sweep& sweep, std::ostream& log) {
  const fs::path root = resolve_out_dir(opts.out_dir);
  std::vector<RunOptions> points;
  for (double v : sweep.values) {
    RunOptions p = opts;
    if (sweep.key == "t-final") p.t_final = v;
    if (sweep.key == "dt") p.dt = v;
    if (sweep.key == "e-max") p.e_max = v;
    if (sweep.key == "gain") p.gain = format_real(v);
    if (sweep.key == "seed-eps") p.seed_eps = v;
    p.out_dir = (root / (sweep.key + "_" + format_real(v))).string();
    points.push_back(std::move(p));
  }
  // Each point logs into its own buffer; output is printed in sweep order.
  std::vector<std::future<std::pair<json, std::string>>> jobs;
  for (const auto& p : points) {
    jobs.push_back(std::async(std::launch::async, [p] {
      std::ostringstream buf;
      json row = {{"out_dir", p.out_dir}};
      try {
        row["report"] = cmd_synth(p, buf).body;
        row["status"] = "ok";
      } catch (const std::exception& e) {
        row["status"] = "error";
        row["error"] = e.what();
        row["exit_code"] = exit_code_for(e);
      }
      return std::make_pair(row, buf.str());
    }));
  }
  json summary = {{"key", sweep.key}, {"values", sweep.values}, {"points", json::array()}};
  for (std::size_t i = 0; i < jobs.size(); ++i) {
    auto [row, text] = jobs[i].get();
    log << "[" << sweep.key << " = " << sweep.values[i] << "]\n" << text;
    summary["points"].push_back(row);
  }
  fs::create_directories(root);
  write_text((root / "sweep.json").string(), summary.dump(2) + "\n");
  return summary;
}

int exit_code_for(const std::exception& e) {
  if (dynamic_cast<const NumericalError*>(&e) != nullptr) return kNumericalFailure;
  if (dynamic_cast<const Error*>(&e) != nullptr) return kInputError;
  if (dynamic_cast<const fs::filesystem_error*>(&e) != nullptr) return kInputError;
  return kInternal;
}

}  // namespace unileak::cli

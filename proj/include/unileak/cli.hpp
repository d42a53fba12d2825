#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "unileak/analysis.hpp"
#include "unileak/controller.hpp"

namespace unileak::cli {

enum ExitCode : int { kOk = 0, kInternal = 1, kInputError = 2, kNumericalFailure = 3 };

/// Flag values shared by the commands; unset optionals fall back to defaults.
struct RunOptions {
  std::string config_path;
  std::string target = "ft";  // ft | identity | file:PATH
  std::optional<double> t_final;
  std::optional<double> dt;
  std::optional<double> e_max;
  std::optional<std::string> gain;
  std::optional<double> seed_eps;
  std::optional<double> g_floor;
  std::optional<int> register_size;
  std::optional<std::string> lock;
  std::string out_dir;
  int snapshots = 0;
  SpectrumThresholds thresholds;
};

inline constexpr double kDefaultTFinal = 2000.0;

/// Output root: explicit flag, else $UNILEAK_OUT, else ./unileak_out.
std::string resolve_out_dir(const std::string& flag);

SystemModel load_run_model(const RunOptions& opts);
CMatrix resolve_target(const std::string& spec, const SystemModel& model);
ControlParams resolve_params(const RunOptions& opts, const SystemModel& model);

/// Times at which F first reaches each threshold; empty when never.
std::vector<std::pair<double, std::optional<double>>> threshold_times(const Trajectory& traj,
                                                                      int n_r);

/// Run summary written as report.json.
struct RunReport {
  nlohmann::json body;
  std::vector<std::string> artifacts;
};

/// Closed-loop synthesis plus all artifacts (CSV, JSON, SVG) in opts.out_dir.
RunReport cmd_synth(const RunOptions& opts, std::ostream& log);

struct ReplayOptions {
  std::string field_csv;
  RunOptions run;   // config, target, seed_eps, dt check, out dir
  bool pure = false;
};

/// Open-loop replay of a field CSV from I (--pure) or from the seeded start.
RunReport cmd_replay(const ReplayOptions& opts, std::ostream& log);

struct AnalyzeOptions {
  std::string trajectory_csv;
  std::string config_path;
  std::optional<int> register_size;
  std::string out_dir;
  SpectrumThresholds thresholds;
};

SpectrumReport cmd_analyze(const AnalyzeOptions& opts, std::ostream& log);

/// Parsed `KEY=a:b:n` sweep: n points spaced linearly from a to b.
struct Sweep {
  std::string key;
  std::vector<double> values;
};

Sweep parse_sweep(const std::string& text);

/// Runs every sweep point concurrently, each in out_dir/<key>_<value>.
nlohmann::json cmd_sweep(const RunOptions& opts, const Sweep& sweep, std::ostream& log);

/// Maps an exception to the documented exit code.
int exit_code_for(const std::exception& e);

}  // namespace unileak::cli

// unileak: leakage-free gate synthesis by local control.
//
//   unileak synth   --config na2_like.json --target ft --t-final 2000 --out run
//   unileak replay  run/field.csv --config na2_like.json --pure --out run/pure
//   unileak analyze run/trajectory.csv --config na2_like.json --out run/spectrum

#include <iostream>

#include "CLI11.hpp"
#include "unileak/cli.hpp"

namespace {

using namespace unileak;

void add_run_flags(CLI::App& cmd, cli::RunOptions& o) {
  cmd.add_option("--config", o.config_path, "Model config (JSON)")->required();
  cmd.add_option("--target", o.target, "ft | identity | file:PATH");
  cmd.add_option("--register-size", o.register_size, "Use the lowest K ground levels as register");
  cmd.add_option("--dt", o.dt, "Time step (scaled units)");
  cmd.add_option("--seed-eps", o.seed_eps, "Seed rotation angle");
  cmd.add_option("--out", o.out_dir, "Output directory (default $UNILEAK_OUT or ./unileak_out)");
}

void add_spectrum_flags(CLI::App& cmd, SpectrumThresholds& t) {
  cmd.add_option("--dip-ratio", t.dip_ratio, "One-photon hole passes when ratio <= this");
  cmd.add_option("--peak-ratio", t.peak_ratio, "Two-photon peak passes when ratio >= this");
  cmd.add_option("--window", t.window, "Comparison band half-width (default 10 bins)");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Leakage-free unitary synthesis by local control"};
  app.require_subcommand(1);

  cli::RunOptions synth;
  std::string sweep_text;
  auto* synth_cmd = app.add_subcommand("synth", "Closed-loop field synthesis");
  add_run_flags(*synth_cmd, synth);
  add_spectrum_flags(*synth_cmd, synth.thresholds);
  synth_cmd->add_option("--t-final", synth.t_final, "Final time");
  synth_cmd->add_option("--e-max", synth.e_max, "Field saturation |E| <= e_max");
  synth_cmd->add_option("--gain", synth.gain, "Envelope: REAL or sin2:REAL");
  synth_cmd->add_option("--g-floor", synth.g_floor, "Guard threshold on |g|");
  synth_cmd->add_option("--lock", synth.lock, "Phase lock: discrete (default) or continuous");
  synth_cmd->add_option("--snapshots", synth.snapshots, "Number of U snapshots to store");
  synth_cmd->add_option("--sweep", sweep_text, "KEY=a:b:n, run n points concurrently");

  cli::ReplayOptions replay;
  auto* replay_cmd = app.add_subcommand("replay", "Open-loop replay of a stored field");
  replay_cmd->add_option("field", replay.field_csv, "Field CSV (t,e_re,e_im)")->required();
  add_run_flags(*replay_cmd, replay.run);
  replay_cmd->add_flag("--pure", replay.pure, "Start from the exact identity");

  cli::AnalyzeOptions analyze;
  auto* analyze_cmd = app.add_subcommand("analyze", "Spectral diagnostics of a trajectory");
  analyze_cmd->add_option("trajectory", analyze.trajectory_csv, "Trajectory CSV")->required();
  analyze_cmd->add_option("--config", analyze.config_path, "Model config (JSON)")->required();
  analyze_cmd->add_option("--register-size", analyze.register_size, "Register size override");
  analyze_cmd->add_option("--out", analyze.out_dir, "Output directory");
  add_spectrum_flags(*analyze_cmd, analyze.thresholds);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? cli::kOk : cli::kInputError;
  }

  try {
    if (*synth_cmd) {
      if (!sweep_text.empty()) {
        const auto summary = cli::cmd_sweep(synth, cli::parse_sweep(sweep_text), std::cout);
        for (const auto& p : summary["points"]) {
          if (p["status"] != "ok") return p["exit_code"].get<int>();
        }
      } else {
        cli::cmd_synth(synth, std::cout);
      }
    } else if (*replay_cmd) {
      cli::cmd_replay(replay, std::cout);
    } else if (*analyze_cmd) {
      cli::cmd_analyze(analyze, std::cout);
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return cli::exit_code_for(e);
  }
  return cli::kOk;
}

#pragma once

#include <string>
#include <vector>

#include "json.hpp"
#include "unileak/analysis.hpp"
#include "unileak/controller.hpp"
#include "unileak/dynamics.hpp"

namespace unileak {

/// Shortest-safe decimal form: 17 significant digits, round-trips exactly.
std::string format_real(double v);
double parse_real(std::string_view text, const std::string& where);

// Field CSV: header `t,e_re,e_im`, one row per step.
void write_field_csv(const std::string& path, const Trajectory& traj);
std::vector<FieldSample> read_field_csv(const std::string& path);

// Trajectory CSV: header `t,e_re,e_im,J,C,unit_residual`, one row per step.
void write_trajectory_csv(const std::string& path, const Trajectory& traj);
Trajectory read_trajectory_csv(const std::string& path);

nlohmann::json to_json(const ControlParams& params);
nlohmann::json to_json(const SpectrumReport& report, bool include_arrays = false);
nlohmann::json to_json(const std::vector<Snapshot>& snapshots, const CMatrix& p_r);

void write_text(const std::string& path, const std::string& text);
nlohmann::json read_json_file(const std::string& path);

/// FNV-1a 64-bit digest of a file's bytes, as 16 hex digits.
std::string file_digest(const std::string& path);

}  // namespace unileak

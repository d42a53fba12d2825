#include "unileak/io.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <sstream>

namespace unileak {

using nlohmann::json;

std::string format_real(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

double parse_real(std::string_view text, const std::string& where) {
  while (!text.empty() && (text.front() == ' ' || text.front() == '\t')) text.remove_prefix(1);
  while (!text.empty() && (text.back() == ' ' || text.back() == '\t' || text.back() == '\r')) {
    text.remove_suffix(1);
  }
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || ptr != text.data() + text.size() || text.empty()) {
    throw InputError(where + ": cannot parse \"" + std::string(text) + "\" as a number");
  }
  return v;
}

namespace {

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot write " + path);
  return out;
}

std::vector<std::string_view> split(std::string_view line) {
  std::vector<std::string_view> cols;
  std::size_t start = 0;
  for (std::size_t i = 0; i <= line.size(); ++i) {
    if (i == line.size() || line[i] == ',') {
      cols.push_back(line.substr(start, i - start));
      start = i + 1;
    }
  }
  return cols;
}

std::string strip_cr(std::string line) {
  if (!line.empty() && line.back() == '\r') line.pop_back();
  return line;
}

// Reads a CSV with the exact header; returns rows of parsed numbers.
std::vector<std::vector<double>> read_numeric_csv(const std::string& path,
                                                  const std::string& header) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open " + path);
  std::string line;
  if (!std::getline(in, line) || strip_cr(line) != header) {
    throw InputError(path + ": expected header \"" + header + "\"");
  }
  const std::size_t width = split(header).size();
  std::vector<std::vector<double>> rows;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    line = strip_cr(line);
    if (line.empty()) continue;
    const auto cols = split(line);
    const std::string where = path + ":" + std::to_string(lineno);
    if (cols.size() != width) {
      throw InputError(where + ": expected " + std::to_string(width) + " columns, found " +
                       std::to_string(cols.size()) + " (truncated file?)");
    }
    std::vector<double> row;
    row.reserve(width);
    for (const auto c : cols) row.push_back(parse_real(c, where));
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace

void write_field_csv(const std::string& path, const Trajectory& traj) {
  auto out = open_out(path);
  out << "t,e_re,e_im\n";
  for (std::size_t k = 0; k < traj.size(); ++k) {
    out << format_real(traj.times[k]) << ',' << format_real(traj.fields[k].real()) << ','
        << format_real(traj.fields[k].imag()) << '\n';
  }
  if (!out) throw InputError("write failed: " + path);
}

std::vector<FieldSample> read_field_csv(const std::string& path) {
  const auto rows = read_numeric_csv(path, "t,e_re,e_im");
  std::vector<FieldSample> field;
  field.reserve(rows.size());
  for (const auto& r : rows) field.push_back({r[0], {r[1], r[2]}});
  return field;
}

void write_trajectory_csv(const std::string& path, const Trajectory& traj) {
  traj.validate();
  auto out = open_out(path);
  out << "t,e_re,e_im,J,C,unit_residual\n";
  for (std::size_t k = 0; k < traj.size(); ++k) {
    out << format_real(traj.times[k]) << ',' << format_real(traj.fields[k].real()) << ','
        << format_real(traj.fields[k].imag()) << ',' << format_real(traj.j_vals[k]) << ','
        << format_real(traj.c_vals[k]) << ',' << format_real(traj.unit_residuals[k]) << '\n';
  }
  if (!out) throw InputError("write failed: " + path);
}

Trajectory read_trajectory_csv(const std::string& path) {
  const auto rows = read_numeric_csv(path, "t,e_re,e_im,J,C,unit_residual");
  if (rows.size() < 2) throw InputError(path + ": trajectory has fewer than two rows");
  Trajectory traj;
  traj.reserve(rows.size());
  for (const auto& r : rows) traj.append(r[0], {r[1], r[2]}, r[3], r[4], r[5]);
  traj.dt = traj.times[1] - traj.times[0];
  try {
    traj.validate();
  } catch (const StructuralError& e) {
    throw InputError(path + ": " + e.what());
  }
  const auto& last = rows.back();
  traj.final_state = {last[0], last[3], last[4], last[5]};
  return traj;
}

json to_json(const ControlParams& params) {
  return {{"e_max", params.e_max},     {"gain", params.gain.to_string()},
          {"seed_eps", params.seed_eps}, {"g_floor", params.g_floor},
          {"dt", params.dt},           {"t_final", params.t_final},
          {"lock", std::string(to_string(params.lock))}};
}

namespace {

json ratio_json(double r) {
  if (std::isfinite(r)) return r;
  return nullptr;
}

json checks_json(const std::vector<FeatureCheck>& checks) {
  json arr = json::array();
  for (const auto& c : checks) {
    arr.push_back({{"lower", c.transition.lower},
                   {"upper", c.transition.upper},
                   {"frequency", c.transition.frequency},
                   {"evaluable", c.evaluable},
                   {"ratio", c.evaluable ? ratio_json(c.ratio) : json(nullptr)},
                   {"pass", c.evaluable && c.pass}});
  }
  return arr;
}

}  // namespace

json to_json(const SpectrumReport& report, bool include_arrays) {
  json j = {{"resolution", report.resolution},
            {"window", report.window},
            {"one_photon_dips", checks_json(report.one_photon_dips)},
            {"two_photon_peaks", checks_json(report.two_photon_peaks)},
            {"summary",
             {{"dips_evaluable", report.evaluable_dips()},
              {"dips_passed", report.passed_dips()},
              {"peaks_evaluable", report.evaluable_peaks()},
              {"peaks_passed", report.passed_peaks()}}}};
  if (include_arrays) {
    j["freqs"] = report.freqs;
    j["field_amp"] = report.field_amp;
    j["intensity_freqs"] = report.intensity_freqs;
    j["intensity_amp"] = report.intensity_amp;
  }
  return j;
}

json to_json(const std::vector<Snapshot>& snapshots, const CMatrix& p_r) {
  json arr = json::array();
  for (const auto& s : snapshots) {
    const auto entries = snapshot_export(s.u, p_r);
    const auto phases = relative_phases(entries);
    json elems = json::array();
    for (std::size_t k = 0; k < entries.size(); ++k) {
      const auto& e = entries[k];
      elems.push_back({{"row", e.row},
                       {"col", e.col},
                       {"re", e.re},
                       {"im", e.im},
                       {"relative_phase", phases[k]}});
    }
    arr.push_back({{"t", s.t}, {"elements", elems}});
  }
  return arr;
}

void write_text(const std::string& path, const std::string& text) {
  auto out = open_out(path);
  out << text;
  if (!out) throw InputError("write failed: " + path);
}

json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open " + path);
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw InputError(path + ": invalid JSON (" + e.what() + ")");
  }
}

std::string file_digest(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open " + path);
  std::uint64_t h = 1469598103934665603ULL;
  char c;
  while (in.get(c)) {
    h ^= static_cast<unsigned char>(c);
    h *= 1099511628211ULL;
  }
  std::ostringstream out;
  out << std::hex << std::setw(16) << std::setfill('0') << h;
  return out.str();
}

}  // namespace unileak

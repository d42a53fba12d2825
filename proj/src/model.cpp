#include "unileak/model.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>

#include "json.hpp"

namespace unileak {

using nlohmann::json;

std::string_view to_string(Manifold m) {
  return m == Manifold::ground ? "ground" : "excited";
}

void LadderSpec::validate(std::string_view where) const {
  const std::string w(where);
  if (n < 1) throw ConfigError(w + ".n: must be >= 1");
  if (!std::isfinite(omega) || omega <= 0.0) throw ConfigError(w + ".omega: must be > 0");
  if (!std::isfinite(chi) || chi < 0.0) throw ConfigError(w + ".chi: must be >= 0");
  if (!std::isfinite(offset)) throw ConfigError(w + ".offset: must be finite");
  const double top = n + 0.5;
  if (chi * top * top >= omega * top) {
    throw ConfigError(w + ".chi: anharmonicity inverts level order within the ladder");
  }
}

std::vector<double> LadderSpec::energies() const {
  std::vector<double> e(static_cast<std::size_t>(n));
  for (int k = 0; k < n; ++k) {
    const double v = k + 0.5;
    e[static_cast<std::size_t>(k)] = offset + omega * v - chi * v * v;
  }
  return e;
}

SystemModel::SystemModel(std::vector<double> energies, std::vector<Manifold> manifold,
                         CMatrix dipole, std::vector<int> register_levels)
    : energies_(std::move(energies)),
      manifold_(std::move(manifold)),
      dipole_(std::move(dipole)),
      register_(std::move(register_levels)) {
  const auto n = static_cast<Eigen::Index>(energies_.size());
  if (n == 0) throw ConfigError("levels: model has no levels");
  if (manifold_.size() != energies_.size()) {
    throw ConfigError("levels.manifold: length " + std::to_string(manifold_.size()) +
                      " does not match energies length " + std::to_string(energies_.size()));
  }
  if (dipole_.rows() != n || dipole_.cols() != n) {
    throw ConfigError("dipole: matrix must be " + std::to_string(n) + "x" + std::to_string(n));
  }

  double last[2] = {-std::numeric_limits<double>::infinity(),
                    -std::numeric_limits<double>::infinity()};
  for (Eigen::Index i = 0; i < n; ++i) {
    const double e = energies_[static_cast<std::size_t>(i)];
    if (!std::isfinite(e)) {
      throw ConfigError("levels.energies[" + std::to_string(i) + "]: not finite");
    }
    double& prev = last[manifold_[static_cast<std::size_t>(i)] == Manifold::ground ? 0 : 1];
    if (!(e > prev)) {
      throw ConfigError("levels.energies[" + std::to_string(i) +
                        "]: levels within a manifold must be strictly ascending");
    }
    prev = e;
  }

  if (!dipole_.allFinite()) throw ConfigError("dipole: non-finite entry");
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      if (dipole_(i, j) == Complex(0.0)) continue;
      if (manifold_[static_cast<std::size_t>(i)] != Manifold::ground ||
          manifold_[static_cast<std::size_t>(j)] != Manifold::excited) {
        throw ConfigError("dipole[" + std::to_string(i) + "," + std::to_string(j) +
                          "]: couples " +
                          std::string(to_string(manifold_[static_cast<std::size_t>(i)])) +
                          " to " +
                          std::string(to_string(manifold_[static_cast<std::size_t>(j)])) +
                          "; only ground-excited entries are allowed");
      }
      max_coupled_frequency_ = std::max(
          max_coupled_frequency_, std::abs(energies_[static_cast<std::size_t>(i)] -
                                           energies_[static_cast<std::size_t>(j)]));
    }
  }

  if (register_.empty()) throw ConfigError("register: must list at least one level");
  std::set<int> seen;
  for (int r : register_) {
    if (r < 0 || r >= n) throw ConfigError("register: index " + std::to_string(r) + " out of range");
    if (manifold_[static_cast<std::size_t>(r)] != Manifold::ground) {
      throw ConfigError("register: level " + std::to_string(r) + " is not a ground level");
    }
    if (!seen.insert(r).second) {
      throw ConfigError("register: level " + std::to_string(r) + " listed twice");
    }
  }
}

std::vector<int> SystemModel::levels_in(Manifold m) const {
  std::vector<int> out;
  for (int i = 0; i < n_levels(); ++i) {
    if (manifold_[static_cast<std::size_t>(i)] == m) out.push_back(i);
  }
  return out;
}

bool SystemModel::in_register(int level) const {
  return std::find(register_.begin(), register_.end(), level) != register_.end();
}

SystemModel SystemModel::with_register(std::vector<int> register_levels) const {
  return SystemModel(energies_, manifold_, dipole_, std::move(register_levels));
}

namespace {

CMatrix fill_dipole(const std::vector<Manifold>& manifold, const DipoleRule& rule) {
  const auto n = static_cast<Eigen::Index>(manifold.size());
  CMatrix mu = CMatrix::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      if (manifold[static_cast<std::size_t>(i)] == Manifold::ground &&
          manifold[static_cast<std::size_t>(j)] == Manifold::excited) {
        mu(i, j) = rule.uniform;
      }
    }
  }
  for (const auto& entry : rule.overrides) {
    if (entry.lower < 0 || entry.lower >= n || entry.upper < 0 || entry.upper >= n) {
      throw ConfigError("dipole: entry [" + std::to_string(entry.lower) + "," +
                        std::to_string(entry.upper) + "] out of range");
    }
    mu(entry.lower, entry.upper) = entry.value;
  }
  return mu;
}

std::vector<int> first_levels(int count) {
  std::vector<int> r(static_cast<std::size_t>(count));
  for (int k = 0; k < count; ++k) r[static_cast<std::size_t>(k)] = k;
  return r;
}

}  // namespace

SystemModel build_ladder(const LadderSpec& ground, const LadderSpec& excited,
                         const DipoleRule& rule, int register_size) {
  ground.validate("levels.ladder.ground");
  excited.validate("levels.ladder.excited");
  if (register_size < 1 || register_size > ground.n) {
    throw ConfigError("register: size " + std::to_string(register_size) +
                      " does not fit the ground manifold of " + std::to_string(ground.n) +
                      " levels");
  }
  std::vector<double> energies = ground.energies();
  const auto upper = excited.energies();
  energies.insert(energies.end(), upper.begin(), upper.end());
  std::vector<Manifold> manifold(static_cast<std::size_t>(ground.n), Manifold::ground);
  manifold.resize(energies.size(), Manifold::excited);
  CMatrix mu = fill_dipole(manifold, rule);
  return SystemModel(std::move(energies), std::move(manifold), std::move(mu),
                     first_levels(register_size));
}

// --- config parsing ---------------------------------------------------------

namespace {

void reject_unknown(const json& obj, std::initializer_list<std::string_view> allowed,
                    const std::string& where) {
  for (const auto& [key, _] : obj.items()) {
    if (std::find(allowed.begin(), allowed.end(), key) == allowed.end()) {
      throw ConfigError(where + (where.empty() ? "" : ".") + key + ": unknown key");
    }
  }
}

const json& require(const json& obj, const char* key, const std::string& where) {
  auto it = obj.find(key);
  if (it == obj.end()) throw ConfigError(where + "." + key + ": missing");
  return *it;
}

double as_real(const json& v, const std::string& where) {
  if (!v.is_number()) throw ConfigError(where + ": expected a number");
  return v.get<double>();
}

int as_index(const json& v, const std::string& where) {
  if (!v.is_number_integer()) throw ConfigError(where + ": expected an integer index");
  return v.get<int>();
}

Complex as_complex(const json& v, const std::string& where) {
  if (v.is_number()) return {v.get<double>(), 0.0};
  if (v.is_array() && v.size() == 2 && v[0].is_number() && v[1].is_number()) {
    return {v[0].get<double>(), v[1].get<double>()};
  }
  throw ConfigError(where + ": expected a number or [re, im]");
}

LadderSpec parse_ladder(const json& v, const std::string& where) {
  if (!v.is_object()) throw ConfigError(where + ": expected an object");
  reject_unknown(v, {"n", "omega", "chi", "offset"}, where);
  LadderSpec s;
  s.n = as_index(require(v, "n", where), where + ".n");
  s.omega = as_real(require(v, "omega", where), where + ".omega");
  if (v.contains("chi")) s.chi = as_real(v["chi"], where + ".chi");
  if (v.contains("offset")) s.offset = as_real(v["offset"], where + ".offset");
  s.validate(where);
  return s;
}

std::vector<DipoleEntry> parse_entries(const json& v, const std::string& where) {
  if (!v.is_array()) throw ConfigError(where + ": expected a list of [i, j, re, im]");
  std::vector<DipoleEntry> out;
  for (std::size_t k = 0; k < v.size(); ++k) {
    const std::string w = where + "[" + std::to_string(k) + "]";
    const json& e = v[k];
    if (!e.is_array() || (e.size() != 3 && e.size() != 4)) {
      throw ConfigError(w + ": expected [i, j, re, im]");
    }
    DipoleEntry d;
    d.lower = as_index(e[0], w + "[0]");
    d.upper = as_index(e[1], w + "[1]");
    d.value = {as_real(e[2], w + "[2]"), e.size() == 4 ? as_real(e[3], w + "[3]") : 0.0};
    out.push_back(d);
  }
  return out;
}

DipoleRule parse_dipole(const json& v) {
  const std::string where = "dipole";
  DipoleRule rule;
  if (v.is_string()) {
    if (v.get<std::string>() != "uniform") {
      throw ConfigError("dipole: unknown rule \"" + v.get<std::string>() + "\"");
    }
    return rule;
  }
  if (v.is_array()) {
    rule.uniform = 0.0;
    rule.overrides = parse_entries(v, where);
    return rule;
  }
  if (v.is_object()) {
    reject_unknown(v, {"uniform", "entries"}, where);
    if (v.contains("uniform")) rule.uniform = as_complex(v["uniform"], where + ".uniform");
    if (v.contains("entries")) rule.overrides = parse_entries(v["entries"], where + ".entries");
    return rule;
  }
  throw ConfigError("dipole: expected \"uniform\", an entry list, or an object");
}

Manifold parse_manifold(const json& v, const std::string& where) {
  if (v.is_string()) {
    const auto s = v.get<std::string>();
    if (s == "ground") return Manifold::ground;
    if (s == "excited") return Manifold::excited;
  }
  throw ConfigError(where + ": expected \"ground\" or \"excited\"");
}

}  // namespace

SystemModel load_model(std::string_view config_text) {
  json cfg;
  try {
    cfg = json::parse(config_text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config: invalid JSON (") + e.what() + ")");
  }
  if (!cfg.is_object()) throw ConfigError("config: top level must be an object");
  reject_unknown(cfg, {"description", "levels", "dipole", "register"}, "");

  const json& levels = require(cfg, "levels", "config");
  if (!levels.is_object()) throw ConfigError("levels: expected an object");
  reject_unknown(levels, {"ladder", "energies", "manifold"}, "levels");

  std::vector<double> energies;
  std::vector<Manifold> manifold;
  if (levels.contains("ladder")) {
    const json& ladder = levels["ladder"];
    if (!ladder.is_object()) throw ConfigError("levels.ladder: expected an object");
    reject_unknown(ladder, {"ground", "excited"}, "levels.ladder");
    const auto g = parse_ladder(require(ladder, "ground", "levels.ladder"), "levels.ladder.ground");
    energies = g.energies();
    manifold.assign(energies.size(), Manifold::ground);
    if (ladder.contains("excited")) {
      const auto x = parse_ladder(ladder["excited"], "levels.ladder.excited");
      const auto ex = x.energies();
      energies.insert(energies.end(), ex.begin(), ex.end());
      manifold.resize(energies.size(), Manifold::excited);
    }
  }
  if (levels.contains("manifold")) {
    const json& m = levels["manifold"];
    if (!m.is_array()) throw ConfigError("levels.manifold: expected a list");
    manifold.clear();
    for (std::size_t k = 0; k < m.size(); ++k) {
      manifold.push_back(parse_manifold(m[k], "levels.manifold[" + std::to_string(k) + "]"));
    }
  }
  if (levels.contains("energies")) {
    const json& e = levels["energies"];
    if (!e.is_array()) throw ConfigError("levels.energies: expected a list");
    energies.clear();
    for (std::size_t k = 0; k < e.size(); ++k) {
      energies.push_back(as_real(e[k], "levels.energies[" + std::to_string(k) + "]"));
    }
  }
  if (energies.empty()) throw ConfigError("levels: give either ladder or energies");
  if (manifold.empty()) throw ConfigError("levels.manifold: required with explicit energies");
  if (manifold.size() != energies.size()) {
    throw ConfigError("levels.manifold: length " + std::to_string(manifold.size()) +
                      " does not match " + std::to_string(energies.size()) + " energies");
  }

  const DipoleRule rule = cfg.contains("dipole") ? parse_dipole(cfg["dipole"]) : DipoleRule{};
  CMatrix mu = fill_dipole(manifold, rule);

  const json& reg = require(cfg, "register", "config");
  if (!reg.is_array()) throw ConfigError("register: expected a list of level indices");
  std::vector<int> register_levels;
  for (std::size_t k = 0; k < reg.size(); ++k) {
    register_levels.push_back(as_index(reg[k], "register[" + std::to_string(k) + "]"));
  }

  return SystemModel(std::move(energies), std::move(manifold), std::move(mu),
                     std::move(register_levels));
}

SystemModel load_model_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config: cannot open " + path);
  std::ostringstream text;
  text << in.rdbuf();
  return load_model(text.str());
}

CMatrix projector(const SystemModel& model) {
  const int n = model.n_levels();
  CMatrix p = CMatrix::Zero(n, n);
  for (int r : model.register_levels()) p(r, r) = 1.0;
  return p;
}

TransitionTable transition_table(const SystemModel& model) {
  TransitionTable table;
  const auto& e = model.energies();
  const auto& mu = model.dipole();
  for (int i : model.levels_in(Manifold::ground)) {
    for (int j : model.levels_in(Manifold::excited)) {
      if (mu(i, j) == Complex(0.0)) continue;
      table.one_photon.push_back(
          {i, j, std::abs(e[static_cast<std::size_t>(j)] - e[static_cast<std::size_t>(i)])});
    }
  }
  const auto& reg = model.register_levels();
  for (std::size_t a = 0; a < reg.size(); ++a) {
    for (std::size_t b = a + 1; b < reg.size(); ++b) {
      const int lo = std::min(reg[a], reg[b]);
      const int hi = std::max(reg[a], reg[b]);
      table.two_photon.push_back(
          {lo, hi, std::abs(e[static_cast<std::size_t>(hi)] - e[static_cast<std::size_t>(lo)])});
    }
  }
  return table;
}

double spectral_gap(const TransitionTable& table) {
  double gap = std::numeric_limits<double>::infinity();
  for (const auto& a : table.one_photon) {
    for (const auto& b : table.two_photon) gap = std::min(gap, std::abs(a.frequency - b.frequency));
  }
  return gap;
}

namespace {
// hbar in cm^-1 * ps.
constexpr double kHbarCm1Ps = 5.308837458876145;
}  // namespace

double to_wavenumbers(double energy, double energy_unit_cm1) { return energy * energy_unit_cm1; }

double to_picoseconds(double time, double energy_unit_cm1) {
  return time * kHbarCm1Ps / energy_unit_cm1;
}

}  // namespace unileak

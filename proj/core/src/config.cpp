#include "corevac/config.hpp"

#include <charconv>
#include <cmath>
#include <map>
#include <sstream>
#include <vector>

namespace corevac {

namespace {

std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  const auto b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

double parse_number(const std::string& v, int line) {
  try {
    size_t pos = 0;
    const double x = std::stod(v, &pos);
    if (pos != v.size()) throw std::invalid_argument(v);
    return x;
  } catch (const std::exception&) {
    throw ParseError("line " + std::to_string(line) + ": not a number: '" + v + "'");
  }
}

}  // namespace

EquilibriumProfile ScenarioConfig::make_profile() const {
  if (radius_r)
    return EquilibriumProfile::from_radius(gas, *radius_r);
  return radius_from_mass(gas, *target_mass);
}

ScenarioConfig parse_config(const std::string& text) {
  ScenarioConfig cfg;
  std::map<std::string, std::pair<std::string, int>> kv;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ParseError("line " + std::to_string(lineno) + ": expected 'key = value'");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty() || value.empty())
      throw ParseError("line " + std::to_string(lineno) + ": empty key or value");
    if (kv.count(key))
      throw ParseError("line " + std::to_string(lineno) + ": duplicate key '" + key + "'");
    kv[key] = {value, lineno};
  }

  auto take = [&](const std::string& key) -> std::optional<std::pair<std::string, int>> {
    auto it = kv.find(key);
    if (it == kv.end()) return std::nullopt;
    auto out = it->second;
    kv.erase(it);
    return out;
  };
  auto take_num = [&](const std::string& key, double& slot) {
    if (auto v = take(key)) slot = parse_number(v->first, v->second);
  };

  take_num("gas.gamma", cfg.gas.gamma);
  take_num("gas.pressure_const", cfg.gas.pressure_const);
  take_num("gas.g0", cfg.gas.core_gravity);
  take_num("gas.r0", cfg.gas.core_radius);
  take_num("gas.G", cfg.gas.self_gravity_const);

  if (auto v = take("radius.R")) cfg.radius_r = parse_number(v->first, v->second);
  if (auto v = take("radius.mass")) cfg.target_mass = parse_number(v->first, v->second);

  if (auto v = take("grid.n_cells")) {
    const double x = parse_number(v->first, v->second);
    if (x != std::floor(x)) throw ValidationError("grid.n_cells must be an integer");
    cfg.n_cells = static_cast<int>(x);
  }
  take_num("grid.grading_power", cfg.grading_power);

  if (auto v = take("perturbation.mode")) {
    const double x = parse_number(v->first, v->second);
    if (x != std::floor(x)) throw ValidationError("perturbation.mode must be an integer");
    cfg.perturbation.mode = static_cast<int>(x);
  }
  take_num("perturbation.amplitude", cfg.perturbation.amplitude);
  if (auto v = take("perturbation.kind")) {
    if (v->first == "displacement")
      cfg.perturbation.kind = PerturbationFamily::Kind::displacement;
    else if (v->first == "velocity")
      cfg.perturbation.kind = PerturbationFamily::Kind::velocity;
    else
      throw ValidationError("perturbation.kind must be displacement or velocity");
  }

  take_num("run.t_end", cfg.t_end);
  take_num("run.snapshot_every", cfg.snapshot_every);
  take_num("run.cfl", cfg.cfl);
  take_num("run.fit_t_lo", cfg.fit_t_lo);
  take_num("run.fit_t_hi", cfg.fit_t_hi);

  take_num("poisson.central_density", cfg.poisson_central_density);
  take_num("poisson.radius_cap", cfg.poisson_radius_cap);

  if (auto v = take("preset")) cfg.preset = v->first;

  if (!kv.empty()) {
    std::string msg = "unknown keys:";
    for (const auto& [k, v] : kv) msg += " " + k + " (line " + std::to_string(v.second) + ")";
    throw ValidationError(msg);
  }

  // Validation
  cfg.gas.validate();
  if (cfg.radius_r.has_value() == cfg.target_mass.has_value())
    throw ValidationError("radius: exactly one of radius.R or radius.mass is required");
  if (cfg.radius_r && !(*cfg.radius_r > cfg.gas.core_radius))
    throw ValidationError("radius.R must exceed gas.r0");
  if (cfg.target_mass && !(*cfg.target_mass > 0.0))
    throw ValidationError("radius.mass must be > 0");
  if (cfg.n_cells < 8) throw ValidationError("grid.n_cells must be >= 8");
  if (cfg.grading_power < 1.0) throw ValidationError("grid.grading_power must be >= 1");
  if (!(cfg.cfl > 0.0 && cfg.cfl <= 1.0)) throw ValidationError("run.cfl must be in (0, 1]");
  if (std::abs(cfg.perturbation.amplitude) > 0.05)
    throw ValidationError("perturbation.amplitude must satisfy |eps| <= 0.05");
  if (!(cfg.t_end > 0.0)) throw ValidationError("run.t_end must be > 0");
  if (!(cfg.snapshot_every > 0.0)) throw ValidationError("run.snapshot_every must be > 0");
  if (!(cfg.fit_t_lo < cfg.fit_t_hi)) throw ValidationError("run fit window must be nonempty");
  if (cfg.preset.empty()) throw ValidationError("preset is required");
  return cfg;
}

std::string serialize_config(const ScenarioConfig& cfg) {
  std::ostringstream out;
  out.precision(17);
  out << "preset = " << cfg.preset << "\n";
  out << "gas.gamma = " << cfg.gas.gamma << "\n";
  out << "gas.pressure_const = " << cfg.gas.pressure_const << "\n";
  out << "gas.g0 = " << cfg.gas.core_gravity << "\n";
  out << "gas.r0 = " << cfg.gas.core_radius << "\n";
  out << "gas.G = " << cfg.gas.self_gravity_const << "\n";
  if (cfg.radius_r) out << "radius.R = " << *cfg.radius_r << "\n";
  if (cfg.target_mass) out << "radius.mass = " << *cfg.target_mass << "\n";
  out << "grid.n_cells = " << cfg.n_cells << "\n";
  out << "grid.grading_power = " << cfg.grading_power << "\n";
  out << "perturbation.mode = " << cfg.perturbation.mode << "\n";
  out << "perturbation.amplitude = " << cfg.perturbation.amplitude << "\n";
  out << "perturbation.kind = "
      << (cfg.perturbation.kind == PerturbationFamily::Kind::displacement ? "displacement"
                                                                          : "velocity")
      << "\n";
  out << "run.t_end = " << cfg.t_end << "\n";
  out << "run.snapshot_every = " << cfg.snapshot_every << "\n";
  out << "run.cfl = " << cfg.cfl << "\n";
  out << "run.fit_t_lo = " << cfg.fit_t_lo << "\n";
  out << "run.fit_t_hi = " << cfg.fit_t_hi << "\n";
  out << "poisson.central_density = " << cfg.poisson_central_density << "\n";
  out << "poisson.radius_cap = " << cfg.poisson_radius_cap << "\n";
  return out.str();
}

}  // namespace corevac

#ifndef COREVAC_PRESETS_HPP
#define COREVAC_PRESETS_HPP

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "corevac/config.hpp"
#include "corevac/diagnostics.hpp"
#include "corevac/spectrum.hpp"

namespace corevac {

struct Assertion {
  std::string name;
  double measured;
  double threshold;
  std::string cmp;  ///< "<=", ">=", ...
  bool pass;
};

/// One CSV row per snapshot; see emit_csv for the column schema.
struct SnapshotRow {
  double t, e0, e1, e2, e01, e_total, d0;
  double max_zeta, max_u, r_t, mass, vacuum_slope;
};

struct RunReport {
  ScenarioConfig config;
  std::vector<SnapshotRow> rows;
  std::vector<Assertion> assertions;
  std::optional<DecayFit> energy_fit;
  std::optional<DecayFit> velocity_fit;
  std::optional<DecayFit> boundary_fit;
  std::optional<SpectrumResult> spectrum;
  double wall_seconds = 0.0;

  bool passed() const;
  nlohmann::json to_json() const;
};

std::vector<std::string> preset_names();

/// Executes the named experiment. `jobs` parallelizes independent cases
/// (window-sweep only).
RunReport run_preset(const ScenarioConfig& config, int jobs = 1);

/// Header `t,E0,E1,E2,E01,E_total,D0,max_zeta,max_u,R_t,mass,vacuum_slope`,
/// 17 significant digits, LF line endings; bit-identical across reruns.
void emit_csv(const RunReport& report, const std::filesystem::path& path);
void emit_json(const RunReport& report, const std::filesystem::path& path);

/// Helper shared with tests: rows for every snapshot of a trajectory.
std::vector<SnapshotRow> snapshot_rows(const Trajectory& trajectory);

}  // namespace corevac

#endif

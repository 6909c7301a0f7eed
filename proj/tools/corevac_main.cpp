// corevac: spherically symmetric damped Euler flows outside a solid core.
//
//   corevac run --config scenario.cfg [--out DIR] [--jobs N]
//   corevac presets
//
// `run` executes the preset named in the config, writes snapshots.csv and
// report.json into the output directory, prints one line per assertion, and
// exits 0 iff every assertion passed. The output directory defaults to the
// COREVAC_OUT environment variable, then to the current directory.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "corevac/presets.hpp"

namespace {

std::string slurp(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw corevac::IoError("cannot read " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

int run_command(const std::string& config_path, std::string out_dir, int jobs) {
  if (out_dir.empty()) {
    if (const char* env = std::getenv("COREVAC_OUT")) out_dir = env;
    if (out_dir.empty()) out_dir = ".";
  }
  const corevac::ScenarioConfig cfg = corevac::parse_config(slurp(config_path));
  const corevac::RunReport report = corevac::run_preset(cfg, jobs);

  std::filesystem::create_directories(out_dir);
  const std::filesystem::path dir(out_dir);
  if (!report.rows.empty()) corevac::emit_csv(report, dir / "snapshots.csv");
  corevac::emit_json(report, dir / "report.json");

  for (const corevac::Assertion& a : report.assertions) {
    std::cout << (a.pass ? "PASS" : "FAIL") << "  " << a.name << "  measured "
              << a.measured << " " << a.cmp << " " << a.threshold << "\n";
  }
  std::cout << "preset " << cfg.preset << ": " << (report.passed() ? "ok" : "FAILED")
            << " (" << report.wall_seconds << " s)\n";
  return report.passed() ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"numerical laboratory for damped Euler flows with a vacuum boundary"};
  app.require_subcommand(1);

  std::string config_path, out_dir;
  int jobs = 1;
  CLI::App* run = app.add_subcommand("run", "execute the preset named in a config file");
  run->add_option("--config", config_path, "scenario config file")->required();
  run->add_option("--out", out_dir, "output directory (default: $COREVAC_OUT, then .)");
  run->add_option("--jobs", jobs, "worker threads for independent cases")
      ->check(CLI::PositiveNumber);

  CLI::App* presets = app.add_subcommand("presets", "list available presets");

  CLI11_PARSE(app, argc, argv);

  try {
    if (presets->parsed()) {
      for (const std::string& name : corevac::preset_names()) std::cout << name << "\n";
      return 0;
    }
    return run_command(config_path, out_dir, jobs);
  } catch (const corevac::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}

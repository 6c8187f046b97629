// dynsense: command-line driver for simulation, sweeps and matrix certification.

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <omp.h>

#include <CLI11.hpp>

#include "dynsense/config.hpp"
#include "dynsense/experiment.hpp"

namespace fs = std::filesystem;
using namespace dynsense;

namespace {

struct Options {
  std::string config_path;
  std::uint64_t seed = 0;
  bool seed_given = false;
  std::string out_dir = ".";
  std::size_t trials = 0;
  int workers = 0;
  std::vector<std::string> overrides;
};

using Outputs = std::vector<std::pair<std::string, std::string>>;

// All files are rendered before any is touched; each lands via rename.
void write_outputs(const fs::path& dir, const Outputs& files) {
  fs::create_directories(dir);
  for (const auto& [name, body] : files) {
    const fs::path target = dir / name;
    const fs::path tmp = dir / ("." + name + ".tmp");
    {
      std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
      if (!out) throw std::runtime_error("cannot write " + tmp.string());
      out << body;
      if (!out.flush()) throw std::runtime_error("write failed for " + tmp.string());
    }
    fs::rename(tmp, target);
    std::cout << target.string() << '\n';
  }
}

template <typename Fn>
std::string render(Fn&& fn) {
  std::ostringstream ss;
  fn(ss);
  return ss.str();
}

ExperimentConfig resolve(const Options& opt, bool certification) {
  ExperimentConfig config =
      opt.config_path.empty() ? parse_config("", opt.overrides) : load_config(opt.config_path, opt.overrides);
  if (opt.seed_given) config.sim.seed = opt.seed;
  if (opt.trials > 0) config.sim.trials = opt.trials;
  if (certification)
    config.validate_certify();
  else
    config.validate();
  config.require_seed();
  return config;
}

Outputs run_command(const std::string& command, const ExperimentConfig& config) {
  const std::uint64_t seed = *config.sim.seed;
  const std::size_t trials = config.sim.trials;
  if (command == "simulate") {
    const SimulationRun run = run_simulation(config, seed);
    return {{"windows.csv", render([&](std::ostream& o) { write_windows_csv(o, config, run); })},
            {"summary.csv", render([&](std::ostream& o) { write_summary_csv(o, config, run); })}};
  }
  if (command == "sweep") {
    const auto rows = run_sweep(config, seed, trials);
    return {{"sweep.csv", render([&](std::ostream& o) { write_sweep_csv(o, config, rows); })}};
  }
  if (command == "baseline") {
    const auto rows = run_baseline(config, seed, trials);
    return {{"baseline.csv", render([&](std::ostream& o) { write_baseline_csv(o, config, rows); })}};
  }
  if (command == "certify") {
    const auto rows = run_certify(config, seed);
    return {{"certify.csv", render([&](std::ostream& o) { write_certify_csv(o, config, rows); })}};
  }
  if (command == "rip") {
    const auto rows = run_rip(config, seed, trials);
    return {{"rip.csv", render([&](std::ostream& o) { write_rip_csv(o, config, rows); })}};
  }
  const auto rows = run_nsp(config, seed, trials);
  return {{"nsp.csv", render([&](std::ostream& o) { write_nsp_csv(o, config, rows); })}};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Sparse-dynamics cooperative sensing simulator"};
  app.require_subcommand(1);
  app.fallthrough();

  Options opt;
  app.add_option("--config", opt.config_path, "INI configuration file")->check(CLI::ExistingFile);
  app.add_option("--seed", opt.seed, "Base seed (overrides sim.seed)")->each([&](const std::string&) {
    opt.seed_given = true;
  });
  app.add_option("--out", opt.out_dir, "Output directory")->capture_default_str();
  app.add_option("--trials", opt.trials, "Independent trials (overrides sim.trials)")->check(CLI::PositiveNumber);
  app.add_option("--workers", opt.workers, "OpenMP worker threads (default: runtime choice)")
      ->check(CLI::NonNegativeNumber);
  app.add_option("--set", opt.overrides, "Config override section.key=value (repeatable)");

  const std::vector<std::pair<std::string, std::string>> commands = {
      {"simulate", "Run one simulation; writes windows.csv and summary.csv"},
      {"sweep", "Sweep (eps, T_err, nu); writes sweep.csv"},
      {"baseline", "Direct recovery every window for each W; writes baseline.csv"},
      {"certify", "Certify processed path-loss matrices; writes certify.csv"},
      {"rip", "RIP constants of processed matrices; writes rip.csv"},
      {"nsp", "Exact-recovery oracle on processed matrices; writes nsp.csv"},
  };
  for (const auto& [name, help] : commands) app.add_subcommand(name, help);

  CLI11_PARSE(app, argc, argv);
  const std::string command = app.get_subcommands().front()->get_name();

  try {
    const ExperimentConfig config = resolve(opt, command == "certify" || command == "rip" || command == "nsp");
    if (opt.workers > 0) omp_set_num_threads(opt.workers);
    const Outputs outputs = run_command(command, config);
    write_outputs(opt.out_dir, outputs);
  } catch (const std::exception& e) {
    std::cerr << "dynsense " << command << ": " << e.what() << '\n';
    return 2;
  }
  return 0;
}

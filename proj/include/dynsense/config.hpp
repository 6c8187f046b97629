#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "dynsense/channel.hpp"
#include "dynsense/fusion.hpp"
#include "dynsense/signal.hpp"

namespace dynsense {

struct LayoutSection {
  std::string type = "grid";  // grid | circular
  std::size_t cells = 49;     // grid: N
  double side = 7.0;          // grid: square side, cell = side / sqrt(N)
  std::size_t emitters = 16;  // circular: N_p
  std::size_t sensors = 32;   // circular: N_s
  std::size_t circles = 2;    // circular: n_c
  double emitter_radius = 1.0;
  std::vector<double> radii{0.6, 1.4};

  bool circular() const { return type == "circular"; }
};

struct SignalSection {
  double eta0 = 0.1;
  double eta1 = 0.1;
  double power = 1.0;
  std::size_t max_changes = 0;  // 0: uncapped Markov steps
};

struct ChannelSection {
  double offset_k = 1.0;
  std::optional<double> noise_var;  // defaults to 0.1 * P / K
  Fidelity fidelity = Fidelity::Surrogate;
  int window = 2000;
  double calibration = 1.0;
};

struct QuerySection {
  std::size_t q = 29;
  std::size_t q_extra = 5;
};

struct SolverSection {
  double xi = 0.01;
  double tol = 1e-8;
  int max_iter = 10000;
};

struct FusionSection {
  double eps = 1.0;
  int reset_period = 4;
  double nu = 0.5;
};

struct SimSection {
  std::size_t windows = 2000;  // T
  std::optional<std::uint64_t> seed;
  std::size_t trials = 1;
};

/// Swept values in units of P (eps, nu) and windows (T_err).
struct SweepSection {
  std::vector<double> eps{0.1, 0.5, 1.0, 2.0, 3.0};
  std::vector<int> reset_period{1, 2, 3, 4, 5, 8};
  std::vector<double> nu{0.25, 0.5, 0.75};
};

struct BaselineSection {
  std::vector<int> windows{250, 500, 1000, 2000};
};

struct CertifySection {
  std::size_t q = 8;
  std::size_t order = 2;     // RIP order reported by `rip`
  std::size_t sparsity = 1;  // S for the recovery oracle
  std::size_t samples = 100000;
  std::size_t layouts = 50;
  std::vector<std::size_t> counts{8, 16, 32, 64, 128, 256, 512};
  std::size_t angles = 20;
  std::size_t rip_draws = 20000;  // sampled mode when enumeration is too large
};

struct ExperimentConfig {
  LayoutSection layout;
  SignalSection signal;
  ChannelSection channel;
  QuerySection query;
  SolverSection solver;
  FusionSection fusion;
  SimSection sim;
  SweepSection sweep;
  BaselineSection baseline;
  CertifySection certify;

  std::size_t num_sensors() const;
  std::size_t num_emitters() const;
  double noise_var() const;
  MarkovOnOff chain() const;
  FusionConfig fusion_config() const;

  /// Throws std::invalid_argument naming the offending key.
  void validate() const;
  /// Checks that apply only to the certification commands.
  void validate_certify() const;
  /// Seed, or an error telling the user how to supply one.
  std::uint64_t require_seed() const;

  /// Ordered (section.key, value) pairs of the fully resolved configuration.
  std::vector<std::pair<std::string, std::string>> entries() const;
};

/// Parses INI text. Unknown sections or keys are errors. `overrides` are
/// "section.key=value" strings applied on top of the file.
ExperimentConfig parse_config(const std::string& ini_text, const std::vector<std::string>& overrides = {});
ExperimentConfig load_config(const std::string& path, const std::vector<std::string>& overrides = {});

/// "# key = value" lines, preceded by a "# dynsense <command>" line.
std::string config_comment_block(const ExperimentConfig& config, const std::string& command);

/// Shortest round-trip decimal form.
std::string format_number(double value);

}  // namespace dynsense

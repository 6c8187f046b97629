#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "dynsense/rng.hpp"

namespace dynsense {

/// Two-state Markov chain per emitter: OFF -> ON with probability eta0,
/// ON -> OFF with probability eta1.
struct MarkovOnOff {
  double eta0 = 0.1;
  double eta1 = 0.1;
  double power = 1.0;

  void validate() const;
  /// Stationary probability of being ON. Uses 0 when both rates are zero.
  double stationary_on() const;
};

/// Emitter power vector s(k); every entry is exactly 0 or exactly P.
class SignalState {
 public:
  SignalState(std::vector<bool> on, double power, std::int64_t window = 0);

  std::size_t size() const { return on_.size(); }
  double power() const { return power_; }
  std::int64_t window() const { return window_; }
  bool is_on(std::size_t i) const { return on_.at(i); }
  const std::vector<bool>& on() const { return on_; }

  Eigen::VectorXd values() const;
  /// Indices (0-based) of emitters currently ON.
  std::vector<std::size_t> support() const;

 private:
  std::vector<bool> on_;
  double power_;
  std::int64_t window_;
};

/// Each entry independently ON with the chain's stationary probability.
SignalState initial_state(std::size_t num_emitters, const MarkovOnOff& chain, Rng& rng);

/// One Markov transition; the window index advances by one.
SignalState step_signal(const SignalState& state, const MarkovOnOff& chain, Rng& rng);

/// Markov transition followed by reverting random toggles until at most
/// `max_changes` entries differ from `state`.
SignalState step_signal_capped(const SignalState& state, const MarkovOnOff& chain, std::size_t max_changes, Rng& rng);

/// 2*eta0*eta1/(eta0+eta1). Throws when both rates are zero.
double expected_change_fraction(const MarkovOnOff& chain);

/// s(next) - s(prev), entries in {-P, 0, P}.
Eigen::VectorXd dynamics(const SignalState& prev, const SignalState& next);

std::size_t count_changes(const SignalState& prev, const SignalState& next);

/// CSV row per window: k, space-separated 1-based support indices.
void write_trajectory_csv(std::ostream& out, const std::vector<SignalState>& trajectory);

}  // namespace dynsense

#include "dynsense/signal.hpp"

#include <algorithm>
#include <ostream>
#include <stdexcept>

namespace dynsense {

void MarkovOnOff::validate() const {
  if (!(eta0 >= 0.0 && eta0 <= 1.0)) throw std::invalid_argument("Markov chain: eta0 must lie in [0, 1]");
  if (!(eta1 >= 0.0 && eta1 <= 1.0)) throw std::invalid_argument("Markov chain: eta1 must lie in [0, 1]");
  if (!(power > 0.0)) throw std::invalid_argument("Markov chain: power must be positive");
}

double MarkovOnOff::stationary_on() const {
  const double total = eta0 + eta1;
  return total > 0.0 ? eta0 / total : 0.0;
}

SignalState::SignalState(std::vector<bool> on, double power, std::int64_t window)
    : on_(std::move(on)), power_(power), window_(window) {
  if (!(power > 0.0)) throw std::invalid_argument("SignalState: power must be positive");
}

Eigen::VectorXd SignalState::values() const {
  Eigen::VectorXd v(static_cast<Eigen::Index>(on_.size()));
  for (std::size_t i = 0; i < on_.size(); ++i) v(static_cast<Eigen::Index>(i)) = on_[i] ? power_ : 0.0;
  return v;
}

std::vector<std::size_t> SignalState::support() const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < on_.size(); ++i)
    if (on_[i]) out.push_back(i);
  return out;
}

SignalState initial_state(std::size_t num_emitters, const MarkovOnOff& chain, Rng& rng) {
  chain.validate();
  std::bernoulli_distribution on(chain.stationary_on());
  std::vector<bool> bits(num_emitters);
  for (std::size_t i = 0; i < num_emitters; ++i) bits[i] = on(rng);
  return SignalState(std::move(bits), chain.power, 0);
}

SignalState step_signal(const SignalState& state, const MarkovOnOff& chain, Rng& rng) {
  chain.validate();
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<bool> bits = state.on();
  for (std::size_t i = 0; i < bits.size(); ++i) {
    // One draw per entry regardless of state keeps streams aligned across chains.
    const double draw = u(rng);
    bits[i] = bits[i] ? !(draw < chain.eta1) : (draw < chain.eta0);
  }
  return SignalState(std::move(bits), state.power(), state.window() + 1);
}

SignalState step_signal_capped(const SignalState& state, const MarkovOnOff& chain, std::size_t max_changes,
                               Rng& rng) {
  SignalState next = step_signal(state, chain, rng);
  std::vector<std::size_t> toggled;
  for (std::size_t i = 0; i < state.size(); ++i)
    if (state.is_on(i) != next.is_on(i)) toggled.push_back(i);
  if (toggled.size() <= max_changes) return next;

  std::shuffle(toggled.begin(), toggled.end(), rng);
  std::vector<bool> bits = next.on();
  for (std::size_t j = max_changes; j < toggled.size(); ++j) bits[toggled[j]] = state.is_on(toggled[j]);
  return SignalState(std::move(bits), state.power(), next.window());
}

double expected_change_fraction(const MarkovOnOff& chain) {
  chain.validate();
  const double total = chain.eta0 + chain.eta1;
  if (total <= 0.0) throw std::invalid_argument("expected_change_fraction: eta0 + eta1 must be positive");
  return 2.0 * chain.eta0 * chain.eta1 / total;
}

Eigen::VectorXd dynamics(const SignalState& prev, const SignalState& next) {
  if (prev.size() != next.size()) throw std::invalid_argument("dynamics: state length mismatch");
  return next.values() - prev.values();
}

std::size_t count_changes(const SignalState& prev, const SignalState& next) {
  if (prev.size() != next.size()) throw std::invalid_argument("count_changes: state length mismatch");
  std::size_t n = 0;
  for (std::size_t i = 0; i < prev.size(); ++i) n += prev.is_on(i) != next.is_on(i) ? 1 : 0;
  return n;
}

void write_trajectory_csv(std::ostream& out, const std::vector<SignalState>& trajectory) {
  out << "k,support\n";
  for (const auto& s : trajectory) {
    out << s.window() << ',';
    bool first = true;
    for (auto i : s.support()) {
      out << (first ? "" : " ") << i + 1;
      first = false;
    }
    out << '\n';
  }
}

}  // namespace dynsense

#pragma once

#include <optional>
#include <span>
#include <vector>

#include "drltrade/features.hpp"

namespace drltrade {

// Position signal: -1 sell/short, 0 flat, +1 buy/long. Index form 0/1/2 is
// the network output slot.
struct TradeAction {
  int value = 0;

  static TradeAction from_index(int idx) { return TradeAction{idx - 1}; }
  int index() const { return value + 1; }

  bool operator==(const TradeAction&) const = default;
};

struct EnvConfig {
  double cost_bps = 0.0002;          // C, fraction per unit of position change
  double initial_capital = 100000.0;
  double drawdown_threshold = 0.70;  // fraction of capital consumed => ruin
  double ruin_penalty = -10.0;
  double terminal_multiplier = 10.0;
  double negative_terminal_multiplier = 10.0;  // applied when final return < 0
};

struct EnvState {
  std::size_t t = 0;  // feature-row index of the current decision day
  double wealth = 0;
  TradeAction prev_action;
  bool done = false;
};

struct StepInfo {
  double wealth = 0;
  double raw_return = 0;  // r(t), next-day simple return
  double trade_cost = 0;  // C * |A(t) - A(t-1)|
};

struct StepResult {
  std::optional<StateWindow> observation;  // absent when done
  double reward = 0;
  bool done = false;
  StepInfo info;
};

// The trading MDP: full notional long/short/flat, reward
// R(t) = r(t)*A(t) - |A(t)-A(t-1)|*C, multiplicative wealth, ruin and
// end-of-data terminal rules. One instance per loop; independent instances
// are safe in parallel.
class TradingEnv {
 public:
  TradingEnv(FeatureMatrix features, EnvConfig config);

  StateWindow reset();
  StepResult step(TradeAction action);

  const EnvState& state() const { return state_; }
  const EnvConfig& config() const { return config_; }
  const FeatureMatrix& features() const { return features_; }

  std::size_t first_state_row() const { return first_state_; }
  // Decisions per episode (one per row in [first_state, last-1]).
  std::size_t episode_length() const { return features_.size() - 1 - first_state_; }

 private:
  FeatureMatrix features_;
  EnvConfig config_;
  EnvState state_;
  std::size_t first_state_ = 0;
};

// G = sum_k gamma^(k-1) R_k over a finished episode's rewards.
double discounted_return(std::span<const double> rewards, double gamma);

struct TraceRecord {
  Date date;
  int action = 0;
  double reward = 0;
  double wealth = 0;
  double raw_return = 0;
};

void write_trace_csv(std::ostream& out, std::span<const TraceRecord> records);

}  // namespace drltrade

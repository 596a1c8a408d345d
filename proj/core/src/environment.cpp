#include "drltrade/environment.hpp"

#include <cmath>
#include <ostream>

#include "drltrade/errors.hpp"
#include "drltrade/num_format.hpp"

namespace drltrade {

TradingEnv::TradingEnv(FeatureMatrix features, EnvConfig config)
    : features_(std::move(features)), config_(config) {
  if (!(config_.drawdown_threshold > 0.0 && config_.drawdown_threshold < 1.0))
    throw Error("drawdown_threshold must be in (0,1)");
  if (config_.cost_bps < 0) throw Error("cost_bps must be >= 0");
  if (config_.initial_capital <= 0) throw Error("initial_capital must be > 0");
  first_state_ = static_cast<std::size_t>(features_.lookback) - 1;
  // one state plus one forward return
  if (features_.size() < static_cast<std::size_t>(features_.lookback) + 1)
    throw InsufficientHistoryError(static_cast<std::size_t>(features_.lookback) + 1,
                                   features_.size());
}

StateWindow TradingEnv::reset() {
  state_.t = first_state_;
  state_.wealth = config_.initial_capital;
  state_.prev_action = TradeAction{0};
  state_.done = false;
  return build_state(features_, state_.t, features_.lookback);
}

StepResult TradingEnv::step(TradeAction action) {
  if (state_.done) throw SteppedAfterDoneError();
  if (action.value < -1 || action.value > 1)
    throw Error("action value must be in {-1,0,1}");

  const std::size_t t = state_.t;
  const double r = features_.prices[t + 1] / features_.prices[t] - 1.0;
  const double a = static_cast<double>(action.value);
  const double prev = static_cast<double>(state_.prev_action.value);
  const double switch_cost = std::abs(a - prev) * config_.cost_bps;
  const double running_reward = r * a - switch_cost;

  state_.wealth = state_.wealth * (1.0 + r * a - switch_cost);
  state_.prev_action = action;

  StepResult out;
  out.info.raw_return = r;
  out.info.trade_cost = switch_cost;

  // Ruin first: if both terminal conditions hit at once the episode counts
  // as ruined, and the penalty replaces the running reward.
  if (state_.wealth <=
      (1.0 - config_.drawdown_threshold) * config_.initial_capital) {
    state_.done = true;
    out.reward = config_.ruin_penalty;
  } else if (t + 1 == features_.size() - 1) {
    state_.done = true;
    const double final_return = state_.wealth / config_.initial_capital - 1.0;
    const double mult = final_return < 0 ? config_.negative_terminal_multiplier
                                         : config_.terminal_multiplier;
    out.reward = running_reward + mult * final_return;
  } else {
    state_.t = t + 1;
    out.reward = running_reward;
    out.observation = build_state(features_, state_.t, features_.lookback);
  }
  out.done = state_.done;
  out.info.wealth = state_.wealth;
  return out;
}

double discounted_return(std::span<const double> rewards, double gamma) {
  double g = 0;
  double factor = 1;
  for (const double r : rewards) {
    g += factor * r;
    factor *= gamma;
  }
  return g;
}

void write_trace_csv(std::ostream& out, std::span<const TraceRecord> records) {
  out << "date,action,reward,wealth,r_t\n";
  for (const auto& rec : records) {
    out << rec.date.to_string() << ',' << rec.action << ','
        << format_sig10(rec.reward) << ',' << format_sig10(rec.wealth) << ','
        << format_sig10(rec.raw_return) << '\n';
  }
}

}  // namespace drltrade

#pragma once

#include <filesystem>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "drltrade/agents.hpp"
#include "drltrade/environment.hpp"

namespace drltrade {

struct BacktestRecord {
  Date date;        // decision day
  int action = 0;   // -1/0/+1
  double reward = 0;
  double wealth = 0;      // after the step
  double raw_return = 0;  // r(t)
};

struct BacktestSummary {
  double final_wealth = 0;
  double total_return = 0;
  double max_drawdown = 0;
  long num_trades = 0;  // days where the action differs from the previous one
  long num_buy = 0;
  long num_sell = 0;
  long num_hold = 0;
};

struct BacktestReport {
  std::string asset_id;
  std::string agent_kind;
  double initial_capital = 0;
  std::vector<BacktestRecord> records;
  std::vector<Date> wealth_dates;     // leading reset day, then post-step days
  std::vector<double> wealth_series;  // starts at initial_capital
  BacktestSummary summary;
};

// Deterministic stateful policy over observations; returns an action index.
using PolicyFn = std::function<int(const StateWindow&)>;

BacktestReport run_backtest(const PolicyFn& policy, const FeatureMatrix& features,
                            const EnvConfig& config, std::string asset_id,
                            std::string agent_kind);

// Greedy replay of a trained agent (argmax Q / argmax pi, no exploration).
BacktestReport run_backtest(const Agent& agent, const FeatureMatrix& features,
                            const EnvConfig& config);

// "long" | "flat" | "random"; the seed only matters for "random".
PolicyFn baseline_policy(std::string_view name, std::uint64_t seed = 0);

// total return, running-peak drawdown and trade counts. The wealth span
// includes the leading initial-capital entry; actions start from a flat book.
BacktestSummary compute_metrics(std::span<const double> wealth, std::span<const int> actions);

// signals.csv, wealth.csv, summary.json and trace.csv under `dir`.
void emit_report(const BacktestReport& report, const std::filesystem::path& dir);

}  // namespace drltrade

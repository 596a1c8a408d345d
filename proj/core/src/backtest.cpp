#include "drltrade/backtest.hpp"

#include <fstream>
#include <memory>

#include "drltrade/errors.hpp"
#include "drltrade/num_format.hpp"
#include "drltrade/rng.hpp"
#include "json.hpp"

namespace drltrade {

BacktestReport run_backtest(const PolicyFn& policy, const FeatureMatrix& features,
                            const EnvConfig& config, std::string asset_id,
                            std::string agent_kind) {
  TradingEnv env(features, config);
  BacktestReport report;
  report.asset_id = std::move(asset_id);
  report.agent_kind = std::move(agent_kind);
  report.initial_capital = config.initial_capital;

  StateWindow obs = env.reset();
  report.wealth_dates.push_back(features.dates[env.state().t]);
  report.wealth_series.push_back(config.initial_capital);

  bool done = false;
  while (!done) {
    const std::size_t t = env.state().t;
    const int action_idx = policy(obs);
    const StepResult res = env.step(TradeAction::from_index(action_idx));

    BacktestRecord rec;
    rec.date = features.dates[t];
    rec.action = action_idx - 1;
    rec.reward = res.reward;
    rec.wealth = res.info.wealth;
    rec.raw_return = res.info.raw_return;
    report.records.push_back(rec);

    report.wealth_dates.push_back(features.dates[t + 1]);
    report.wealth_series.push_back(res.info.wealth);

    done = res.done;
    if (!done) obs = *res.observation;
  }

  std::vector<int> actions;
  actions.reserve(report.records.size());
  for (const auto& r : report.records) actions.push_back(r.action);
  report.summary = compute_metrics(report.wealth_series, actions);
  return report;
}

BacktestReport run_backtest(const Agent& agent, const FeatureMatrix& features,
                            const EnvConfig& config) {
  const int expected = features.lookback * FeatureRow::kCount;
  if (agent.input_dim != expected)
    throw ShapeMismatchError("checkpoint expects input dim " +
                             std::to_string(agent.input_dim) + " but features produce " +
                             std::to_string(expected));
  PolicyFn policy = [&agent](const StateWindow& s) { return greedy_action_index(agent, s); };
  return run_backtest(policy, features, config, features.asset_id,
                      std::string(to_string(agent.config.kind)));
}

PolicyFn baseline_policy(std::string_view name, std::uint64_t seed) {
  if (name == "long") return [](const StateWindow&) { return 2; };
  if (name == "flat") return [](const StateWindow&) { return 1; };
  if (name == "random") {
    auto rng = std::make_shared<Rng>(seed);
    return [rng](const StateWindow&) { return static_cast<int>(rng->uniform_index(3)); };
  }
  throw Error("unknown baseline '" + std::string(name) + "' (long|flat|random)");
}

BacktestSummary compute_metrics(std::span<const double> wealth, std::span<const int> actions) {
  if (wealth.empty()) throw EmptySeriesError("wealth series is empty");

  BacktestSummary s;
  s.final_wealth = wealth.back();
  s.total_return = wealth.back() / wealth.front() - 1.0;

  double peak = wealth.front();
  for (const double w : wealth) {
    peak = std::max(peak, w);
    s.max_drawdown = std::max(s.max_drawdown, (peak - w) / peak);
  }

  int prev = 0;  // the book starts flat
  for (const int a : actions) {
    if (a != prev) ++s.num_trades;
    prev = a;
    if (a > 0)
      ++s.num_buy;
    else if (a < 0)
      ++s.num_sell;
    else
      ++s.num_hold;
  }
  return s;
}

namespace {

void write_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path.string());
  out << content;
  if (!out) throw IoError("write failed for " + path.string());
}

}  // namespace

void emit_report(const BacktestReport& report, const std::filesystem::path& dir) {
  if (report.records.empty()) throw EmptySeriesError("report has no records");
  std::filesystem::create_directories(dir);

  std::string signals = "date,action\n";
  for (const auto& r : report.records)
    signals += r.date.to_string() + ',' + std::to_string(r.action) + '\n';
  write_file(dir / "signals.csv", signals);

  std::string wealth = "date,wealth\n";
  for (std::size_t i = 0; i < report.wealth_series.size(); ++i)
    wealth += report.wealth_dates[i].to_string() + ',' +
              format_sig10(report.wealth_series[i]) + '\n';
  write_file(dir / "wealth.csv", wealth);

  nlohmann::json j{{"schema_version", 1},
                   {"asset_id", report.asset_id},
                   {"agent", report.agent_kind},
                   {"initial_capital", report.initial_capital},
                   {"final_wealth", report.summary.final_wealth},
                   {"total_return", report.summary.total_return},
                   {"max_drawdown", report.summary.max_drawdown},
                   {"num_trades", report.summary.num_trades},
                   {"num_buy", report.summary.num_buy},
                   {"num_sell", report.summary.num_sell},
                   {"num_hold", report.summary.num_hold}};
  write_file(dir / "summary.json", j.dump(2) + "\n");

  std::vector<TraceRecord> trace;
  trace.reserve(report.records.size());
  for (const auto& r : report.records)
    trace.push_back({r.date, r.action, r.reward, r.wealth, r.raw_return});
  std::ofstream out(dir / "trace.csv", std::ios::binary);
  if (!out) throw IoError("cannot write " + (dir / "trace.csv").string());
  write_trace_csv(out, trace);
}

}  // namespace drltrade

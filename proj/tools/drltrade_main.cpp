// drltrade: desk-scale deep-RL trading engine.
//
// Subcommands: ingest, features dump, train, backtest, experiment.
// Exit codes: 0 ok, 2 usage/input error, 3 runtime error, 4 partial
// experiment failure.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "drltrade/backtest.hpp"
#include "drltrade/errors.hpp"
#include "drltrade/experiment.hpp"
#include "drltrade/num_format.hpp"

namespace {

using namespace drltrade;

constexpr int kExitOk = 0;
constexpr int kExitUsage = 2;
constexpr int kExitRuntime = 3;
constexpr int kExitPartial = 4;

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path);
  out << content;
  if (!out) throw IoError("write failed for " + path);
}

// --seed flag wins, then DRLTRADE_SEED, then whatever the config carries.
void apply_seed(std::uint64_t& seed, std::int64_t flag_value) {
  if (flag_value >= 0) {
    seed = static_cast<std::uint64_t>(flag_value);
    return;
  }
  if (const char* env = std::getenv("DRLTRADE_SEED"))
    seed = static_cast<std::uint64_t>(std::strtoull(env, nullptr, 10));
}

int fail(const char* stage, const std::exception& e, int code) {
  std::cerr << "error [" << stage << "]: " << e.what() << "\n";
  return code;
}

struct IngestArgs {
  std::string input;
  std::string url_template;
  std::string symbol;
  std::string out;
};

int cmd_ingest(const IngestArgs& a) {
  try {
    std::string text;
    if (!a.input.empty())
      text = read_file(a.input);
    else if (!a.url_template.empty())
      text = fetch_csv(a.url_template, a.symbol);
    else
      throw Error("need --input or --url-template");

    const ParseResult parsed = parse_csv(text, a.symbol);
    write_file(a.out, serialize_csv(parsed.series));
    std::cout << "rows=" << parsed.series.size() << " dropped=" << parsed.rows_dropped
              << "\n";
    return kExitOk;
  } catch (const std::exception& e) {
    return fail("ingest", e, kExitUsage);
  }
}

struct FeaturesArgs {
  std::string input;
  std::string out;
  std::string price_field = "adj_close";
};

int cmd_features_dump(const FeaturesArgs& a) {
  PriceSeries series;
  FeatureConfig cfg;
  try {
    cfg.price_field = price_field_from_string(a.price_field);
    series = parse_csv(read_file(a.input)).series;
  } catch (const std::exception& e) {
    return fail("features", e, kExitUsage);
  }
  try {
    const FeatureMatrix fm = build_features(series, cfg);
    if (a.out.empty()) {
      write_features_csv(std::cout, fm);
    } else {
      std::ofstream out(a.out, std::ios::binary);
      if (!out) throw IoError("cannot write " + a.out);
      write_features_csv(out, fm);
    }
    return kExitOk;
  } catch (const std::exception& e) {
    return fail("features", e, kExitRuntime);
  }
}

struct TrainArgs {
  std::string config;
  std::string agent = "dqn";
  std::string data;
  std::string out = "out";
  std::int64_t seed = -1;
  int episodes = -1;
  double train_fraction = -1;  // <0: keep the config value
  bool no_split = false;
};

int cmd_train(const TrainArgs& a) {
  RunConfig cfg;
  FeatureMatrix train_features;
  try {
    if (!a.config.empty()) cfg = load_run_config(a.config);
    if (!a.data.empty()) cfg.assets = {AssetSpec{"", a.data, ""}};
    if (cfg.assets.empty()) throw Error("need --data or a config with assets");
    cfg.agent.kind = agent_kind_from_string(a.agent);
    apply_seed(cfg.agent.seed, a.seed);
    if (a.episodes >= 0) cfg.agent.episodes = a.episodes;
    if (a.train_fraction >= 0) cfg.train_fraction = a.train_fraction;

    const PriceSeries series = load_series(cfg.assets.front(), cfg);
    if (a.no_split) {
      train_features = build_features(series, cfg.features);
    } else {
      train_features = features_for_split(series, cfg).train;
    }
  } catch (const std::exception& e) {
    return fail("train-setup", e, kExitUsage);
  }

  try {
    std::filesystem::create_directories(a.out);
    save_run_config(cfg, std::filesystem::path(a.out) / "config_snapshot.json");

    TrainingLog log;
    const Agent agent = train_agent(train_features, cfg.env, cfg.agent, &log);
    save_agent(agent, std::filesystem::path(a.out) / "checkpoint.json");

    std::ofstream out(std::filesystem::path(a.out) / "training_log.csv", std::ios::binary);
    if (!out) throw IoError("cannot write training log");
    write_training_log_csv(out, log);

    std::cout << "episodes=" << log.size() << " checkpoint=" << a.out
              << "/checkpoint.json\n";
    return kExitOk;
  } catch (const std::exception& e) {
    return fail("train", e, kExitRuntime);
  }
}

struct BacktestArgs {
  std::string config;
  std::string checkpoint;
  std::string data;
  std::string baseline;
  std::string out = "out";
  std::string segment = "all";  // all|train|test
  double train_fraction = -1;  // <0: keep the config value
  std::int64_t seed = -1;
  double cost_bps = -1;
};

int cmd_backtest(const BacktestArgs& a) {
  RunConfig cfg;
  FeatureMatrix features;
  try {
    if (!a.config.empty()) cfg = load_run_config(a.config);
    if (a.data.empty()) throw Error("need --data");
    if (a.checkpoint.empty() && a.baseline.empty())
      throw Error("need --checkpoint or --baseline");
    if (a.cost_bps >= 0) cfg.env.cost_bps = a.cost_bps;
    if (a.train_fraction >= 0) cfg.train_fraction = a.train_fraction;

    const PriceSeries series = load_series(AssetSpec{"", a.data, ""}, cfg);
    if (a.segment == "all") {
      features = build_features(series, cfg.features);
    } else if (a.segment == "train") {
      features = features_for_split(series, cfg).train;
    } else if (a.segment == "test") {
      features = features_for_split(series, cfg).test;
    } else {
      throw Error("unknown segment '" + a.segment + "' (all|train|test)");
    }
    features.asset_id = series.asset_id;
  } catch (const std::exception& e) {
    return fail("backtest-setup", e, kExitUsage);
  }

  try {
    BacktestReport report;
    if (!a.baseline.empty()) {
      std::uint64_t seed = 0;
      apply_seed(seed, a.seed);
      report = run_backtest(baseline_policy(a.baseline, seed), features, cfg.env,
                            features.asset_id, "baseline-" + a.baseline);
    } else {
      const Agent agent = load_agent(a.checkpoint);
      report = run_backtest(agent, features, cfg.env);
    }
    emit_report(report, a.out);
    std::cout << "final_wealth=" << format_sig10(report.summary.final_wealth)
              << " total_return=" << format_sig10(report.summary.total_return)
              << " max_drawdown=" << format_sig10(report.summary.max_drawdown)
              << " trades=" << report.summary.num_trades << "\n";
    return kExitOk;
  } catch (const std::exception& e) {
    return fail("backtest", e, kExitRuntime);
  }
}

struct ExperimentArgs {
  std::string config;
  std::string out;
  int jobs = 1;
};

int cmd_experiment(const ExperimentArgs& a) {
  RunConfig cfg;
  try {
    cfg = load_run_config(a.config);
  } catch (const std::exception& e) {
    return fail("experiment-setup", e, kExitUsage);
  }

  try {
    const std::filesystem::path out_dir = a.out.empty() ? cfg.out_dir : a.out;
    const ExperimentResult result = run_experiment(cfg, out_dir, a.jobs);
    for (const auto& c : result.cells) {
      std::cout << c.asset << "/" << c.agent << "/seed" << c.seed << ": " << c.status;
      if (c.status == "ok")
        std::cout << " final_wealth=" << format_sig10(c.summary.final_wealth);
      else
        std::cout << " (" << c.error << ")";
      std::cout << "\n";
    }
    std::cout << "matrix=" << (out_dir / "matrix.csv").string() << "\n";
    return result.all_ok ? kExitOk : kExitPartial;
  } catch (const std::exception& e) {
    return fail("experiment", e, kExitRuntime);
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"deep-RL cryptocurrency trading engine"};
  app.require_subcommand(1);

  IngestArgs ingest;
  auto* cmd_in = app.add_subcommand("ingest", "parse, validate and normalize an OHLCV CSV");
  cmd_in->add_option("--input", ingest.input, "local CSV file");
  cmd_in->add_option("--url-template", ingest.url_template,
                     "http URL with {symbol} placeholder");
  cmd_in->add_option("--symbol", ingest.symbol, "asset symbol, e.g. XRP-USD");
  cmd_in->add_option("--out", ingest.out, "normalized series output path")->required();

  FeaturesArgs feat;
  auto* cmd_f = app.add_subcommand("features", "feature-matrix utilities");
  cmd_f->require_subcommand(1);
  auto* cmd_fd = cmd_f->add_subcommand("dump", "write the per-day feature CSV");
  cmd_fd->add_option("--input", feat.input, "series CSV")->required();
  cmd_fd->add_option("--out", feat.out, "output CSV (default stdout)");
  cmd_fd->add_option("--price-field", feat.price_field, "adj_close|close");

  TrainArgs train;
  auto* cmd_t = app.add_subcommand("train", "train one agent on the train split");
  cmd_t->add_option("--config", train.config, "run-config JSON");
  cmd_t->add_option("--agent", train.agent, "dqn|ddqn|dueling|a2c");
  cmd_t->add_option("--data", train.data, "series CSV");
  cmd_t->add_option("--seed", train.seed, "rng seed (fallback: DRLTRADE_SEED)");
  cmd_t->add_option("--episodes", train.episodes, "training episodes");
  cmd_t->add_option("--train-fraction", train.train_fraction, "chronological split");
  cmd_t->add_flag("--no-split", train.no_split, "train on the full series");
  cmd_t->add_option("--out", train.out, "output directory");

  BacktestArgs bt;
  auto* cmd_b = app.add_subcommand("backtest", "greedy replay of a checkpoint or baseline");
  cmd_b->add_option("--config", bt.config, "run-config JSON for feature/env parameters");
  cmd_b->add_option("--checkpoint", bt.checkpoint, "agent checkpoint JSON");
  cmd_b->add_option("--data", bt.data, "series CSV")->required();
  cmd_b->add_option("--baseline", bt.baseline, "long|flat|random");
  cmd_b->add_option("--segment", bt.segment, "all|train|test (default all)");
  cmd_b->add_option("--train-fraction", bt.train_fraction, "chronological split");
  cmd_b->add_option("--seed", bt.seed, "seed for --baseline random");
  cmd_b->add_option("--cost-bps", bt.cost_bps, "transaction cost override");
  cmd_b->add_option("--out", bt.out, "output directory");

  ExperimentArgs exp;
  auto* cmd_e = app.add_subcommand("experiment", "full asset x agent x seed matrix");
  cmd_e->add_option("--config", exp.config, "run-config JSON")->required();
  cmd_e->add_option("--out", exp.out, "output directory (default: config out_dir)");
  cmd_e->add_option("--jobs", exp.jobs, "parallel cells");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  if (cmd_in->parsed()) return cmd_ingest(ingest);
  if (cmd_f->parsed()) return cmd_features_dump(feat);
  if (cmd_t->parsed()) return cmd_train(train);
  if (cmd_b->parsed()) return cmd_backtest(bt);
  if (cmd_e->parsed()) return cmd_experiment(exp);
  return kExitUsage;
}

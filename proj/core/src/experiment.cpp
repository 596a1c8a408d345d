#include "drltrade/experiment.hpp"

#include <atomic>
#include <fstream>
#include <sstream>
#include <thread>

#include "drltrade/errors.hpp"
#include "drltrade/num_format.hpp"
#include "json.hpp"

namespace drltrade {

namespace {

using nlohmann::json;

json feature_config_to_json(const FeatureConfig& f) {
  return json{{"ewm_span", f.ewm_span},
              {"macd_short_halflife", f.macd_short},
              {"macd_long_halflife", f.macd_long},
              {"rsi_window", f.rsi_window},
              {"rsi_wilder", f.rsi_wilder},
              {"norm_close_window", f.norm_close_window},
              {"lookback", f.lookback},
              {"eps_sigma", f.eps_sigma},
              {"price_field", std::string(to_string(f.price_field))}};
}

FeatureConfig feature_config_from_json(const json& j) {
  FeatureConfig f;
  f.ewm_span = j.at("ewm_span").get<int>();
  f.macd_short = j.at("macd_short_halflife").get<int>();
  f.macd_long = j.at("macd_long_halflife").get<int>();
  f.rsi_window = j.at("rsi_window").get<int>();
  f.rsi_wilder = j.at("rsi_wilder").get<bool>();
  f.norm_close_window = j.at("norm_close_window").get<int>();
  f.lookback = j.at("lookback").get<int>();
  f.eps_sigma = j.at("eps_sigma").get<double>();
  f.price_field = price_field_from_string(j.at("price_field").get<std::string>());
  return f;
}

json env_config_to_json(const EnvConfig& e) {
  return json{{"cost_bps", e.cost_bps},
              {"initial_capital", e.initial_capital},
              {"drawdown_threshold", e.drawdown_threshold},
              {"ruin_penalty", e.ruin_penalty},
              {"terminal_multiplier", e.terminal_multiplier},
              {"negative_terminal_multiplier", e.negative_terminal_multiplier}};
}

EnvConfig env_config_from_json(const json& j) {
  EnvConfig e;
  e.cost_bps = j.at("cost_bps").get<double>();
  e.initial_capital = j.at("initial_capital").get<double>();
  e.drawdown_threshold = j.at("drawdown_threshold").get<double>();
  e.ruin_penalty = j.at("ruin_penalty").get<double>();
  e.terminal_multiplier = j.at("terminal_multiplier").get<double>();
  e.negative_terminal_multiplier = j.at("negative_terminal_multiplier").get<double>();
  return e;
}

json agent_config_to_json(const AgentConfig& c) {
  return json{{"kind", std::string(to_string(c.kind))},
              {"gamma", c.gamma},
              {"epsilon_start", c.epsilon.start},
              {"epsilon_end", c.epsilon.end},
              {"epsilon_decay_steps", c.epsilon.decay_steps},
              {"batch_size", c.batch_size},
              {"buffer_capacity", c.buffer_capacity},
              {"target_sync_every", c.target_sync_every},
              {"episodes", c.episodes},
              {"seed", c.seed},
              {"hidden", c.hidden},
              {"dueling_head_hidden", c.dueling_head_hidden},
              {"learning_rate", c.learning_rate},
              {"actor_learning_rate", c.actor_learning_rate},
              {"critic_learning_rate", c.critic_learning_rate},
              {"entropy_beta", c.entropy_beta},
              {"n_steps", c.n_steps}};
}

AgentConfig agent_config_from_json(const json& j) {
  AgentConfig c;
  c.kind = agent_kind_from_string(j.at("kind").get<std::string>());
  c.gamma = j.at("gamma").get<double>();
  c.epsilon.start = j.at("epsilon_start").get<double>();
  c.epsilon.end = j.at("epsilon_end").get<double>();
  c.epsilon.decay_steps = j.at("epsilon_decay_steps").get<long long>();
  c.batch_size = j.at("batch_size").get<int>();
  c.buffer_capacity = j.at("buffer_capacity").get<std::size_t>();
  c.target_sync_every = j.at("target_sync_every").get<long long>();
  c.episodes = j.at("episodes").get<int>();
  c.seed = j.at("seed").get<std::uint64_t>();
  c.hidden = j.at("hidden").get<std::vector<int>>();
  c.dueling_head_hidden = j.at("dueling_head_hidden").get<int>();
  c.learning_rate = j.at("learning_rate").get<double>();
  c.actor_learning_rate = j.at("actor_learning_rate").get<double>();
  c.critic_learning_rate = j.at("critic_learning_rate").get<double>();
  c.entropy_beta = j.at("entropy_beta").get<double>();
  c.n_steps = j.at("n_steps").get<int>();
  return c;
}

json run_config_to_json(const RunConfig& c) {
  json assets = json::array();
  for (const auto& a : c.assets)
    assets.push_back(json{{"symbol", a.symbol},
                          {"input", a.input_path},
                          {"url_template", a.url_template}});
  json agents = json::array();
  for (const auto k : c.agents) agents.push_back(std::string(to_string(k)));
  return json{{"format", "drltrade-config"},
              {"version", 1},
              {"train_fraction", c.train_fraction},
              {"features", feature_config_to_json(c.features)},
              {"env", env_config_to_json(c.env)},
              {"agent", agent_config_to_json(c.agent)},
              {"assets", assets},
              {"agents", agents},
              {"seeds", c.seeds},
              {"out_dir", c.out_dir}};
}

RunConfig run_config_from_json(const json& j) {
  RunConfig c;
  c.train_fraction = j.at("train_fraction").get<double>();
  c.features = feature_config_from_json(j.at("features"));
  c.env = env_config_from_json(j.at("env"));
  c.agent = agent_config_from_json(j.at("agent"));
  c.assets.clear();
  for (const auto& ja : j.at("assets")) {
    AssetSpec a;
    a.symbol = ja.at("symbol").get<std::string>();
    a.input_path = ja.value("input", "");
    a.url_template = ja.value("url_template", "");
    c.assets.push_back(std::move(a));
  }
  c.agents.clear();
  for (const auto& jk : j.at("agents"))
    c.agents.push_back(agent_kind_from_string(jk.get<std::string>()));
  c.seeds = j.at("seeds").get<std::vector<std::uint64_t>>();
  c.out_dir = j.at("out_dir").get<std::string>();
  if (c.seeds.empty()) throw Error("config needs at least one seed");
  return c;
}

}  // namespace

RunConfig load_run_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read config " + path.string());
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw IoError("bad config " + path.string() + ": " + e.what());
  }
  try {
    return run_config_from_json(j);
  } catch (const json::exception& e) {
    throw Error("bad config " + path.string() + ": " + e.what());
  }
}

void save_run_config(const RunConfig& config, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write config " + path.string());
  out << run_config_to_json(config).dump(2) << '\n';
  if (!out) throw IoError("write failed for " + path.string());
}

PriceSeries load_series(const AssetSpec& asset, const RunConfig& config) {
  (void)config;
  std::string text;
  if (!asset.input_path.empty()) {
    std::ifstream in(asset.input_path, std::ios::binary);
    if (!in) throw IoError("cannot read " + asset.input_path);
    std::ostringstream ss;
    ss << in.rdbuf();
    text = ss.str();
  } else if (!asset.url_template.empty()) {
    text = fetch_csv(asset.url_template, asset.symbol);
  } else {
    throw Error("asset '" + asset.symbol + "' has neither input path nor url template");
  }
  return parse_csv(text, asset.symbol).series;
}

FeatureSplit features_for_split(const PriceSeries& series, const RunConfig& config) {
  const FeatureMatrix full = build_features(series, config.features);
  const std::size_t split = split_index(series.size(), config.train_fraction);
  return split_features(full, split);
}

CellResult run_cell(const RunConfig& config, const AssetSpec& asset, AgentKind kind,
                    std::uint64_t seed, const std::filesystem::path& cell_dir) {
  CellResult cell;
  cell.asset = asset.symbol;
  cell.agent = std::string(to_string(kind));
  cell.seed = seed;
  try {
    std::filesystem::create_directories(cell_dir);

    RunConfig cfg = config;
    cfg.agent.kind = kind;
    cfg.agent.seed = seed;
    save_run_config(cfg, cell_dir / "config_snapshot.json");

    const PriceSeries series = load_series(asset, cfg);
    const FeatureSplit split = features_for_split(series, cfg);

    TrainingLog log;
    const Agent agent = train_agent(split.train, cfg.env, cfg.agent, &log);
    save_agent(agent, cell_dir / "checkpoint.json");
    {
      std::ofstream out(cell_dir / "training_log.csv", std::ios::binary);
      if (!out) throw IoError("cannot write training log");
      write_training_log_csv(out, log);
    }

    const BacktestReport report = run_backtest(agent, split.test, cfg.env);
    emit_report(report, cell_dir);

    cell.summary = report.summary;
    cell.status = "ok";
  } catch (const std::exception& e) {
    cell.status = "error";
    cell.error = e.what();
  }
  return cell;
}

ExperimentResult run_experiment(const RunConfig& config,
                                const std::filesystem::path& out_dir, int jobs) {
  if (config.assets.empty()) throw Error("config lists no assets");
  if (config.agents.empty()) throw Error("config lists no agents");
  if (config.seeds.empty()) throw Error("config lists no seeds");

  struct CellSpec {
    const AssetSpec* asset;
    AgentKind kind;
    std::uint64_t seed;
    std::filesystem::path dir;
  };
  std::vector<CellSpec> specs;
  for (const auto& asset : config.assets)
    for (const auto kind : config.agents)
      for (const auto seed : config.seeds)
        specs.push_back({&asset, kind, seed,
                         out_dir / asset.symbol / std::string(to_string(kind)) /
                             ("seed" + std::to_string(seed))});

  ExperimentResult result;
  result.cells.resize(specs.size());

  const int n_jobs = std::max(1, jobs);
  if (n_jobs == 1) {
    for (std::size_t i = 0; i < specs.size(); ++i)
      result.cells[i] =
          run_cell(config, *specs[i].asset, specs[i].kind, specs[i].seed, specs[i].dir);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> workers;
    for (int w = 0; w < n_jobs; ++w) {
      workers.emplace_back([&] {
        while (true) {
          const std::size_t i = next.fetch_add(1);
          if (i >= specs.size()) return;
          result.cells[i] =
              run_cell(config, *specs[i].asset, specs[i].kind, specs[i].seed, specs[i].dir);
        }
      });
    }
    for (auto& t : workers) t.join();
  }

  for (const auto& c : result.cells)
    if (c.status != "ok") result.all_ok = false;

  std::filesystem::create_directories(out_dir);
  std::ofstream out(out_dir / "matrix.csv", std::ios::binary);
  if (!out) throw IoError("cannot write matrix.csv");
  write_matrix_csv(out, result);
  return result;
}

void write_matrix_csv(std::ostream& out, const ExperimentResult& result) {
  out << "asset,agent,seed,status,final_wealth,total_return,max_drawdown,trades\n";
  for (const auto& c : result.cells) {
    out << c.asset << ',' << c.agent << ',' << c.seed << ',' << c.status;
    if (c.status == "ok") {
      out << ',' << format_sig10(c.summary.final_wealth) << ','
          << format_sig10(c.summary.total_return) << ','
          << format_sig10(c.summary.max_drawdown) << ',' << c.summary.num_trades;
    } else {
      out << ",,,,";
    }
    out << '\n';
  }
}

}  // namespace drltrade

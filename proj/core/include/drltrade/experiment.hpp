#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "drltrade/agents.hpp"
#include "drltrade/backtest.hpp"
#include "drltrade/features.hpp"
#include "drltrade/market_data.hpp"

namespace drltrade {

struct AssetSpec {
  std::string symbol;
  std::string input_path;     // local CSV; preferred when set
  std::string url_template;   // fetch fallback
};

// Every knob the engine exposes, all defaults explicit once saved. One file
// drives ingest -> features -> train -> backtest for a whole asset x agent x
// seed matrix.
struct RunConfig {
  double train_fraction = 0.9;
  FeatureConfig features;
  EnvConfig env;
  AgentConfig agent;  // per-cell kind/seed overwritten by the matrix axes
  std::vector<AssetSpec> assets;
  std::vector<AgentKind> agents = {AgentKind::dqn, AgentKind::ddqn, AgentKind::dueling,
                                   AgentKind::a2c};
  std::vector<std::uint64_t> seeds = {0};
  std::string out_dir = "out";
};

RunConfig load_run_config(const std::filesystem::path& path);
void save_run_config(const RunConfig& config, const std::filesystem::path& path);

struct CellResult {
  std::string asset;
  std::string agent;
  std::uint64_t seed = 0;
  std::string status;  // "ok" | "error"
  std::string error;
  BacktestSummary summary;
};

struct ExperimentResult {
  std::vector<CellResult> cells;
  bool all_ok = true;
};

// Train-and-backtest for one cell; writes checkpoint.json, training_log.csv,
// config_snapshot.json and the report files under cell_dir.
CellResult run_cell(const RunConfig& config, const AssetSpec& asset, AgentKind kind,
                    std::uint64_t seed, const std::filesystem::path& cell_dir);

// The full matrix, cells in deterministic order; `jobs` > 1 runs cells in
// parallel threads (outputs are per-cell, so results are identical).
ExperimentResult run_experiment(const RunConfig& config,
                                const std::filesystem::path& out_dir, int jobs = 1);

void write_matrix_csv(std::ostream& out, const ExperimentResult& result);

// Shared pipeline pieces.
PriceSeries load_series(const AssetSpec& asset, const RunConfig& config);
FeatureSplit features_for_split(const PriceSeries& series, const RunConfig& config);

}  // namespace drltrade

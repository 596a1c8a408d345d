#include <benchmark/benchmark.h>

#include "drltrade/agents.hpp"
#include "drltrade/backtest.hpp"
#include "drltrade/features.hpp"
#include "test_util.hpp"

using namespace drltrade;

namespace {

static void BM_BuildFeatures(benchmark::State& state) {
  const auto series = testutil::gbm_series(static_cast<std::size_t>(state.range(0)), 17);
  for (auto _ : state) {
    auto fm = build_features(series);
    benchmark::DoNotOptimize(fm);
  }
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_BuildFeatures)->Arg(600)->Arg(1257)->Arg(2923)->Complexity();

static void BM_MlpForward(benchmark::State& state) {
  Rng rng(1);
  const MlpParams net = make_mlp({420, 64, 64, 3}, rng);
  std::vector<double> input(420);
  for (auto& v : input) v = rng.uniform(-1, 1);
  for (auto _ : state) {
    auto out = forward(net, input);
    benchmark::DoNotOptimize(out);
  }
}
BENCHMARK(BM_MlpForward);

static void BM_MlpForwardBackward(benchmark::State& state) {
  Rng rng(2);
  MlpParams net = make_mlp({420, 64, 64, 3}, rng);
  MlpGrads grads = make_grads(net);
  std::vector<double> input(420);
  for (auto& v : input) v = rng.uniform(-1, 1);
  const std::vector<double> dout = {1.0, 0.0, -1.0};
  for (auto _ : state) {
    ForwardCache cache;
    auto out = forward(net, input, &cache);
    benchmark::DoNotOptimize(out);
    zero_grads(grads);
    auto din = backward(net, cache, dout, grads);
    benchmark::DoNotOptimize(din);
  }
}
BENCHMARK(BM_MlpForwardBackward);

static void BM_DuelingForward(benchmark::State& state) {
  Rng rng(3);
  const DuelingParams net = make_dueling(420, {64, 64}, 32, 3, rng);
  std::vector<double> input(420);
  for (auto& v : input) v = rng.uniform(-1, 1);
  for (auto _ : state) {
    auto out = dueling_forward(net, input);
    benchmark::DoNotOptimize(out);
  }
}
BENCHMARK(BM_DuelingForward);

static void BM_QTrainStep(benchmark::State& state) {
  const auto fm = testutil::synthetic_features(128, 5, 60);
  AgentConfig cfg;
  cfg.kind = AgentKind::dqn;
  cfg.batch_size = static_cast<int>(state.range(0));
  Agent agent = make_agent(cfg, 420);
  TrainState ts(agent);

  Rng rng(7);
  std::vector<Transition> batch;
  for (int i = 0; i < cfg.batch_size; ++i) {
    Transition t;
    t.state = build_state(fm, 59 + static_cast<std::size_t>(i % 60), 60);
    t.action_index = static_cast<int>(rng.uniform_index(3));
    t.reward = rng.uniform(-0.01, 0.01);
    t.done = i % 8 == 0;
    if (!t.done) t.next_state = build_state(fm, 60 + static_cast<std::size_t>(i % 60), 60);
    batch.push_back(std::move(t));
  }
  for (auto _ : state) {
    const double loss = q_train_step(agent, ts, batch);
    benchmark::DoNotOptimize(loss);
  }
}
BENCHMARK(BM_QTrainStep)->Arg(16)->Arg(64);

static void BM_EnvEpisode(benchmark::State& state) {
  const auto fm = testutil::synthetic_features(400, 9, 60, 0.0005, 0.01);
  for (auto _ : state) {
    TradingEnv env(fm, EnvConfig{});
    env.reset();
    Rng rng(11);
    bool done = false;
    double total = 0;
    while (!done) {
      const auto res = env.step(TradeAction{static_cast<int>(rng.uniform_index(3)) - 1});
      total += res.reward;
      done = res.done;
    }
    benchmark::DoNotOptimize(total);
  }
}
BENCHMARK(BM_EnvEpisode);

static void BM_GreedyBacktest(benchmark::State& state) {
  const auto fm = testutil::synthetic_features(400, 13, 60, 0.0005, 0.01);
  AgentConfig cfg;
  cfg.kind = AgentKind::dqn;
  const Agent agent = make_agent(cfg, 420);
  for (auto _ : state) {
    auto report = run_backtest(agent, fm, EnvConfig{});
    benchmark::DoNotOptimize(report);
  }
}
BENCHMARK(BM_GreedyBacktest);

}  // namespace

BENCHMARK_MAIN();

#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "drltrade/environment.hpp"
#include "drltrade/neural.hpp"

namespace drltrade {

enum class AgentKind { dqn, ddqn, dueling, a2c };

AgentKind agent_kind_from_string(std::string_view name);
std::string_view to_string(AgentKind kind);

struct EpsilonSchedule {
  double start = 1.0;
  double end = 0.05;
  long long decay_steps = 10000;

  // Linear in gradient steps, clamped at `end`.
  double at(long long gradient_step) const;
};

struct AgentConfig {
  AgentKind kind = AgentKind::dqn;
  double gamma = 0.99;
  EpsilonSchedule epsilon;
  int batch_size = 64;
  std::size_t buffer_capacity = 50000;
  long long target_sync_every = 500;  // gradient steps between hard syncs
  int episodes = 10;
  std::uint64_t seed = 0;

  std::vector<int> hidden = {64, 64};
  int dueling_head_hidden = 32;
  double learning_rate = 1e-4;         // value nets
  double actor_learning_rate = 3e-4;   // a2c
  double critic_learning_rate = 3e-4;  // a2c
  double entropy_beta = 0.01;          // a2c entropy bonus, 0 disables
  int n_steps = 16;                    // a2c rollout length
};

struct Transition {
  StateWindow state;
  int action_index = 0;  // 0/1/2 -> -1/0/+1
  double reward = 0;
  std::optional<StateWindow> next_state;  // absent iff done
  bool done = false;
};

// FIFO ring of the most recent `capacity` transitions.
class ReplayBuffer {
 public:
  explicit ReplayBuffer(std::size_t capacity);

  void push(Transition t);
  std::size_t size() const { return storage_.size(); }
  std::size_t capacity() const { return capacity_; }
  std::size_t inserted() const { return inserted_; }

  // i in insertion order, 0 = oldest retained.
  const Transition& operator[](std::size_t i) const;

 private:
  std::size_t capacity_;
  std::vector<Transition> storage_;
  std::size_t next_ = 0;
  std::size_t inserted_ = 0;
};

// Online/target function approximator: plain MLP or dueling net.
using QNet = std::variant<MlpParams, DuelingParams>;

std::vector<double> q_forward(const QNet& net, std::span<const double> input);

struct Agent {
  AgentConfig config;
  int input_dim = 0;

  // value-based (dqn/ddqn/dueling)
  QNet online;
  QNet target;

  // a2c
  MlpParams actor;
  MlpParams critic;

  long long gradient_steps = 0;  // epsilon-schedule position

  bool is_value_based() const { return config.kind != AgentKind::a2c; }
  double epsilon() const { return config.epsilon.at(gradient_steps); }
};

// Fresh agent with seeded Glorot initialization; target starts equal to online.
Agent make_agent(const AgentConfig& config, int input_dim);

// Network input encoding: row-major flatten of the lookback x 7 window with
// RSI rescaled from [0,100] to [-1,1] and everything clamped to [-10,10] so
// degenerate zero-volatility stretches cannot blow up the net.
std::vector<double> encode_state(const StateWindow& state);

// y = r, or r + gamma * max_a Q_target(s', a).
double dqn_target(const QNet& target, double reward, const StateWindow& next_state,
                  bool done, double gamma);
// y = r, or r + gamma * Q_target(s', argmax_a Q_online(s', a)).
double ddqn_target(const QNet& online, const QNet& target, double reward,
                   const StateWindow& next_state, bool done, double gamma);

// Greedy on q with lowest-index tie break, uniform with probability epsilon.
int epsilon_greedy(std::span<const double> q_values, double epsilon, Rng& rng);

int argmax_lowest(std::span<const double> values);

struct TrainState;  // optimizer + buffer internals, owned by the trainer

// One semi-gradient step on the batch: targets are constants, MSE on the
// taken action's Q, one Adam step. Returns the pre-step loss.
double q_train_step(Agent& agent, TrainState& ts, std::span<const Transition> batch);

// adv = r + gamma * v(s') * (1 - done) - v(s).
double a2c_advantage(double reward, double v_s, double v_s_next, bool done, double gamma);

struct A2cLosses {
  double actor = 0;
  double critic = 0;
};

// Policy-gradient step with constant advantages plus entropy bonus, and a
// TD-error critic step with gradients through both v(s) and v(s').
A2cLosses a2c_train_step(Agent& agent, TrainState& ts, std::span<const Transition> rollout);

// Hard copy online -> target. NotApplicable for a2c.
void sync_target(Agent& agent);

struct EpisodeLogEntry {
  int episode = 0;
  double total_reward = 0;
  double final_wealth = 0;
  double epsilon = 0;
  double mean_loss = 0;
};

using TrainingLog = std::vector<EpisodeLogEntry>;

void write_training_log_csv(std::ostream& out, const TrainingLog& log);

// Full training run over the feature matrix; deterministic in
// (seed, data, config).
Agent train_agent(const FeatureMatrix& features, const EnvConfig& env_config,
                  const AgentConfig& agent_config, TrainingLog* log = nullptr);

// Greedy head: argmax Q for value agents, argmax pi for a2c.
int greedy_action_index(const Agent& agent, const StateWindow& state);

// Exposed for training-internals tests and custom loops.
struct TrainState {
  Rng rng;
  ReplayBuffer buffer;
  // value nets
  std::optional<AdamState> mlp_opt;
  std::optional<DuelingAdamState> dueling_opt;
  // a2c
  std::optional<AdamState> actor_opt;
  std::optional<AdamState> critic_opt;

  explicit TrainState(const Agent& agent);
};

// Versioned JSON agent checkpoint: config + nets + schedule position.
void save_agent(const Agent& agent, const std::filesystem::path& path);
Agent load_agent(const std::filesystem::path& path);

}  // namespace drltrade

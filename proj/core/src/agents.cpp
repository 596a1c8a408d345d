#include "drltrade/agents.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

#include "drltrade/errors.hpp"
#include "drltrade/num_format.hpp"

namespace drltrade {

AgentKind agent_kind_from_string(std::string_view name) {
  if (name == "dqn") return AgentKind::dqn;
  if (name == "ddqn") return AgentKind::ddqn;
  if (name == "dueling") return AgentKind::dueling;
  if (name == "a2c") return AgentKind::a2c;
  throw Error("unknown agent kind '" + std::string(name) + "' (dqn|ddqn|dueling|a2c)");
}

std::string_view to_string(AgentKind kind) {
  switch (kind) {
    case AgentKind::dqn: return "dqn";
    case AgentKind::ddqn: return "ddqn";
    case AgentKind::dueling: return "dueling";
    case AgentKind::a2c: return "a2c";
  }
  return "?";
}

double EpsilonSchedule::at(long long gradient_step) const {
  if (decay_steps <= 0) return end;
  const double frac = std::min(1.0, static_cast<double>(gradient_step) /
                                        static_cast<double>(decay_steps));
  return start + (end - start) * frac;
}

ReplayBuffer::ReplayBuffer(std::size_t capacity) : capacity_(capacity) {
  if (capacity_ == 0) throw Error("replay buffer capacity must be > 0");
  storage_.reserve(std::min<std::size_t>(capacity_, 4096));
}

void ReplayBuffer::push(Transition t) {
  if (storage_.size() < capacity_) {
    storage_.push_back(std::move(t));
  } else {
    storage_[next_] = std::move(t);
    next_ = (next_ + 1) % capacity_;
  }
  ++inserted_;
}

const Transition& ReplayBuffer::operator[](std::size_t i) const {
  if (i >= storage_.size()) throw Error("replay buffer index out of range");
  if (storage_.size() < capacity_) return storage_[i];
  return storage_[(next_ + i) % capacity_];
}

std::vector<double> q_forward(const QNet& net, std::span<const double> input) {
  if (const auto* mlp = std::get_if<MlpParams>(&net)) return forward(*mlp, input);
  return dueling_forward(std::get<DuelingParams>(net), input).q;
}

static constexpr int kNumActions = 3;

Agent make_agent(const AgentConfig& config, int input_dim) {
  if (!(config.gamma >= 0.0 && config.gamma <= 1.0))
    throw Error("gamma must be in [0,1]");
  if (!(config.epsilon.start >= config.epsilon.end && config.epsilon.start <= 1.0 &&
        config.epsilon.end >= 0.0))
    throw Error("epsilon schedule must satisfy 0 <= end <= start <= 1");
  if (config.batch_size < 1) throw Error("batch_size must be >= 1");
  if (config.n_steps < 1) throw Error("n_steps must be >= 1");
  if (input_dim < 1) throw ShapeMismatchError("input dim must be >= 1");

  Agent a;
  a.config = config;
  a.input_dim = input_dim;
  Rng rng(config.seed);

  if (config.kind == AgentKind::a2c) {
    std::vector<int> dims = {input_dim};
    dims.insert(dims.end(), config.hidden.begin(), config.hidden.end());
    dims.push_back(kNumActions);
    a.actor = make_mlp(dims, rng);
    dims.back() = 1;
    a.critic = make_mlp(dims, rng);
  } else if (config.kind == AgentKind::dueling) {
    a.online = make_dueling(input_dim, config.hidden, config.dueling_head_hidden,
                            kNumActions, rng);
    a.target = std::get<DuelingParams>(a.online);
  } else {
    std::vector<int> dims = {input_dim};
    dims.insert(dims.end(), config.hidden.begin(), config.hidden.end());
    dims.push_back(kNumActions);
    a.online = make_mlp(dims, rng);
    a.target = std::get<MlpParams>(a.online);
  }
  return a;
}

std::vector<double> encode_state(const StateWindow& state) {
  const Matrix& m = state.values;
  std::vector<double> x(m.data.size());
  for (int r = 0; r < m.rows; ++r) {
    for (int c = 0; c < m.cols; ++c) {
      double v = m.at(r, c);
      if (c == 6) v = (v - 50.0) / 50.0;  // rsi column
      x[static_cast<std::size_t>(r) * m.cols + c] = std::clamp(v, -10.0, 10.0);
    }
  }
  return x;
}

int argmax_lowest(std::span<const double> values) {
  int best = 0;
  for (std::size_t i = 1; i < values.size(); ++i)
    if (values[i] > values[static_cast<std::size_t>(best)]) best = static_cast<int>(i);
  return best;
}

double dqn_target(const QNet& target, double reward, const StateWindow& next_state,
                  bool done, double gamma) {
  if (done) return reward;
  const auto q = q_forward(target, encode_state(next_state));
  return reward + gamma * *std::max_element(q.begin(), q.end());
}

double ddqn_target(const QNet& online, const QNet& target, double reward,
                   const StateWindow& next_state, bool done, double gamma) {
  if (done) return reward;
  const auto x = encode_state(next_state);
  const auto q_online = q_forward(online, x);
  const auto q_target = q_forward(target, x);
  const int selected = argmax_lowest(q_online);
  return reward + gamma * q_target[static_cast<std::size_t>(selected)];
}

int epsilon_greedy(std::span<const double> q_values, double epsilon, Rng& rng) {
  if (epsilon > 0.0 && rng.uniform() < epsilon)
    return static_cast<int>(rng.uniform_index(q_values.size()));
  return argmax_lowest(q_values);
}

TrainState::TrainState(const Agent& agent)
    : rng(agent.config.seed + 1), buffer(agent.config.buffer_capacity) {
  if (agent.config.kind == AgentKind::a2c) {
    actor_opt = make_adam(agent.actor, agent.config.actor_learning_rate);
    critic_opt = make_adam(agent.critic, agent.config.critic_learning_rate);
  } else if (agent.config.kind == AgentKind::dueling) {
    dueling_opt = make_adam(std::get<DuelingParams>(agent.online), agent.config.learning_rate);
  } else {
    mlp_opt = make_adam(std::get<MlpParams>(agent.online), agent.config.learning_rate);
  }
}

double q_train_step(Agent& agent, TrainState& ts, std::span<const Transition> batch) {
  if (batch.empty()) throw EmptyBatchError();
  if (agent.config.kind == AgentKind::a2c)
    throw NotApplicableError("q_train_step applies to value-based agents");

  const double gamma = agent.config.gamma;
  const double n = static_cast<double>(batch.size());

  std::vector<double> targets(batch.size());
  for (std::size_t i = 0; i < batch.size(); ++i) {
    const Transition& tr = batch[i];
    const StateWindow dummy{};
    const StateWindow& next = tr.next_state ? *tr.next_state : dummy;
    targets[i] = agent.config.kind == AgentKind::ddqn
                     ? ddqn_target(agent.online, agent.target, tr.reward, next, tr.done, gamma)
                     : dqn_target(agent.target, tr.reward, next, tr.done, gamma);
  }

  double loss = 0;
  if (auto* mlp = std::get_if<MlpParams>(&agent.online)) {
    MlpGrads grads = make_grads(*mlp);
    for (std::size_t i = 0; i < batch.size(); ++i) {
      ForwardCache cache;
      const auto q = forward(*mlp, encode_state(batch[i].state), &cache);
      const double diff = q[static_cast<std::size_t>(batch[i].action_index)] - targets[i];
      loss += diff * diff;
      std::vector<double> dq(q.size(), 0.0);
      dq[static_cast<std::size_t>(batch[i].action_index)] = 2.0 * diff / n;
      backward(*mlp, cache, dq, grads);
    }
    adam_step(*mlp, grads, *ts.mlp_opt);
  } else {
    auto& duel = std::get<DuelingParams>(agent.online);
    DuelingGrads grads = make_grads(duel);
    for (std::size_t i = 0; i < batch.size(); ++i) {
      DuelingCache cache;
      const auto out = dueling_forward(duel, encode_state(batch[i].state), &cache);
      const double diff = out.q[static_cast<std::size_t>(batch[i].action_index)] - targets[i];
      loss += diff * diff;
      std::vector<double> dq(out.q.size(), 0.0);
      dq[static_cast<std::size_t>(batch[i].action_index)] = 2.0 * diff / n;
      dueling_backward(duel, cache, dq, grads);
    }
    adam_step(duel, grads, *ts.dueling_opt);
  }
  return loss / n;
}

double a2c_advantage(double reward, double v_s, double v_s_next, bool done, double gamma) {
  return reward + gamma * v_s_next * (done ? 0.0 : 1.0) - v_s;
}

A2cLosses a2c_train_step(Agent& agent, TrainState& ts, std::span<const Transition> rollout) {
  if (rollout.empty()) throw EmptyRolloutError();
  if (agent.config.kind != AgentKind::a2c)
    throw NotApplicableError("a2c_train_step applies to a2c agents");

  const double gamma = agent.config.gamma;
  const double beta = agent.config.entropy_beta;
  const double n = static_cast<double>(rollout.size());

  MlpGrads actor_grads = make_grads(agent.actor);
  MlpGrads critic_grads = make_grads(agent.critic);
  A2cLosses losses;

  for (const Transition& tr : rollout) {
    const auto x = encode_state(tr.state);

    ForwardCache v_cache;
    const double v_s = forward(agent.critic, x, &v_cache)[0];

    double v_next = 0;
    ForwardCache v_next_cache;
    if (!tr.done) v_next = forward(agent.critic, encode_state(*tr.next_state), &v_next_cache)[0];

    const double adv = a2c_advantage(tr.reward, v_s, v_next, tr.done, gamma);
    losses.critic += adv * adv;

    // d(adv^2): -2*adv through v(s), +2*adv*gamma through v(s')
    backward(agent.critic, v_cache, std::vector<double>{-2.0 * adv / n}, critic_grads);
    if (!tr.done)
      backward(agent.critic, v_next_cache, std::vector<double>{2.0 * adv * gamma / n},
               critic_grads);

    ForwardCache a_cache;
    const auto logits = forward(agent.actor, x, &a_cache);
    const auto pi = softmax(logits);
    const std::size_t act = static_cast<std::size_t>(tr.action_index);

    double entropy = 0;
    for (const double p : pi) entropy -= p * std::log(p);
    losses.actor += -std::log(pi[act]) * adv - beta * entropy;

    // advantage is a constant here; no gradient flows into the critic
    std::vector<double> dlogits(pi.size());
    for (std::size_t j = 0; j < pi.size(); ++j) {
      const double policy_term = adv * (pi[j] - (j == act ? 1.0 : 0.0));
      const double entropy_term = beta * pi[j] * (std::log(pi[j]) + entropy);
      dlogits[j] = (policy_term + entropy_term) / n;
    }
    backward(agent.actor, a_cache, dlogits, actor_grads);
  }

  adam_step(agent.actor, actor_grads, *ts.actor_opt);
  adam_step(agent.critic, critic_grads, *ts.critic_opt);

  losses.actor /= n;
  losses.critic /= n;
  return losses;
}

void sync_target(Agent& agent) {
  if (agent.config.kind == AgentKind::a2c)
    throw NotApplicableError("a2c has no target network");
  agent.target = agent.online;
}

void write_training_log_csv(std::ostream& out, const TrainingLog& log) {
  out << "episode,total_reward,final_wealth,epsilon,mean_loss\n";
  for (const auto& e : log) {
    out << e.episode << ',' << format_sig10(e.total_reward) << ','
        << format_sig10(e.final_wealth) << ',' << format_sig10(e.epsilon) << ','
        << format_sig10(e.mean_loss) << '\n';
  }
}

namespace {

void train_value_based(Agent& agent, TrainState& ts, TradingEnv& env, TrainingLog* log) {
  const AgentConfig& cfg = agent.config;
  for (int ep = 0; ep < cfg.episodes; ++ep) {
    StateWindow obs = env.reset();
    double total_reward = 0;
    double loss_sum = 0;
    long long loss_count = 0;
    bool done = false;
    while (!done) {
      const auto q = q_forward(agent.online, encode_state(obs));
      const int action_idx = epsilon_greedy(q, agent.epsilon(), ts.rng);
      StepResult res = env.step(TradeAction::from_index(action_idx));
      total_reward += res.reward;

      Transition tr;
      tr.state = obs;
      tr.action_index = action_idx;
      tr.reward = res.reward;
      tr.done = res.done;
      if (!res.done) tr.next_state = *res.observation;
      ts.buffer.push(std::move(tr));

      if (ts.buffer.size() >= static_cast<std::size_t>(cfg.batch_size)) {
        std::vector<Transition> batch;
        batch.reserve(static_cast<std::size_t>(cfg.batch_size));
        for (int i = 0; i < cfg.batch_size; ++i)
          batch.push_back(ts.buffer[ts.rng.uniform_index(ts.buffer.size())]);
        loss_sum += q_train_step(agent, ts, batch);
        ++loss_count;
        agent.gradient_steps += 1;
        if (agent.gradient_steps % cfg.target_sync_every == 0) sync_target(agent);
      }

      done = res.done;
      if (!done) obs = *res.observation;
    }
    if (log)
      log->push_back({ep, total_reward, env.state().wealth, agent.epsilon(),
                      loss_count ? loss_sum / static_cast<double>(loss_count) : 0.0});
  }
}

int sample_from(std::span<const double> probs, Rng& rng) {
  const double u = rng.uniform();
  double acc = 0;
  for (std::size_t i = 0; i < probs.size(); ++i) {
    acc += probs[i];
    if (u < acc) return static_cast<int>(i);
  }
  return static_cast<int>(probs.size()) - 1;
}

void train_a2c(Agent& agent, TrainState& ts, TradingEnv& env, TrainingLog* log) {
  const AgentConfig& cfg = agent.config;
  for (int ep = 0; ep < cfg.episodes; ++ep) {
    StateWindow obs = env.reset();
    double total_reward = 0;
    double critic_loss_sum = 0;
    long long update_count = 0;
    bool done = false;
    while (!done) {
      std::vector<Transition> rollout;
      rollout.reserve(static_cast<std::size_t>(cfg.n_steps));
      for (int k = 0; k < cfg.n_steps && !done; ++k) {
        const auto logits = forward(agent.actor, encode_state(obs));
        const auto pi = softmax(logits);
        const int action_idx = sample_from(pi, ts.rng);
        StepResult res = env.step(TradeAction::from_index(action_idx));
        total_reward += res.reward;

        Transition tr;
        tr.state = obs;
        tr.action_index = action_idx;
        tr.reward = res.reward;
        tr.done = res.done;
        if (!res.done) tr.next_state = *res.observation;
        rollout.push_back(std::move(tr));

        done = res.done;
        if (!done) obs = *res.observation;
      }
      const A2cLosses losses = a2c_train_step(agent, ts, rollout);
      critic_loss_sum += losses.critic;
      ++update_count;
      agent.gradient_steps += 1;
    }
    if (log)
      log->push_back({ep, total_reward, env.state().wealth, 0.0,
                      update_count ? critic_loss_sum / static_cast<double>(update_count) : 0.0});
  }
}

}  // namespace

Agent train_agent(const FeatureMatrix& features, const EnvConfig& env_config,
                  const AgentConfig& agent_config, TrainingLog* log) {
  const int input_dim = features.lookback * FeatureRow::kCount;
  Agent agent = make_agent(agent_config, input_dim);
  if (agent_config.episodes <= 0) return agent;

  TradingEnv env(features, env_config);
  TrainState ts(agent);
  if (agent.config.kind == AgentKind::a2c)
    train_a2c(agent, ts, env, log);
  else
    train_value_based(agent, ts, env, log);
  return agent;
}

int greedy_action_index(const Agent& agent, const StateWindow& state) {
  const auto x = encode_state(state);
  if (agent.config.kind == AgentKind::a2c) return argmax_lowest(forward(agent.actor, x));
  const auto q = q_forward(agent.online, x);
  return argmax_lowest(q);
}

}  // namespace drltrade

#include <cmath>
#include <sstream>

#include "doctest.h"
#include "drltrade/agents.hpp"
#include "drltrade/errors.hpp"
#include "oracles.hpp"
#include "test_util.hpp"

using namespace drltrade;

namespace {

StateWindow random_window(std::uint64_t seed, int lookback = 1) {
  const auto fm = testutil::synthetic_features(
      static_cast<std::size_t>(lookback) + 2, seed, lookback);
  return build_state(fm, static_cast<std::size_t>(lookback) - 1, lookback);
}

// Plain net whose outputs are exactly `biases` regardless of input.
MlpParams constant_net(int input_dim, std::vector<double> biases) {
  Rng rng(0);
  MlpParams p = make_mlp({input_dim, static_cast<int>(biases.size())}, rng);
  std::fill(p.layers[0].weights.data.begin(), p.layers[0].weights.data.end(), 0.0);
  p.layers[0].biases = std::move(biases);
  return p;
}

AgentConfig small_config(AgentKind kind, std::uint64_t seed = 0) {
  AgentConfig cfg;
  cfg.kind = kind;
  cfg.seed = seed;
  cfg.hidden = {8, 8};
  cfg.dueling_head_hidden = 4;
  cfg.batch_size = 8;
  cfg.buffer_capacity = 256;
  cfg.target_sync_every = 50;
  cfg.epsilon.decay_steps = 200;
  cfg.n_steps = 4;
  return cfg;
}

}  // namespace

TEST_CASE("dqn_target: terminal truncation, gamma=0, hand case") {
  const QNet target = constant_net(7, {1.0, 3.0, 2.0});
  const auto s = random_window(1);
  CHECK(dqn_target(target, 0.5, s, true, 0.99) == 0.5);
  CHECK(dqn_target(target, 0.7, s, false, 0.0) == 0.7);
  // Q_target(s',.) = [1,3,2], r=1, gamma=0.5 -> 1 + 0.5*3 = 2.5
  CHECK(dqn_target(target, 1.0, s, false, 0.5) == doctest::Approx(2.5).epsilon(1e-12));
}

TEST_CASE("ddqn_target: selection by online, evaluation by target") {
  // online picks argmax [5,1,0] = action 0; target evaluates it at 1
  const QNet online = constant_net(7, {5.0, 1.0, 0.0});
  const QNet target = constant_net(7, {1.0, 9.0, 9.0});
  const auto s = random_window(2);
  CHECK(ddqn_target(online, target, 0.0, s, false, 1.0) == doctest::Approx(1.0));
  CHECK(ddqn_target(online, target, 0.3, s, true, 1.0) == 0.3);
}

TEST_CASE("ddqn collapses to dqn when the copies are identical") {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    Rng rng(seed);
    const MlpParams net = make_mlp({7, 6, 3}, rng);
    const QNet online = net;
    const QNet target = net;
    const auto s = random_window(seed + 50);
    const double r = rng.uniform(-1, 1);
    const double yd = dqn_target(target, r, s, false, 0.99);
    const double ydd = ddqn_target(online, target, r, s, false, 0.99);
    CHECK(std::abs(yd - ydd) < 1e-12);
  }
}

TEST_CASE("epsilon_greedy: pure greedy and tie-breaking") {
  Rng rng(3);
  CHECK(epsilon_greedy(std::vector<double>{0.1, 0.5, 0.2}, 0.0, rng) == 1);
  // lowest-index tie break maps to action -1
  CHECK(epsilon_greedy(std::vector<double>{1.0, 1.0, 1.0}, 0.0, rng) == 0);
  CHECK(TradeAction::from_index(0).value == -1);
}

TEST_CASE("epsilon_greedy: epsilon=1 is uniform over 30000 draws") {
  Rng rng(4);
  const std::vector<double> q = {9.0, 0.0, 0.0};  // argmax must not matter
  std::array<int, 3> counts{};
  const int n = 30000;
  for (int i = 0; i < n; ++i)
    counts[static_cast<std::size_t>(epsilon_greedy(q, 1.0, rng))]++;
  for (const int c : counts) {
    const double freq = static_cast<double>(c) / n;
    CHECK(freq >= 0.32);
    CHECK(freq <= 0.35);
  }
}

TEST_CASE("replay buffer keeps exactly the last capacity transitions, FIFO") {
  ReplayBuffer buf(5);
  for (int i = 0; i < 9; ++i) {
    Transition t;
    t.reward = static_cast<double>(i);
    t.done = true;
    buf.push(std::move(t));
  }
  CHECK(buf.size() == 5);
  CHECK(buf.inserted() == 9);
  for (std::size_t i = 0; i < 5; ++i)
    CHECK(buf[i].reward == static_cast<double>(4 + i));  // 4,5,6,7,8 oldest->newest
  CHECK_THROWS_AS(buf[5], Error);
  CHECK_THROWS_AS(ReplayBuffer(0), Error);
}

TEST_CASE("q_train_step: fixed point leaves parameters unchanged") {
  Agent agent = make_agent(small_config(AgentKind::dqn), 7);
  agent.online = constant_net(7, {0.4, -0.2, 0.1});
  agent.target = agent.online;
  TrainState ts(agent);

  std::vector<Transition> batch;
  for (int i = 0; i < 4; ++i) {
    Transition t;
    t.state = random_window(static_cast<std::uint64_t>(i));
    t.action_index = i % 3;
    t.done = true;  // y = r
    t.reward = std::get<MlpParams>(agent.online).layers[0].biases[static_cast<std::size_t>(i % 3)];
    batch.push_back(std::move(t));
  }
  const QNet before = agent.online;
  const double loss = q_train_step(agent, ts, batch);
  CHECK(loss == 0.0);
  CHECK(agent.online == before);
}

TEST_CASE("q_train_step: single-transition loss equals (Q - y)^2") {
  Agent agent = make_agent(small_config(AgentKind::dqn), 7);
  TrainState ts(agent);

  Transition t;
  t.state = random_window(9);
  t.action_index = 2;
  t.reward = 0.6;
  t.done = true;  // y = 0.6 by hand
  const double q = q_forward(agent.online, encode_state(t.state))[2];
  const double want = (q - 0.6) * (q - 0.6);
  const double loss = q_train_step(agent, ts, std::vector<Transition>{t});
  CHECK(loss == doctest::Approx(want).epsilon(1e-12));
  CHECK_THROWS_AS(q_train_step(agent, ts, std::vector<Transition>{}), EmptyBatchError);
}

TEST_CASE("q_train_step equals forward/backward/adam composition") {
  for (const AgentKind kind : {AgentKind::dqn, AgentKind::ddqn, AgentKind::dueling}) {
    Agent agent = make_agent(small_config(kind, 11), 7);
    TrainState ts(agent);

    std::vector<Transition> batch;
    Rng rng(21);
    for (int i = 0; i < 6; ++i) {
      Transition t;
      t.state = random_window(100 + static_cast<std::uint64_t>(i));
      t.action_index = static_cast<int>(rng.uniform_index(3));
      t.reward = rng.uniform(-1, 1);
      t.done = (i % 3 == 0);
      if (!t.done) t.next_state = random_window(200 + static_cast<std::uint64_t>(i));
      batch.push_back(std::move(t));
    }

    // independent recomputation of targets, gradients and the Adam step
    const double gamma = agent.config.gamma;
    std::vector<double> ys;
    for (const auto& t : batch) {
      const StateWindow dummy{};
      const StateWindow& next = t.next_state ? *t.next_state : dummy;
      ys.push_back(kind == AgentKind::ddqn
                       ? ddqn_target(agent.online, agent.target, t.reward, next, t.done, gamma)
                       : dqn_target(agent.target, t.reward, next, t.done, gamma));
    }

    Agent expected = agent;  // value copy
    const double n = static_cast<double>(batch.size());
    if (kind == AgentKind::dueling) {
      auto& duel = std::get<DuelingParams>(expected.online);
      DuelingGrads grads = make_grads(duel);
      for (std::size_t i = 0; i < batch.size(); ++i) {
        DuelingCache cache;
        const auto out = dueling_forward(duel, encode_state(batch[i].state), &cache);
        std::vector<double> dq(3, 0.0);
        dq[static_cast<std::size_t>(batch[i].action_index)] =
            2.0 * (out.q[static_cast<std::size_t>(batch[i].action_index)] - ys[i]) / n;
        dueling_backward(duel, cache, dq, grads);
      }
      DuelingAdamState opt = make_adam(duel, agent.config.learning_rate);
      adam_step(duel, grads, opt);
    } else {
      auto& mlp = std::get<MlpParams>(expected.online);
      MlpGrads grads = make_grads(mlp);
      for (std::size_t i = 0; i < batch.size(); ++i) {
        ForwardCache cache;
        const auto q = forward(mlp, encode_state(batch[i].state), &cache);
        std::vector<double> dq(3, 0.0);
        dq[static_cast<std::size_t>(batch[i].action_index)] =
            2.0 * (q[static_cast<std::size_t>(batch[i].action_index)] - ys[i]) / n;
        backward(mlp, cache, dq, grads);
      }
      AdamState opt = make_adam(mlp, agent.config.learning_rate);
      adam_step(mlp, grads, opt);
    }

    const QNet target_before = agent.target;
    q_train_step(agent, ts, batch);
    CHECK(agent.online == expected.online);
    CHECK(agent.target == target_before);  // no gradient leaks into the target
  }
}

TEST_CASE("dqn loss gradient matches finite differences, target fixed") {
  Agent agent = make_agent(small_config(AgentKind::dqn, 5), 7);
  TrainState ts(agent);
  (void)ts;

  std::vector<Transition> batch;
  Rng rng(31);
  for (int i = 0; i < 3; ++i) {
    Transition t;
    t.state = random_window(300 + static_cast<std::uint64_t>(i));
    t.action_index = static_cast<int>(rng.uniform_index(3));
    t.reward = rng.uniform(-1, 1);
    t.done = i == 0;
    if (!t.done) t.next_state = random_window(400 + static_cast<std::uint64_t>(i));
    batch.push_back(std::move(t));
  }

  std::vector<double> ys;
  for (const auto& t : batch) {
    const StateWindow dummy{};
    ys.push_back(dqn_target(agent.target, t.reward, t.next_state ? *t.next_state : dummy,
                            t.done, agent.config.gamma));
  }

  auto& mlp = std::get<MlpParams>(agent.online);
  const auto loss = [&] {
    double acc = 0;
    for (std::size_t i = 0; i < batch.size(); ++i) {
      const auto q = forward(mlp, encode_state(batch[i].state));
      const double d = q[static_cast<std::size_t>(batch[i].action_index)] - ys[i];
      acc += d * d;
    }
    return acc / static_cast<double>(batch.size());
  };

  MlpGrads analytic = make_grads(mlp);
  for (std::size_t i = 0; i < batch.size(); ++i) {
    ForwardCache cache;
    const auto q = forward(mlp, encode_state(batch[i].state), &cache);
    std::vector<double> dq(3, 0.0);
    dq[static_cast<std::size_t>(batch[i].action_index)] =
        2.0 * (q[static_cast<std::size_t>(batch[i].action_index)] - ys[i]) /
        static_cast<double>(batch.size());
    backward(mlp, cache, dq, analytic);
  }

  oracle::FiniteDiff fd;
  int bad = 0;
  for (std::size_t li = 0; li < mlp.layers.size(); ++li) {
    for (std::size_t i = 0; i < mlp.layers[li].weights.data.size(); ++i)
      if (!oracle::FiniteDiff::close(analytic.layers[li].weights.data[i],
                                     fd.grad(loss, mlp.layers[li].weights.data[i])))
        ++bad;
    for (std::size_t i = 0; i < mlp.layers[li].biases.size(); ++i)
      if (!oracle::FiniteDiff::close(analytic.layers[li].biases[i],
                                     fd.grad(loss, mlp.layers[li].biases[i])))
        ++bad;
  }
  CHECK(bad == 0);
}

TEST_CASE("a2c_advantage hand cases") {
  CHECK(a2c_advantage(1.0, 2.0, 99.0, false, 0.0) == doctest::Approx(-1.0));  // r - v_s
  CHECK(a2c_advantage(1.0, 2.0, 3.0, false, 0.5) == doctest::Approx(0.5));    // 1 + 1.5 - 2
  CHECK(a2c_advantage(1.0, 1.0, 123.0, true, 0.9) == doctest::Approx(0.0));   // terminal
}

TEST_CASE("a2c_train_step: zero advantages with beta=0 change nothing") {
  AgentConfig cfg = small_config(AgentKind::a2c);
  cfg.entropy_beta = 0.0;
  Agent agent = make_agent(cfg, 7);
  agent.critic = constant_net(7, {0.75});
  TrainState ts(agent);

  std::vector<Transition> rollout;
  for (int i = 0; i < 4; ++i) {
    Transition t;
    t.state = random_window(static_cast<std::uint64_t>(i));
    t.action_index = i % 3;
    t.reward = 0.75;  // adv = r - v(s) = 0 on terminal transitions
    t.done = true;
    rollout.push_back(std::move(t));
  }

  const MlpParams actor_before = agent.actor;
  const auto losses = a2c_train_step(agent, ts, rollout);
  CHECK(agent.actor == actor_before);
  CHECK(losses.critic == 0.0);
  CHECK_THROWS_AS(a2c_train_step(agent, ts, std::vector<Transition>{}), EmptyRolloutError);
}

TEST_CASE("a2c_train_step: single-step hand-computed actor loss") {
  AgentConfig cfg = small_config(AgentKind::a2c);
  cfg.entropy_beta = 0.0;
  Agent agent = make_agent(cfg, 7);
  agent.actor = constant_net(7, {0.2, 1.1, -0.4});
  agent.critic = constant_net(7, {0.25});
  TrainState ts(agent);

  Transition t;
  t.state = random_window(5);
  t.action_index = 1;
  t.reward = 1.0;
  t.done = true;
  const double adv = 1.0 - 0.25;
  const auto pi = softmax(std::vector<double>{0.2, 1.1, -0.4});
  const double want = -std::log(pi[1]) * adv;

  const auto losses = a2c_train_step(agent, ts, std::vector<Transition>{t});
  CHECK(losses.actor == doctest::Approx(want).epsilon(1e-12));
  CHECK(losses.critic == doctest::Approx(adv * adv).epsilon(1e-12));
}

TEST_CASE("a2c losses' gradients match finite differences") {
  AgentConfig cfg = small_config(AgentKind::a2c, 77);
  cfg.entropy_beta = 0.01;  // exercise the entropy path too
  Agent agent = make_agent(cfg, 7);

  std::vector<Transition> rollout;
  Rng rng(41);
  for (int i = 0; i < 4; ++i) {
    Transition t;
    t.state = random_window(500 + static_cast<std::uint64_t>(i));
    t.action_index = static_cast<int>(rng.uniform_index(3));
    t.reward = rng.uniform(-1, 1);
    t.done = (i == 3);
    if (!t.done) t.next_state = random_window(600 + static_cast<std::uint64_t>(i));
    rollout.push_back(std::move(t));
  }

  const double gamma = agent.config.gamma;
  const double beta = cfg.entropy_beta;
  const double n = static_cast<double>(rollout.size());

  // advantages frozen from the current critic (constants for the actor)
  std::vector<double> advs;
  for (const auto& t : rollout) {
    const double v_s = forward(agent.critic, encode_state(t.state))[0];
    const double v_n = t.done ? 0.0 : forward(agent.critic, encode_state(*t.next_state))[0];
    advs.push_back(a2c_advantage(t.reward, v_s, v_n, t.done, gamma));
  }

  const auto actor_loss = [&] {
    double acc = 0;
    for (std::size_t i = 0; i < rollout.size(); ++i) {
      const auto pi = softmax(forward(agent.actor, encode_state(rollout[i].state)));
      double entropy = 0;
      for (const double p : pi) entropy -= p * std::log(p);
      acc += -std::log(pi[static_cast<std::size_t>(rollout[i].action_index)]) * advs[i] -
             beta * entropy;
    }
    return acc / n;
  };
  const auto critic_loss = [&] {
    double acc = 0;
    for (const auto& t : rollout) {
      const double v_s = forward(agent.critic, encode_state(t.state))[0];
      const double v_n = t.done ? 0.0 : forward(agent.critic, encode_state(*t.next_state))[0];
      const double adv = a2c_advantage(t.reward, v_s, v_n, t.done, gamma);
      acc += adv * adv;
    }
    return acc / n;
  };

  // analytic gradients exactly as the training step computes them
  MlpGrads actor_grads = make_grads(agent.actor);
  MlpGrads critic_grads = make_grads(agent.critic);
  for (std::size_t i = 0; i < rollout.size(); ++i) {
    const auto& t = rollout[i];
    const auto x = encode_state(t.state);

    ForwardCache vc;
    forward(agent.critic, x, &vc);
    backward(agent.critic, vc, std::vector<double>{-2.0 * advs[i] / n}, critic_grads);
    if (!t.done) {
      ForwardCache vnc;
      forward(agent.critic, encode_state(*t.next_state), &vnc);
      backward(agent.critic, vnc, std::vector<double>{2.0 * advs[i] * gamma / n},
               critic_grads);
    }

    ForwardCache ac;
    const auto logits = forward(agent.actor, x, &ac);
    const auto pi = softmax(logits);
    double entropy = 0;
    for (const double p : pi) entropy -= p * std::log(p);
    std::vector<double> dlogits(3);
    for (std::size_t j = 0; j < 3; ++j) {
      const double policy_term =
          advs[i] * (pi[j] - (j == static_cast<std::size_t>(t.action_index) ? 1.0 : 0.0));
      dlogits[j] = (policy_term + beta * pi[j] * (std::log(pi[j]) + entropy)) / n;
    }
    backward(agent.actor, ac, dlogits, actor_grads);
  }

  oracle::FiniteDiff fd;
  int bad = 0;
  for (std::size_t li = 0; li < agent.actor.layers.size(); ++li)
    for (std::size_t i = 0; i < agent.actor.layers[li].weights.data.size(); ++i)
      if (!oracle::FiniteDiff::close(actor_grads.layers[li].weights.data[i],
                                     fd.grad(actor_loss, agent.actor.layers[li].weights.data[i])))
        ++bad;
  for (std::size_t li = 0; li < agent.critic.layers.size(); ++li)
    for (std::size_t i = 0; i < agent.critic.layers[li].weights.data.size(); ++i)
      if (!oracle::FiniteDiff::close(critic_grads.layers[li].weights.data[i],
                                     fd.grad(critic_loss, agent.critic.layers[li].weights.data[i])))
        ++bad;
  CHECK(bad == 0);
}

TEST_CASE("sync_target: copy semantics and independence") {
  Agent agent = make_agent(small_config(AgentKind::dqn, 13), 7);
  TrainState ts(agent);

  // drift the online net with a few training steps
  std::vector<Transition> batch;
  Rng rng(51);
  for (int i = 0; i < 8; ++i) {
    Transition t;
    t.state = random_window(700 + static_cast<std::uint64_t>(i));
    t.action_index = static_cast<int>(rng.uniform_index(3));
    t.reward = rng.uniform(-1, 1);
    t.done = true;
    batch.push_back(std::move(t));
  }
  const QNet target_before = agent.target;
  q_train_step(agent, ts, batch);
  q_train_step(agent, ts, batch);
  CHECK(agent.target == target_before);  // training never touches the target
  CHECK_FALSE(agent.online == agent.target);

  sync_target(agent);
  CHECK(agent.online == agent.target);
  for (int i = 0; i < 100; ++i) {
    const auto x = encode_state(random_window(800 + static_cast<std::uint64_t>(i)));
    const auto qa = q_forward(agent.online, x);
    const auto qb = q_forward(agent.target, x);
    for (std::size_t k = 0; k < qa.size(); ++k) CHECK(std::abs(qa[k] - qb[k]) < 1e-15);
  }

  Agent a2c_agent = make_agent(small_config(AgentKind::a2c), 7);
  CHECK_THROWS_AS(sync_target(a2c_agent), NotApplicableError);
}

TEST_CASE("train: zero episodes returns an untrained agent and empty log") {
  const auto fm = testutil::synthetic_features(20, 3, /*lookback=*/2);
  AgentConfig cfg = small_config(AgentKind::dqn, 5);
  cfg.episodes = 0;
  TrainingLog log;
  const Agent agent = train_agent(fm, EnvConfig{}, cfg, &log);
  CHECK(log.empty());
  CHECK(agent.gradient_steps == 0);
  CHECK(agent.online == make_agent(cfg, 14).online);
}

TEST_CASE("train: same seed twice is bitwise identical") {
  const auto fm = testutil::synthetic_features(40, 9, /*lookback=*/2, 0.001, 0.01);
  for (const AgentKind kind : {AgentKind::dqn, AgentKind::a2c}) {
    AgentConfig cfg = small_config(kind, 42);
    cfg.episodes = 3;
    TrainingLog log1, log2;
    const Agent a1 = train_agent(fm, EnvConfig{}, cfg, &log1);
    const Agent a2 = train_agent(fm, EnvConfig{}, cfg, &log2);
    REQUIRE(log1.size() == log2.size());
    for (std::size_t i = 0; i < log1.size(); ++i) {
      CHECK(log1[i].total_reward == log2[i].total_reward);
      CHECK(log1[i].final_wealth == log2[i].final_wealth);
      CHECK(log1[i].mean_loss == log2[i].mean_loss);
    }
    if (kind == AgentKind::a2c) {
      CHECK(a1.actor == a2.actor);
      CHECK(a1.critic == a2.critic);
    } else {
      CHECK(a1.online == a2.online);
    }
  }
}

TEST_CASE("epsilon schedule decays linearly across gradient steps") {
  EpsilonSchedule eps;  // 1.0 -> 0.05 over 10000
  CHECK(eps.at(0) == 1.0);
  CHECK(eps.at(5000) == doctest::Approx(0.525));
  CHECK(eps.at(10000) == doctest::Approx(0.05));
  CHECK(eps.at(50000) == doctest::Approx(0.05));
}

TEST_CASE("agent checkpoint round trip preserves everything") {
  testutil::TempDir dir("agents");
  const auto fm = testutil::synthetic_features(30, 3, /*lookback=*/2, 0.001, 0.01);
  for (const AgentKind kind :
       {AgentKind::dqn, AgentKind::ddqn, AgentKind::dueling, AgentKind::a2c}) {
    AgentConfig cfg = small_config(kind, 7);
    cfg.episodes = 1;
    const Agent agent = train_agent(fm, EnvConfig{}, cfg);

    const auto path = dir.path() / (std::string(to_string(kind)) + ".json");
    save_agent(agent, path);
    const Agent loaded = load_agent(path);
    CHECK(loaded.config.kind == kind);
    CHECK(loaded.gradient_steps == agent.gradient_steps);
    CHECK(loaded.input_dim == agent.input_dim);
    if (kind == AgentKind::a2c) {
      CHECK(loaded.actor == agent.actor);
      CHECK(loaded.critic == agent.critic);
    } else {
      CHECK(loaded.online == agent.online);
      CHECK(loaded.target == agent.target);
    }
    // greedy decisions survive the round trip
    for (int i = 0; i < 10; ++i) {
      const auto s = random_window(900 + static_cast<std::uint64_t>(i), 2);
      CHECK(greedy_action_index(loaded, s) == greedy_action_index(agent, s));
    }
  }
}

TEST_CASE("training log CSV schema") {
  TrainingLog log = {{0, 1.5, 100500.0, 0.9, 0.002}, {1, -0.5, 99000.0, 0.8, 0.001}};
  std::ostringstream out;
  write_training_log_csv(out, log);
  const std::string text = out.str();
  CHECK(text.rfind("episode,total_reward,final_wealth,epsilon,mean_loss\n", 0) == 0);
  CHECK(text.find("0,1.5,100500,0.9,0.002\n") != std::string::npos);
}

TEST_CASE("a2c policy stays a valid distribution throughout training") {
  const auto fm = testutil::synthetic_features(40, 15, /*lookback=*/2, 0.001, 0.01);
  AgentConfig cfg = small_config(AgentKind::a2c, 23);
  cfg.episodes = 3;
  const Agent agent = train_agent(fm, EnvConfig{}, cfg);
  for (std::uint64_t i = 0; i < 30; ++i) {
    const auto s = build_state(fm, 1 + i, 2);
    const auto pi = softmax(forward(agent.actor, encode_state(s)));
    double sum = 0;
    for (const double p : pi) {
      CHECK(p > 0.0);
      sum += p;
    }
    CHECK(std::abs(sum - 1.0) < 1e-10);
  }
}

TEST_CASE("agent config invariants are validated") {
  AgentConfig cfg = small_config(AgentKind::dqn);
  cfg.gamma = 1.5;
  CHECK_THROWS_AS(make_agent(cfg, 7), Error);
  cfg = small_config(AgentKind::dqn);
  cfg.epsilon.start = 0.1;
  cfg.epsilon.end = 0.9;
  CHECK_THROWS_AS(make_agent(cfg, 7), Error);
  cfg = small_config(AgentKind::dqn);
  cfg.batch_size = 0;
  CHECK_THROWS_AS(make_agent(cfg, 7), Error);
}

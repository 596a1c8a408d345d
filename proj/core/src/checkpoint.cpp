#include <fstream>

#include "drltrade/agents.hpp"
#include "drltrade/errors.hpp"
#include "drltrade/neural.hpp"
#include "json.hpp"

namespace drltrade {

namespace {

using nlohmann::json;

json layer_to_json(const Layer& l) {
  return json{{"rows", l.weights.rows},
              {"cols", l.weights.cols},
              {"weights", l.weights.data},
              {"biases", l.biases}};
}

Layer layer_from_json(const json& j) {
  Layer l;
  l.weights.rows = j.at("rows").get<int>();
  l.weights.cols = j.at("cols").get<int>();
  l.weights.data = j.at("weights").get<std::vector<double>>();
  l.biases = j.at("biases").get<std::vector<double>>();
  if (l.weights.data.size() !=
      static_cast<std::size_t>(l.weights.rows) * static_cast<std::size_t>(l.weights.cols))
    throw ShapeMismatchError("checkpoint layer weight count mismatch");
  if (l.biases.size() != static_cast<std::size_t>(l.weights.rows))
    throw ShapeMismatchError("checkpoint layer bias count mismatch");
  return l;
}

json mlp_to_json(const MlpParams& p) {
  json layers = json::array();
  for (const auto& l : p.layers) layers.push_back(layer_to_json(l));
  return json{{"architecture", "mlp"},
              {"version", 1},
              {"dims", p.dims()},
              {"tanh_output", p.tanh_output},
              {"layers", layers}};
}

MlpParams mlp_from_json(const json& j) {
  if (j.at("architecture") != "mlp") throw Error("checkpoint is not an mlp");
  MlpParams p;
  p.tanh_output = j.at("tanh_output").get<bool>();
  for (const auto& jl : j.at("layers")) p.layers.push_back(layer_from_json(jl));
  if (p.layers.empty()) throw ShapeMismatchError("checkpoint has no layers");
  for (std::size_t i = 1; i < p.layers.size(); ++i)
    if (p.layers[i].weights.cols != p.layers[i - 1].weights.rows)
      throw ShapeMismatchError("checkpoint layer dims do not chain");
  return p;
}

json dueling_to_json(const DuelingParams& p) {
  return json{{"architecture", "dueling"},
              {"version", 1},
              {"trunk", mlp_to_json(p.trunk)},
              {"value_head", mlp_to_json(p.value_head)},
              {"advantage_head", mlp_to_json(p.advantage_head)}};
}

DuelingParams dueling_from_json(const json& j) {
  if (j.at("architecture") != "dueling") throw Error("checkpoint is not a dueling net");
  DuelingParams p;
  p.trunk = mlp_from_json(j.at("trunk"));
  p.value_head = mlp_from_json(j.at("value_head"));
  p.advantage_head = mlp_from_json(j.at("advantage_head"));
  return p;
}

json qnet_to_json(const QNet& net) {
  if (const auto* mlp = std::get_if<MlpParams>(&net)) return mlp_to_json(*mlp);
  return dueling_to_json(std::get<DuelingParams>(net));
}

QNet qnet_from_json(const json& j) {
  if (j.at("architecture") == "dueling") return dueling_from_json(j);
  return mlp_from_json(j);
}

json config_to_json(const AgentConfig& c) {
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

AgentConfig config_from_json(const json& j) {
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

}  // namespace

std::string save_params(const MlpParams& params) { return mlp_to_json(params).dump(2); }
std::string save_params(const DuelingParams& params) { return dueling_to_json(params).dump(2); }

MlpParams load_mlp_params(const std::string& text) {
  return mlp_from_json(json::parse(text));
}

DuelingParams load_dueling_params(const std::string& text) {
  return dueling_from_json(json::parse(text));
}

void save_agent(const Agent& agent, const std::filesystem::path& path) {
  json j{{"format", "drltrade-agent"},
         {"version", 1},
         {"config", config_to_json(agent.config)},
         {"input_dim", agent.input_dim},
         {"gradient_steps", agent.gradient_steps}};
  if (agent.is_value_based()) {
    j["online"] = qnet_to_json(agent.online);
    j["target"] = qnet_to_json(agent.target);
  } else {
    j["actor"] = mlp_to_json(agent.actor);
    j["critic"] = mlp_to_json(agent.critic);
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path.string());
  out << j.dump(2) << '\n';
  if (!out) throw IoError("write failed for " + path.string());
}

Agent load_agent(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read " + path.string());
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw IoError("bad checkpoint " + path.string() + ": " + e.what());
  }
  if (j.value("format", "") != "drltrade-agent")
    throw IoError("not an agent checkpoint: " + path.string());

  Agent a;
  a.config = config_from_json(j.at("config"));
  a.input_dim = j.at("input_dim").get<int>();
  a.gradient_steps = j.at("gradient_steps").get<long long>();
  if (a.config.kind == AgentKind::a2c) {
    a.actor = mlp_from_json(j.at("actor"));
    a.critic = mlp_from_json(j.at("critic"));
  } else {
    a.online = qnet_from_json(j.at("online"));
    a.target = qnet_from_json(j.at("target"));
  }
  return a;
}

}  // namespace drltrade

#include "drltrade/neural.hpp"

#include <algorithm>
#include <cmath>

#include "drltrade/errors.hpp"

namespace drltrade {

std::vector<int> MlpParams::dims() const {
  std::vector<int> d;
  d.push_back(input_dim());
  for (const auto& l : layers) d.push_back(l.weights.rows);
  return d;
}

std::size_t MlpParams::parameter_count() const {
  std::size_t n = 0;
  for (const auto& l : layers) n += l.weights.size() + l.biases.size();
  return n;
}

MlpParams make_mlp(const std::vector<int>& dims, Rng& rng, bool tanh_output) {
  if (dims.size() < 2) throw ShapeMismatchError("mlp needs at least input and output dims");
  MlpParams p;
  p.tanh_output = tanh_output;
  for (std::size_t i = 1; i < dims.size(); ++i) {
    Layer layer;
    layer.weights = Matrix(dims[i], dims[i - 1]);
    layer.biases.assign(static_cast<std::size_t>(dims[i]), 0.0);
    const double bound = std::sqrt(6.0 / (dims[i - 1] + dims[i]));
    for (auto& w : layer.weights.data) w = rng.uniform(-bound, bound);
    p.layers.push_back(std::move(layer));
  }
  return p;
}

std::vector<double> forward(const MlpParams& params, std::span<const double> input,
                            ForwardCache* cache) {
  if (static_cast<int>(input.size()) != params.input_dim())
    throw ShapeMismatchError("input dim " + std::to_string(input.size()) +
                             " != expected " + std::to_string(params.input_dim()));
  if (cache) {
    cache->activations.clear();
    cache->activations.emplace_back(input.begin(), input.end());
  }
  std::vector<double> x(input.begin(), input.end());
  for (std::size_t li = 0; li < params.layers.size(); ++li) {
    const Layer& l = params.layers[li];
    std::vector<double> z(static_cast<std::size_t>(l.weights.rows));
    for (int r = 0; r < l.weights.rows; ++r) {
      double acc = l.biases[static_cast<std::size_t>(r)];
      const double* wrow = &l.weights.data[static_cast<std::size_t>(r) * l.weights.cols];
      for (int c = 0; c < l.weights.cols; ++c) acc += wrow[c] * x[static_cast<std::size_t>(c)];
      z[static_cast<std::size_t>(r)] = acc;
    }
    const bool apply_tanh = li + 1 < params.layers.size() || params.tanh_output;
    if (apply_tanh)
      for (auto& v : z) v = std::tanh(v);
    x = std::move(z);
    if (cache) cache->activations.push_back(x);
  }
  return x;
}

MlpGrads make_grads(const MlpParams& params) {
  MlpGrads g;
  for (const auto& l : params.layers) {
    Layer gl;
    gl.weights = Matrix(l.weights.rows, l.weights.cols);
    gl.biases.assign(l.biases.size(), 0.0);
    g.layers.push_back(std::move(gl));
  }
  return g;
}

void zero_grads(MlpGrads& grads) {
  for (auto& l : grads.layers) {
    std::fill(l.weights.data.begin(), l.weights.data.end(), 0.0);
    std::fill(l.biases.begin(), l.biases.end(), 0.0);
  }
}

std::vector<double> backward(const MlpParams& params, const ForwardCache& cache,
                             std::span<const double> output_gradient, MlpGrads& grads) {
  const std::size_t n_layers = params.layers.size();
  if (cache.activations.size() != n_layers + 1)
    throw ShapeMismatchError("cache does not match network depth");
  if (static_cast<int>(output_gradient.size()) != params.output_dim())
    throw ShapeMismatchError("output gradient dim mismatch");
  if (grads.layers.size() != n_layers)
    throw ShapeMismatchError("gradient holder does not match network depth");

  std::vector<double> delta(output_gradient.begin(), output_gradient.end());
  for (std::size_t li = n_layers; li-- > 0;) {
    const Layer& l = params.layers[li];
    Layer& g = grads.layers[li];
    const auto& a_out = cache.activations[li + 1];
    const auto& a_in = cache.activations[li];

    // through the activation: tanh'(z) = 1 - tanh(z)^2, with tanh(z) cached
    const bool applied_tanh = li + 1 < n_layers || params.tanh_output;
    if (applied_tanh)
      for (std::size_t r = 0; r < delta.size(); ++r)
        delta[r] *= 1.0 - a_out[r] * a_out[r];

    for (int r = 0; r < l.weights.rows; ++r) {
      const double d = delta[static_cast<std::size_t>(r)];
      g.biases[static_cast<std::size_t>(r)] += d;
      double* grow = &g.weights.data[static_cast<std::size_t>(r) * l.weights.cols];
      for (int c = 0; c < l.weights.cols; ++c) grow[c] += d * a_in[static_cast<std::size_t>(c)];
    }

    std::vector<double> prev(static_cast<std::size_t>(l.weights.cols), 0.0);
    for (int r = 0; r < l.weights.rows; ++r) {
      const double d = delta[static_cast<std::size_t>(r)];
      const double* wrow = &l.weights.data[static_cast<std::size_t>(r) * l.weights.cols];
      for (int c = 0; c < l.weights.cols; ++c) prev[static_cast<std::size_t>(c)] += d * wrow[c];
    }
    delta = std::move(prev);
  }
  return delta;
}

DuelingParams make_dueling(int input_dim, const std::vector<int>& trunk_hidden,
                           int head_hidden, int n_actions, Rng& rng) {
  if (trunk_hidden.empty()) throw ShapeMismatchError("dueling trunk needs hidden layers");
  std::vector<int> trunk_dims = {input_dim};
  trunk_dims.insert(trunk_dims.end(), trunk_hidden.begin(), trunk_hidden.end());
  DuelingParams p;
  p.trunk = make_mlp(trunk_dims, rng, /*tanh_output=*/true);
  const int trunk_out = trunk_hidden.back();
  p.value_head = make_mlp({trunk_out, head_hidden, 1}, rng);
  p.advantage_head = make_mlp({trunk_out, head_hidden, n_actions}, rng);
  return p;
}

DuelingOut dueling_forward(const DuelingParams& params, std::span<const double> input,
                           DuelingCache* cache) {
  if (params.trunk.output_dim() != params.value_head.input_dim() ||
      params.trunk.output_dim() != params.advantage_head.input_dim())
    throw ShapeMismatchError("dueling trunk/head dims do not chain");

  const auto z = forward(params.trunk, input, cache ? &cache->trunk : nullptr);
  const auto v = forward(params.value_head, z, cache ? &cache->value : nullptr);
  const auto adv = forward(params.advantage_head, z, cache ? &cache->advantage : nullptr);

  double adv_mean = 0;
  for (const double a : adv) adv_mean += a;
  adv_mean /= static_cast<double>(adv.size());

  DuelingOut out;
  out.v = v[0];
  out.advantage = adv;
  out.q.resize(adv.size());
  for (std::size_t i = 0; i < adv.size(); ++i) out.q[i] = v[0] + (adv[i] - adv_mean);
  return out;
}

DuelingGrads make_grads(const DuelingParams& params) {
  return DuelingGrads{make_grads(params.trunk), make_grads(params.value_head),
                      make_grads(params.advantage_head)};
}

void zero_grads(DuelingGrads& grads) {
  zero_grads(grads.trunk);
  zero_grads(grads.value);
  zero_grads(grads.advantage);
}

void dueling_backward(const DuelingParams& params, const DuelingCache& cache,
                      std::span<const double> q_gradient, DuelingGrads& grads) {
  const std::size_t n = q_gradient.size();
  if (static_cast<int>(n) != params.advantage_head.output_dim())
    throw ShapeMismatchError("q gradient dim mismatch");

  double g_sum = 0;
  for (const double g : q_gradient) g_sum += g;

  // q_i = v + a_i - mean(a): dv = sum(dq), da_j = dq_j - mean(dq)
  const std::vector<double> dv = {g_sum};
  std::vector<double> da(n);
  for (std::size_t j = 0; j < n; ++j) da[j] = q_gradient[j] - g_sum / static_cast<double>(n);

  const auto dz_v = backward(params.value_head, cache.value, dv, grads.value);
  const auto dz_a = backward(params.advantage_head, cache.advantage, da, grads.advantage);

  std::vector<double> dz(dz_v.size());
  for (std::size_t i = 0; i < dz.size(); ++i) dz[i] = dz_v[i] + dz_a[i];
  backward(params.trunk, cache.trunk, dz, grads.trunk);
}

AdamState make_adam(const MlpParams& params, double lr) {
  AdamState s;
  s.lr = lr;
  s.m = make_grads(params);
  s.v = make_grads(params);
  return s;
}

namespace {

void adam_apply(std::span<double> p, std::span<const double> g, std::span<double> m,
                std::span<double> v, const AdamState& s, double corr1, double corr2) {
  for (std::size_t i = 0; i < p.size(); ++i) {
    m[i] = s.beta1 * m[i] + (1.0 - s.beta1) * g[i];
    v[i] = s.beta2 * v[i] + (1.0 - s.beta2) * g[i] * g[i];
    const double m_hat = m[i] / corr1;
    const double v_hat = v[i] / corr2;
    p[i] -= s.lr * m_hat / (std::sqrt(v_hat) + s.epsilon);
  }
}

}  // namespace

void adam_step(MlpParams& params, const MlpGrads& grads, AdamState& state) {
  if (grads.layers.size() != params.layers.size())
    throw ShapeMismatchError("gradient/parameter layer count mismatch");
  state.step += 1;
  const double corr1 = 1.0 - std::pow(state.beta1, static_cast<double>(state.step));
  const double corr2 = 1.0 - std::pow(state.beta2, static_cast<double>(state.step));
  for (std::size_t li = 0; li < params.layers.size(); ++li) {
    Layer& l = params.layers[li];
    const Layer& g = grads.layers[li];
    Layer& m = state.m.layers[li];
    Layer& v = state.v.layers[li];
    if (g.weights.rows != l.weights.rows || g.weights.cols != l.weights.cols)
      throw ShapeMismatchError("gradient shape mismatch at layer " + std::to_string(li));
    adam_apply(l.weights.data, g.weights.data, m.weights.data, v.weights.data, state,
               corr1, corr2);
    adam_apply(l.biases, g.biases, m.biases, v.biases, state, corr1, corr2);
  }
}

DuelingAdamState make_adam(const DuelingParams& params, double lr) {
  return DuelingAdamState{make_adam(params.trunk, lr), make_adam(params.value_head, lr),
                          make_adam(params.advantage_head, lr)};
}

void adam_step(DuelingParams& params, const DuelingGrads& grads, DuelingAdamState& state) {
  adam_step(params.trunk, grads.trunk, state.trunk);
  adam_step(params.value_head, grads.value, state.value);
  adam_step(params.advantage_head, grads.advantage, state.advantage);
}

std::vector<double> softmax(std::span<const double> logits) {
  std::vector<double> out(logits.size());
  const double mx = *std::max_element(logits.begin(), logits.end());
  double sum = 0;
  for (std::size_t i = 0; i < logits.size(); ++i) {
    out[i] = std::exp(logits[i] - mx);
    sum += out[i];
  }
  for (auto& v : out) v /= sum;
  return out;
}

MlpParams copy_params(const MlpParams& src) { return src; }
DuelingParams copy_params(const DuelingParams& src) { return src; }

}  // namespace drltrade

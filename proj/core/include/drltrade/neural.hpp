#pragma once

#include <span>
#include <string>
#include <vector>

#include "drltrade/matrix.hpp"
#include "drltrade/rng.hpp"

namespace drltrade {

struct Layer {
  Matrix weights;               // out_dim x in_dim
  std::vector<double> biases;   // out_dim

  bool operator==(const Layer&) const = default;
};

// Dense net: affine + tanh on hidden layers, identity output by default.
// tanh_output turns the last layer into a hidden-style layer, used for the
// dueling trunk whose output feeds the two heads.
struct MlpParams {
  std::vector<Layer> layers;
  bool tanh_output = false;

  int input_dim() const { return layers.front().weights.cols; }
  int output_dim() const { return layers.back().weights.rows; }
  std::vector<int> dims() const;
  std::size_t parameter_count() const;

  bool operator==(const MlpParams&) const = default;
};

// Glorot-uniform weights, zero biases. dims = {in, hidden..., out}.
MlpParams make_mlp(const std::vector<int>& dims, Rng& rng, bool tanh_output = false);

struct ForwardCache {
  std::vector<std::vector<double>> activations;  // [0]=input .. [L]=output
};

// Returns the output vector; fills cache for backward when given.
std::vector<double> forward(const MlpParams& params, std::span<const double> input,
                            ForwardCache* cache = nullptr);

// Gradient container, same shapes as the parameters.
struct MlpGrads {
  std::vector<Layer> layers;
};

MlpGrads make_grads(const MlpParams& params);
void zero_grads(MlpGrads& grads);

// Reverse-mode pass: accumulates d(output . output_gradient)/d(params) into
// grads and returns the gradient with respect to the input.
std::vector<double> backward(const MlpParams& params, const ForwardCache& cache,
                             std::span<const double> output_gradient, MlpGrads& grads);

// --- dueling head (Q = V + A - mean(A)) ---

struct DuelingParams {
  MlpParams trunk;           // tanh_output = true
  MlpParams value_head;      // scalar output
  MlpParams advantage_head;  // one output per action

  int input_dim() const { return trunk.input_dim(); }
  int output_dim() const { return advantage_head.output_dim(); }

  bool operator==(const DuelingParams&) const = default;
};

DuelingParams make_dueling(int input_dim, const std::vector<int>& trunk_hidden,
                           int head_hidden, int n_actions, Rng& rng);

struct DuelingCache {
  ForwardCache trunk, value, advantage;
};

struct DuelingOut {
  std::vector<double> q;
  double v = 0;
  std::vector<double> advantage;
};

DuelingOut dueling_forward(const DuelingParams& params, std::span<const double> input,
                           DuelingCache* cache = nullptr);

struct DuelingGrads {
  MlpGrads trunk, value, advantage;
};

DuelingGrads make_grads(const DuelingParams& params);
void zero_grads(DuelingGrads& grads);

void dueling_backward(const DuelingParams& params, const DuelingCache& cache,
                      std::span<const double> q_gradient, DuelingGrads& grads);

// --- optimizer ---

struct AdamState {
  double lr = 1e-4;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
  long long step = 0;
  MlpGrads m, v;  // moment accumulators, shapes mirror the parameters
};

AdamState make_adam(const MlpParams& params, double lr);
void adam_step(MlpParams& params, const MlpGrads& grads, AdamState& state);

struct DuelingAdamState {
  AdamState trunk, value, advantage;
};

DuelingAdamState make_adam(const DuelingParams& params, double lr);
void adam_step(DuelingParams& params, const DuelingGrads& grads, DuelingAdamState& state);

// --- misc ---

// Max-subtracted stable softmax; entries positive and summing to 1.
std::vector<double> softmax(std::span<const double> logits);

// Deep copies; the containers are plain values so this is the copy ctor,
// spelled out for call sites that want the intent visible.
MlpParams copy_params(const MlpParams& src);
DuelingParams copy_params(const DuelingParams& src);

// Versioned JSON checkpoint text; load(save(p)) == p exactly.
std::string save_params(const MlpParams& params);
std::string save_params(const DuelingParams& params);
MlpParams load_mlp_params(const std::string& text);
DuelingParams load_dueling_params(const std::string& text);

}  // namespace drltrade

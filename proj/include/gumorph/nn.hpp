#pragma once

// Embedding -> Bi-LSTM -> dense network with hand-written backpropagation.
//
// Two heads share the encoder: a per-position sigmoid for boundary tagging and
// a softmax over the concatenated final forward/backward states for
// whole-word classification. Everything is double precision and
// single-threaded so that a fixed seed gives bit-identical models.

#include <array>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "gumorph/script.hpp"

namespace gumorph::nn {

struct Tensor {
  std::vector<std::size_t> shape;
  std::vector<double> data;  // row-major

  static Tensor zeros(std::vector<std::size_t> shape);

  std::size_t size() const { return data.size(); }
  std::size_t rows() const { return shape.empty() ? 0 : shape[0]; }
  std::size_t cols() const { return shape.size() < 2 ? 1 : shape[1]; }
  double& at(std::size_t r, std::size_t c) { return data[r * cols() + c]; }
  double at(std::size_t r, std::size_t c) const { return data[r * cols() + c]; }

  bool operator==(const Tensor&) const = default;
};

enum Gate : std::size_t { kInput = 0, kForget = 1, kCell = 2, kOutput = 3 };

struct LstmWeights {
  std::array<Tensor, 4> W;  // input weights, embed_dim x hidden_dim
  std::array<Tensor, 4> U;  // recurrent weights, hidden_dim x hidden_dim
  std::array<Tensor, 4> b;  // biases, hidden_dim

  std::size_t input_dim() const { return W[0].rows(); }
  std::size_t hidden_dim() const { return W[0].cols(); }
  bool operator==(const LstmWeights&) const = default;
};

/// Every learnable tensor of one network. Also used for gradients and Adam
/// moments, which mirror the parameter shapes.
struct ParamSet {
  Tensor embedding;  // vocab x embed_dim
  LstmWeights fwd;
  LstmWeights bwd;
  Tensor out_w;  // 2*hidden_dim x outputs
  Tensor out_b;  // outputs

  std::vector<std::pair<std::string, Tensor*>> named();
  std::vector<std::pair<std::string, const Tensor*>> named() const;
  ParamSet zeros_like() const;
  bool operator==(const ParamSet&) const = default;
};

enum class Head : std::uint8_t { Boundary = 0, Class = 1 };

struct Hyperparams {
  std::size_t embed_dim = 32;
  std::size_t hidden_dim = 64;
  std::size_t batch = 32;
  std::size_t epochs = 30;
  double lr = 1e-3;
  std::uint64_t seed = 0;
  double threshold = 0.5;
  double clip_norm = 5.0;

  bool operator==(const Hyperparams&) const = default;
};

struct ModelParams {
  Head head = Head::Boundary;
  Hyperparams hyper;
  Vocab vocab;
  std::size_t outputs = 1;  // 1 for the boundary head, class count otherwise
  ParamSet weights;

  /// Glorot-uniform matrices, zero biases, forget-gate bias 1.
  static ModelParams init(Head head, Vocab vocab, std::size_t outputs, const Hyperparams& hyper);
  /// Same shapes as init, every value zero.
  static ModelParams zeros(Head head, Vocab vocab, std::size_t outputs, const Hyperparams& hyper);

  /// Throws ShapeMismatch when tensor shapes disagree with each other.
  void validate() const;

  bool operator==(const ModelParams&) const = default;
};

// ---------------------------------------------------------------------------
// Forward pieces

struct CellOutput {
  std::vector<double> h;
  std::vector<double> c;
};

/// One LSTM step. Throws ShapeMismatch.
CellOutput lstm_cell_step(const LstmWeights& w, std::span<const double> x, std::span<const double> h_prev,
                          std::span<const double> c_prev);

/// Position t holds [forward state after ids[0..t], backward state after ids[T-1..t]].
std::vector<std::vector<double>> bilstm_forward(const ModelParams& params, std::span<const int> ids);

/// Per-position split probability.
std::vector<double> boundary_head(const ModelParams& params, std::span<const std::vector<double>> states);

std::vector<double> class_logits(const ModelParams& params, std::span<const std::vector<double>> states);
/// Softmax over class_logits.
std::vector<double> class_head(const ModelParams& params, std::span<const std::vector<double>> states);

double sigmoid(double z);
std::vector<double> softmax(std::span<const double> logits);

inline constexpr double kProbClamp = 1e-12;

/// Mean binary cross-entropy.
double bce_loss(std::span<const double> p, std::span<const std::uint8_t> y);
/// Negative log-likelihood of class y.
double cce_loss(std::span<const double> p, int y);

// ---------------------------------------------------------------------------
// Batches and gradients

struct Example {
  std::vector<int> ids;
  std::vector<std::uint8_t> bits;  // boundary targets
  int label = -1;                  // class target
};

/// Padded mini-batch. Padded positions hold Vocab::kPad and contribute
/// neither loss nor gradient.
struct Batch {
  std::size_t max_len = 0;
  std::vector<int> ids;  // rows x max_len
  std::vector<std::size_t> lengths;
  std::vector<std::uint8_t> bits;  // rows x max_len
  std::vector<int> labels;

  std::size_t rows() const { return lengths.size(); }
  std::span<const int> row_ids(std::size_t r) const { return {ids.data() + r * max_len, lengths[r]}; }
  std::span<const std::uint8_t> row_bits(std::size_t r) const { return {bits.data() + r * max_len, lengths[r]}; }
};

Batch make_batch(std::span<const Example> examples);

/// Boundary head: BCE averaged over unpadded positions. Class head: CCE
/// averaged over rows.
double batch_loss(const ModelParams& params, const Batch& batch);

/// Returns the batch loss and writes exact gradients into `grads`.
double loss_and_gradient(const ModelParams& params, const Batch& batch, ParamSet& grads);

struct GradCheckResult {
  double max_rel_error = 0.0;
  std::string worst_param;
  std::size_t worst_index = 0;
  double analytic = 0.0;
  double numeric = 0.0;
  std::size_t components = 0;
};

/// Central differences on every parameter component, compared with the
/// analytic gradient as |a - n| / max(|a|, |n|, 1e-8). `corrupt` perturbs one
/// analytic component so callers can confirm the check can fail.
GradCheckResult grad_check(ModelParams params, const Batch& batch, double eps = 1e-5, bool corrupt = false);

// ---------------------------------------------------------------------------
// Optimization

struct AdamConfig {
  double lr = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
};

struct AdamState {
  AdamConfig config;
  ParamSet m;
  ParamSet v;
  std::uint64_t step = 0;

  static AdamState for_params(const ParamSet& params, const AdamConfig& config);
};

void adam_step(ParamSet& params, const ParamSet& grads, AdamState& state);

/// Rescales grads so their global L2 norm is at most max_norm. Returns the
/// norm before clipping.
double clip_global_norm(ParamSet& grads, double max_norm);

bool all_finite(const ParamSet& params);

struct TrainLog {
  std::vector<double> epoch_loss;
};

/// Called after every epoch; returning false stops training.
using EpochHook = std::function<bool(std::size_t epoch, const ModelParams& params)>;

/// Mini-batch Adam with per-epoch seeded shuffling and global-norm clipping.
/// Throws NumericError if a loss or parameter stops being finite.
TrainLog fit(ModelParams& params, std::span<const Example> data, const EpochHook& hook = {});

}  // namespace gumorph::nn

#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Core>

#include "credo/random.hpp"
#include "credo/text.hpp"

namespace credo::nn {

using Eigen::VectorXd;

/// Dense row-major array.
struct Tensor {
  std::vector<std::size_t> shape;
  std::vector<double> values;

  Tensor() = default;
  explicit Tensor(std::vector<std::size_t> shape_, double fill = 0.0);

  std::size_t size() const noexcept { return values.size(); }
  /// Throws ConfigError unless product(shape) == size() and all values are finite.
  void validate() const;

  friend bool operator==(const Tensor&, const Tensor&) = default;
};

/// Named, shaped view of a contiguous block of model parameters. A model's
/// parameter list fixes the flattening order used by optimizers, gradient
/// checks and checkpoints.
struct ParamRef {
  std::string name;
  std::vector<std::size_t> shape;
  double* data = nullptr;
  std::size_t size = 0;
};
using ParamList = std::vector<ParamRef>;

ParamRef param_ref(std::string name, RowMatrix& m);
ParamRef param_ref(std::string name, VectorXd& v);

std::size_t total_size(const ParamList& params);
std::vector<double> flatten(const ParamList& params);
/// Writes `values` back into the referenced storage (sizes must match).
void assign(const ParamList& params, std::span<const double> values);
void set_zero(const ParamList& params);

// ---------------------------------------------------------------------------
// LSTM

/// Single-layer LSTM. Gate blocks in the stacked matrices are ordered
/// input, forget, output, candidate.
struct LstmParams {
  std::size_t input_size = 0;
  std::size_t hidden_size = 0;
  RowMatrix w_input;      ///< 4H x D
  RowMatrix w_recurrent;  ///< 4H x H
  VectorXd bias;          ///< 4H

  static LstmParams zeros(std::size_t input_size, std::size_t hidden_size);
  /// Uniform in [-1/sqrt(H), 1/sqrt(H)], forget-gate bias 1.
  static LstmParams random(std::size_t input_size, std::size_t hidden_size, Rng& rng);

  void append_to(ParamList& params, const std::string& prefix);
};

struct LstmState {
  VectorXd h;
  VectorXd c;
};

double sigmoid(double z);

/// One time step. Throws ConfigError naming the operand whose size disagrees
/// with the parameters.
LstmState lstm_step(const VectorXd& x, const VectorXd& h_prev, const VectorXd& c_prev,
                    const LstmParams& params);

/// Activations saved for backpropagation through time. Row t of `h`/`c` is
/// the state after step t; the zero initial state is implicit.
struct LstmTrace {
  RowMatrix gates;   ///< T x 4H, post-activation (i, f, o, g)
  RowMatrix c;       ///< T x H
  RowMatrix tanh_c;  ///< T x H
  RowMatrix h;       ///< T x H

  std::size_t steps() const noexcept { return static_cast<std::size_t>(h.rows()); }
};

/// Runs the LSTM over the rows of `inputs` (T x D) from a zero state.
LstmTrace lstm_forward(const LstmParams& params, const RowMatrix& inputs);

/// Accumulates parameter gradients into `grads` given dL/dh_t for every step
/// (`dh` is T x H). When `dinputs` is non-null it receives dL/dx (T x D).
void lstm_backward(const LstmParams& params, const RowMatrix& inputs, const LstmTrace& trace,
                   const RowMatrix& dh, LstmParams& grads, RowMatrix* dinputs);

/// Row-reversed copy; the backward direction of a bidirectional encoder reads
/// its input through this.
RowMatrix reverse_rows(const RowMatrix& m);

struct BiLstmTrace {
  LstmTrace forward;
  LstmTrace backward;  ///< over the reversed input
};

/// [final forward h ; final backward h], length 2H. Throws EmptySequence.
VectorXd bilstm_encode(const RowMatrix& inputs, const LstmParams& fwd, const LstmParams& bwd,
                       BiLstmTrace* trace = nullptr);

/// Backpropagates dL/d(encoding) (length 2H) through bilstm_encode.
void bilstm_backward(const RowMatrix& inputs, const LstmParams& fwd, const LstmParams& bwd,
                     const BiLstmTrace& trace, const VectorXd& dencoding, LstmParams& dfwd,
                     LstmParams& dbwd, RowMatrix* dinputs);

/// Per-dimension mean over rows. Throws EmptySequence.
VectorXd mean_pool(const RowMatrix& hiddens);

/// Gathers embedding rows for `ids` into a T x D matrix.
RowMatrix gather_rows(const RowMatrix& table, std::span<const Vocabulary::Id> ids);
/// Adds row t of `dinputs` into row ids[t] of `dtable`.
void scatter_add_rows(RowMatrix& dtable, std::span<const Vocabulary::Id> ids,
                      const RowMatrix& dinputs);

// ---------------------------------------------------------------------------
// Optimizers

void sgd_step(std::span<double> params, std::span<const double> grads, double learning_rate);

struct AdamConfig {
  double learning_rate = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
};

class Adam {
 public:
  Adam(std::size_t parameter_count, AdamConfig config = {});

  void step(std::span<double> params, std::span<const double> grads);

  std::uint64_t steps() const noexcept { return t_; }
  const std::vector<double>& first_moment() const noexcept { return m_; }
  const std::vector<double>& second_moment() const noexcept { return v_; }

 private:
  AdamConfig config_;
  std::vector<double> m_;
  std::vector<double> v_;
  std::uint64_t t_ = 0;
};

/// Rescales `grads` in place so its L2 norm is at most `max_norm`; returns
/// the norm before clipping.
double clip_global_norm(std::span<double> grads, double max_norm);

/// Minibatch Adam schedule shared by the neural models.
struct TrainingConfig {
  std::size_t epochs = 10;
  std::size_t batch_size = 8;
  double learning_rate = 1e-3;
  double grad_clip = 5.0;  ///< global L2 norm
  std::uint64_t seed = 42;
};

struct TrainingReport {
  double initial_loss = 0.0;  ///< mean loss over the training set before any update
  double final_loss = 0.0;    ///< mean loss over the training set after the last epoch
  std::vector<double> epoch_losses;
};

// ---------------------------------------------------------------------------
// Gradient checking

/// Evaluates the loss at `params`; when `grad` is non-empty it also receives
/// the analytic gradient.
using LossFn = std::function<double(std::span<const double> params, std::span<double> grad)>;

struct GradCheckResult {
  double max_relative_error = 0.0;
  std::size_t worst_index = 0;
  double analytic = 0.0;
  double numeric = 0.0;
};

/// Five-point central differences per parameter, so truncation error is
/// O(epsilon^4) and a comparatively large step keeps rounding noise small on
/// tiny gradients. Relative error is |g_a - g_n| / max(|g_a|, |g_n|, 1e-8).
/// Throws Error on a non-finite loss.
GradCheckResult grad_check(const LossFn& loss, std::span<const double> params,
                           double epsilon = 1e-3);

// ---------------------------------------------------------------------------
// Checkpoints: "CREDOCK1", u64 LE header length, JSON header, then float64 LE
// blocks in the order listed under the header's "blocks" key.

struct CheckpointBlock {
  std::string name;
  Tensor tensor;
};

struct Checkpoint {
  std::string header;  ///< JSON object text, including "blocks"
  std::vector<CheckpointBlock> blocks;
};

/// `header_json` must be a JSON object; the block list is added to it.
void write_checkpoint(const std::filesystem::path& path, std::string_view header_json,
                      const ParamList& params);
Checkpoint read_checkpoint(const std::filesystem::path& path);

/// Copies checkpoint blocks into `params`, checking names and shapes.
void load_blocks(const Checkpoint& ckpt, const ParamList& params);

}  // namespace credo::nn

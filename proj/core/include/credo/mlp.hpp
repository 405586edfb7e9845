#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include <Eigen/Core>

#include "credo/nn.hpp"
#include "credo/random.hpp"

namespace credo {

struct MlpConfig {
  std::size_t hidden = 16;
  std::size_t epochs = 1000;
  double learning_rate = 0.01;
  bool class_balanced = true;
  std::uint64_t seed = 42;
};

/// One tanh hidden layer. Two classes use a single sigmoid output giving
/// P(class 1); more classes use a softmax.
class Mlp {
 public:
  Mlp() = default;
  Mlp(std::size_t inputs, std::size_t hidden, std::size_t classes, Rng& rng);

  RowMatrix w1;        ///< hidden x inputs
  Eigen::VectorXd b1;  ///< hidden
  RowMatrix w2;        ///< outputs x hidden
  Eigen::VectorXd b2;  ///< outputs

  std::size_t inputs() const noexcept { return static_cast<std::size_t>(w1.cols()); }
  std::size_t classes() const noexcept { return classes_; }

  nn::ParamList parameters();

  /// Class probabilities (length `classes()`).
  Eigen::VectorXd predict_proba(const Eigen::VectorXd& x) const;
  std::size_t predict(const Eigen::VectorXd& x) const;

  /// Cross-entropy of one example; adds `grad_scale` times its gradient into
  /// `grads` when non-null.
  double example_loss(const Eigen::VectorXd& x, std::size_t cls, Mlp* grads,
                      double grad_scale = 1.0) const;

 private:
  std::size_t classes_ = 2;
};

/// Weighted mean cross-entropy over a dataset; `grads`, when non-null, is
/// overwritten with its gradient.
double mlp_dataset_loss(const Mlp& model, std::span<const Eigen::VectorXd> xs,
                        std::span<const std::size_t> classes,
                        std::span<const double> sample_weights, Mlp* grads);

/// Full-batch Adam from a seeded Xavier-uniform initialization. Throws
/// ValidationError unless at least two classes are present.
Mlp train_mlp(std::span<const Eigen::VectorXd> xs, std::span<const std::size_t> classes,
              std::size_t num_classes, const MlpConfig& config);

}  // namespace credo

#pragma once

#include <cstddef>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "credo/nn.hpp"
#include "credo/random.hpp"
#include "credo/text.hpp"

namespace credo {

struct SentimentConfig {
  std::size_t embed_dim = 32;
  std::size_t hidden_size = 64;
  std::size_t max_tokens = 200;
  double embed_init_scale = 0.1;
  /// Train only the logistic head on top of the randomly initialized
  /// encoder instead of training both jointly.
  bool head_only = false;
  nn::TrainingConfig training;
};

struct SentimentExample {
  std::string text;
  int label = 1;  ///< +1 positive, -1 negative

  friend bool operator==(const SentimentExample&, const SentimentExample&) = default;
};

/// Embedding, single-direction LSTM, mean pooling over every step, then a
/// logistic head.
class SentimentModel {
 public:
  SentimentModel(Vocabulary vocab, SentimentConfig config, Rng& rng);

  const SentimentConfig& config() const noexcept { return config_; }
  const Vocabulary& vocabulary() const noexcept { return vocab_; }

  EmbeddingTable embedding;
  nn::LstmParams lstm;
  Eigen::VectorXd head_weights;  ///< H
  Eigen::VectorXd head_bias;     ///< length 1

  /// embedding, lstm, head weights, head bias.
  nn::ParamList parameters();

  /// Throws EmptySequence when the text has no tokens.
  std::vector<Vocabulary::Id> ids(std::string_view text) const;
  double logit(std::span<const Vocabulary::Id> ids) const;

  /// Binary cross-entropy for label +1/-1; the gradient is added into
  /// `grads` when it is non-null.
  double example_loss(std::span<const Vocabulary::Id> ids, int label,
                      SentimentModel* grads) const;

  void save(const std::filesystem::path& path, std::uint64_t seed);
  static SentimentModel load(const std::filesystem::path& path);

 private:
  SentimentConfig config_;
  Vocabulary vocab_;
};

/// Probability that `text` carries positive sentiment.
double sentiment_prob(std::string_view text, const SentimentModel& model);

/// 1 - |2p - 1|: one at p = 0.5, zero at either pole.
double neutrality(double p);

SentimentModel train_sentiment(std::span<const SentimentExample> examples,
                               const SentimentConfig& config,
                               nn::TrainingReport* report = nullptr);

}  // namespace credo

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

struct SiameseConfig {
  std::size_t embed_dim = 32;
  std::size_t hidden_size = 64;
  std::size_t max_tokens = 200;
  /// Negatives are pushed below this cosine. Below zero so that contradicting
  /// texts land under 0.5 after the (cos + 1) / 2 rescaling.
  double margin = -0.5;
  double embed_init_scale = 0.1;
  nn::TrainingConfig training;
};

/// Embedding table plus a forward and a backward LSTM, mapping a token
/// sequence to a 2H vector.
struct BiLstmEncoder {
  Vocabulary vocab;
  EmbeddingTable embedding;
  nn::LstmParams forward;
  nn::LstmParams backward;
  std::size_t max_tokens = 200;

  /// Tokenizes, maps to ids and truncates to `max_tokens`. Throws
  /// EmptySequence when nothing is left.
  std::vector<Vocabulary::Id> ids(std::string_view text) const;
  Eigen::VectorXd encode_ids(std::span<const Vocabulary::Id> ids,
                             nn::BiLstmTrace* trace = nullptr) const;
};

struct PairExample {
  std::string text_a;
  std::string text_b;
  int label = 1;  ///< +1 similar, -1 dissimilar

  friend bool operator==(const PairExample&, const PairExample&) = default;
};

/// Twin encoders over a single parameter set. `twin(0)` and `twin(1)` return
/// the same object, so weight sharing holds by construction.
class SiameseModel {
 public:
  SiameseModel(Vocabulary vocab, SiameseConfig config, Rng& rng);

  const SiameseConfig& config() const noexcept { return config_; }
  const BiLstmEncoder& twin(int which) const;
  BiLstmEncoder& encoder() noexcept { return encoder_; }
  const BiLstmEncoder& encoder() const noexcept { return encoder_; }

  /// embedding, forward LSTM, backward LSTM, in that order.
  nn::ParamList parameters();

  /// Contrastive loss of one pair; when `grads` is non-null the gradient is
  /// added to its parameters.
  double pair_loss(std::span<const Vocabulary::Id> ids_a, std::span<const Vocabulary::Id> ids_b,
                   int label, SiameseModel* grads) const;

  void save(const std::filesystem::path& path, std::uint64_t seed);
  static SiameseModel load(const std::filesystem::path& path);

 private:
  SiameseConfig config_;
  BiLstmEncoder encoder_;
};

Eigen::VectorXd encode(std::string_view text, const SiameseModel& model);

/// Cosine similarity. Throws ValidationError on a length mismatch and
/// DegenerateEncoding if either vector is zero.
double energy(const Eigen::VectorXd& u, const Eigen::VectorXd& v);

/// (1-sim)^2 for label +1, max(0, sim-margin)^2 for label -1.
double contrastive_loss(double sim, int label, double margin = 0.0);
/// d contrastive_loss / d sim.
double contrastive_loss_grad(double sim, int label, double margin = 0.0);

/// Builds a vocabulary from every token of the pair texts.
Vocabulary build_vocabulary(std::span<const PairExample> pairs);

SiameseModel train_siamese(std::span<const PairExample> pairs, const SiameseConfig& config,
                           nn::TrainingReport* report = nullptr);

/// Similarity rescaled to [0,1] as (cos + 1) / 2.
double ss_score(std::string_view input_article, std::string_view retrieved_summary,
                const SiameseModel& model);

}  // namespace credo

#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "credo/bm25.hpp"
#include "credo/ensemble.hpp"
#include "credo/similarity.hpp"
#include "credo/sentiment.hpp"

namespace credo {

struct SyntheticConfig {
  std::size_t claims = 500;
  /// Share of credible claims; the default mirrors 1277 true of 4856.
  double true_fraction = 1277.0 / 4856.0;
  std::size_t docs_per_fact = 5;
  /// Share of false claims that restate their fact faithfully but in
  /// polarized language, so only sentiment gives them away.
  double exaggeration_rate = 0.10;
  /// Share of contradicting false claims written with polarized words.
  double polarized_contradiction_rate = 0.5;
  std::size_t similarity_pairs = 1200;
  std::size_t sentiment_examples = 800;
  std::size_t sts_pairs = 200;
};

struct StsPair {
  std::string text_a;
  std::string text_b;
  double score = 0.0;  ///< gold similarity in [0, 5]
};

struct SyntheticDataset {
  std::vector<ClaimArticle> claims;
  std::vector<KbDocument> kb;
  std::vector<PairExample> pairs;
  std::vector<SentimentExample> sentiment;
  std::vector<std::pair<std::string, double>> reputation;  ///< (domain, score)
  std::vector<StsPair> sts;
};

/// round(claims * true_fraction).
std::size_t synthetic_true_count(const SyntheticConfig& config);

/// Template-based corpus over a closed vocabulary; identical seeds give
/// identical datasets.
SyntheticDataset generate_synthetic(const SyntheticConfig& config, std::uint64_t seed);

}  // namespace credo

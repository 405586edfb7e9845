#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>

#include "credo/bm25.hpp"
#include "credo/ensemble.hpp"
#include "credo/mlp.hpp"
#include "credo/sentiment.hpp"
#include "credo/similarity.hpp"
#include "credo/synthetic.hpp"
#include "credo/textrank.hpp"

namespace credo {

enum class Fusion { EqWeights, Mlp };

std::string_view to_string(Fusion f);    ///< "eq" / "mlp"
Fusion parse_fusion(std::string_view s);  ///< throws ConfigError
std::string_view to_string(LabelMode m);  ///< "binary" / "multiclass"
LabelMode parse_label_mode(std::string_view s);

/// Every tunable constant of the pipeline. Seeds for the individual
/// components are derived from `seed`.
struct Config {
  std::uint64_t seed = 42;

  std::string stopwords;  ///< path; empty selects the built-in list
  std::size_t keyword_top_k = 10;
  Bm25Params bm25;
  std::size_t retrieval_limit = 5;
  SummaryConfig summary;

  SiameseConfig siamese;
  SentimentConfig sentiment;

  double keyword_tau = 10.0;
  Fusion fusion = Fusion::EqWeights;
  LabelMode mode = LabelMode::Binary;
  WeightTrainingConfig weights;
  MlpConfig mlp;

  std::size_t folds = 5;
  double sts_threshold = 3.0;
  SyntheticConfig synthetic;
};

/// Parses `key = value` lines; '#' starts a comment. Keys not mentioned keep
/// their defaults. Throws ConfigError (with line number) on unknown keys or
/// malformed values.
Config parse_config(std::string_view text);
/// Also throws ConfigError when the file cannot be read.
Config load_config(const std::filesystem::path& path);

/// Writes every key with its current value, one per line, grouped with
/// comments. Rendering the parse of a rendering reproduces it exactly.
std::string render_config(const Config& config);

}  // namespace credo

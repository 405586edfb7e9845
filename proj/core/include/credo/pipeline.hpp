#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "credo/bm25.hpp"
#include "credo/config.hpp"
#include "credo/ensemble.hpp"
#include "credo/eval.hpp"
#include "credo/mlp.hpp"
#include "credo/sentiment.hpp"
#include "credo/similarity.hpp"
#include "credo/text.hpp"
#include "credo/trust.hpp"

namespace credo {

/// Independent seed streams derived from the master seed.
enum class SeedStream : std::uint64_t { Siamese = 1, Sentiment, Folds, Fusion, Shuffle, Synthetic };
std::uint64_t component_seed(std::uint64_t master, SeedStream stream);

struct Models {
  SiameseModel siamese;
  SentimentModel sentiment;
};

/// Author and website ledgers sharing one reputation provider.
struct TrustState {
  TrustLedger authors;
  TrustLedger websites;

  explicit TrustState(std::shared_ptr<const ReputationProvider> provider = nullptr);
};

/// Feeds each claim's label to the ledgers of its author and website, in
/// the given order. Claims without a label are skipped.
void replay_claims(TrustState& trust, std::span<const ClaimArticle> claims, LabelMode mode);

/// Parts of one evidence document's features that do not depend on trust.
struct EvidenceRecord {
  std::string doc_id;
  std::size_t rank = 0;
  double bm25 = 0.0;
  std::string summary;
  double kterm = 0.0;
  double ss = 0.0;
  std::string author_key;  ///< normalized author
  std::string domain_key;  ///< normalized domain
};

struct ClaimEvidence {
  std::string claim_id;
  double ns = 0.0;
  std::vector<EvidenceRecord> evidence;  ///< in rank order; empty when nothing was retrieved
  std::string author_key;
  std::string domain_key;
};

/// Retrieval, summarization, keyword, similarity and neutrality features of
/// one claim. Errors from a module are rethrown with the evidence rank.
ClaimEvidence gather_evidence(const ClaimArticle& claim, const InvertedIndex& index,
                              const StopwordSet& stopwords, const Models& models,
                              const Config& config);

/// One bundle per evidence document with acs/wts from the ledgers. Without
/// evidence a single fallback bundle is returned: kterm 0, ss 0, trust from
/// the claim's own author and website, ns from the claim.
std::vector<FeatureBundle> assemble_features(const ClaimEvidence& evidence,
                                             const TrustState& trust);

/// gather_evidence followed by assemble_features.
std::vector<FeatureBundle> assemble_features(const ClaimArticle& claim, const InvertedIndex& index,
                                             const StopwordSet& stopwords, const Models& models,
                                             const TrustState& trust, const Config& config);

/// A trained fusion stage. The weight vector is always learned so that per
/// evidence contributions can be reported; in MLP mode the MLP decides the
/// overall score and label.
struct FusionModel {
  Fusion kind = Fusion::EqWeights;
  LabelMode mode = LabelMode::Binary;
  FeatureMask active = kAllFeatures;
  WeightVector weights;
  std::optional<Mlp> mlp;

  /// Credibility score in [0,1]; in multi-class MLP mode the probability mass
  /// on the two credible classes.
  double score(std::span<const FeatureBundle> bundles) const;
  Verdict predict(std::span<const FeatureBundle> bundles) const;
};

/// MLP input: rank-aggregated features with excluded entries zeroed.
Eigen::VectorXd mlp_input(std::span<const FeatureBundle> bundles, const FeatureMask& active);

FusionModel train_fusion(std::span<const std::vector<FeatureBundle>> evidence,
                         std::span<const Verdict> labels, Fusion kind, LabelMode mode,
                         const FeatureMask& active, const Config& config, std::uint64_t seed);

std::string serialize_fusion(const FusionModel& model);
FusionModel parse_fusion_model(std::string_view json_text);

struct ScoredEvidence {
  std::string doc_id;
  std::size_t rank = 0;
  double cc = 0.0;
  FeatureBundle features;
};

struct ScoredClaim {
  std::string claim_id;
  double credo = 0.0;
  Verdict label = Verdict::False;
  std::vector<ScoredEvidence> per_evidence;
};

ScoredClaim score_claim(const ClaimEvidence& evidence, const TrustState& trust,
                        const FusionModel& fusion);
/// One JSON object per line.
std::string serialize_scores(std::span<const ScoredClaim> scores);

struct EvalOptions {
  std::size_t folds = 5;
  std::uint64_t seed = 42;
  LabelMode mode = LabelMode::Binary;
  Fusion fusion = Fusion::EqWeights;
  FeatureMask active = kAllFeatures;
  /// Permute labels across claims before anything else (no-signal control).
  bool shuffle_labels = false;
};

struct EvalResult {
  std::vector<MetricsReport> folds;
  MetricsReport mean;
};

/// K-fold evaluation over claims whose evidence has already been gathered
/// (`evidence[i]` belongs to `claims[i]`). Each fold starts from empty
/// ledgers, replays its training claims in dataset order, trains the fusion
/// stage and scores the held-out claims. In multi-class mode the overall
/// accuracy is the exact four-way match; the other metrics use the
/// credible / non-credible split.
EvalResult run_eval(std::span<const ClaimArticle> claims, std::span<const ClaimEvidence> evidence,
                    std::shared_ptr<const ReputationProvider> provider, const EvalOptions& options,
                    const Config& config);

std::string serialize_eval(const EvalResult& result, const EvalOptions& options);

}  // namespace credo

#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "credo/rake.hpp"
#include "credo/trust.hpp"

namespace credo {

/// An input article whose credibility is scored.
struct ClaimArticle {
  std::string id;
  std::string text;
  std::optional<Verdict> label;  ///< required for training instances
  std::optional<std::string> author;
  std::string source_url;
  std::optional<std::string> date;

  friend bool operator==(const ClaimArticle&, const ClaimArticle&) = default;
};

inline constexpr std::size_t kFeatureCount = 5;

/// Feature order used by weight vectors, masks and MLP inputs.
enum class Feature : std::size_t { Keywords, Author, Website, Neutrality, Similarity };

std::string_view feature_name(Feature f);  ///< "kterm", "acs", "wts", "ns", "ss"

struct FeatureBundle {
  double kterm = 0.0;
  double acs = 0.0;
  double wts = 0.0;
  double ns = 0.0;
  double ss = 0.0;

  std::array<double, kFeatureCount> values() const { return {kterm, acs, wts, ns, ss}; }
  static FeatureBundle from_values(const std::array<double, kFeatureCount>& v);
  double operator[](Feature f) const { return values()[static_cast<std::size_t>(f)]; }

  /// Throws ValidationError naming the first field outside [0,1].
  void validate() const;

  friend bool operator==(const FeatureBundle&, const FeatureBundle&) = default;
};

/// true = the feature takes part in fusion. Ablations clear one entry.
using FeatureMask = std::array<bool, kFeatureCount>;
inline constexpr FeatureMask kAllFeatures = {true, true, true, true, true};
FeatureMask mask_without(Feature excluded);

/// Fusion weights on the simplex. Active weights are strictly positive,
/// masked-out weights are exactly zero, and the total is 1 within 1e-9.
class WeightVector {
 public:
  /// Uniform over the active features.
  explicit WeightVector(const FeatureMask& active = kAllFeatures);
  /// Throws ValidationError if `w` violates the constraints above.
  WeightVector(const std::array<double, kFeatureCount>& w, const FeatureMask& active = kAllFeatures);

  /// Softmax over the active logits; masked-out logits are ignored.
  static WeightVector from_logits(const std::array<double, kFeatureCount>& logits,
                                  const FeatureMask& active = kAllFeatures);

  const std::array<double, kFeatureCount>& values() const noexcept { return w_; }
  const FeatureMask& active() const noexcept { return active_; }
  double operator[](Feature f) const { return w_[static_cast<std::size_t>(f)]; }

 private:
  std::array<double, kFeatureCount> w_{};
  FeatureMask active_{};
};

/// s / (s + tau) with s the summed kscore.
double keyword_feature(std::span<const Keyword> keywords, double tau = 10.0);

/// Weighted sum of the five features.
double credibility_contribution(const FeatureBundle& f, const WeightVector& w);

struct EvidenceContribution {
  std::size_t rank = 0;  ///< 1-based retrieval rank
  double cc = 0.0;
};

struct CredoScore {
  double value = 0.0;
  std::vector<EvidenceContribution> contributions;
};

/// exp(1 - rank/n) for rank = 1..n.
std::vector<double> rank_weights(std::size_t n);

/// Rank-weighted mean of the contributions. Throws NoEvidence when n == 0 and
/// ValidationError if the ranks are not a permutation of 1..n.
CredoScore credo_score(std::span<const EvidenceContribution> contribs, std::size_t n);

/// Applies the same rank weighting to each feature separately; `ranked[i]`
/// is the bundle at rank i + 1. Throws NoEvidence when empty.
FeatureBundle aggregate_features(std::span<const FeatureBundle> ranked);

/// Binary: True at score >= 0.5, else False. Multi-class: quarter bins.
Verdict classify(double score, LabelMode mode);

/// Training target for the weight learner: 0/1 in binary mode, the graded
/// tag value in multi-class mode.
double fusion_target(Verdict v, LabelMode mode);

struct WeightTrainingConfig {
  std::size_t epochs = 300;
  double learning_rate = 0.05;
  /// Scales each example by n / (2 n_class) so both classes carry equal
  /// total weight.
  bool class_balanced = true;
};

/// Per-example weights for balancing; 1 everywhere when disabled. Targets at
/// or above 0.5 count as the credible class.
std::vector<double> balance_weights(std::span<const double> targets, bool enabled);

/// Weighted mean cross-entropy between credo_score (built from CC per
/// evidence and the rank weighting) and the targets, as a function of the
/// five weight logits. When `grad` is non-empty it receives d loss/d logits.
double weight_loss(std::span<const double> logits,
                   std::span<const std::vector<FeatureBundle>> evidence,
                   std::span<const double> targets, std::span<const double> sample_weights,
                   const FeatureMask& active, std::span<double> grad);

/// Full-batch Adam on the logits from zero (uniform weights). Throws
/// ValidationError unless both classes are present.
WeightVector train_weights(std::span<const std::vector<FeatureBundle>> evidence,
                           std::span<const double> targets, const FeatureMask& active,
                           const WeightTrainingConfig& config);

}  // namespace credo

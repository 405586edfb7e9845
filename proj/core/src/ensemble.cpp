#include "credo/ensemble.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "credo/error.hpp"
#include "credo/nn.hpp"

namespace credo {
namespace {

constexpr double kProbFloor = 1e-12;

void check_two_classes(std::span<const double> targets) {
  bool pos = false;
  bool neg = false;
  for (double t : targets) (t >= 0.5 ? pos : neg) = true;
  if (!pos || !neg) throw ValidationError("training data must contain both classes");
}

}  // namespace

std::string_view feature_name(Feature f) {
  switch (f) {
    case Feature::Keywords: return "kterm";
    case Feature::Author: return "acs";
    case Feature::Website: return "wts";
    case Feature::Neutrality: return "ns";
    case Feature::Similarity: return "ss";
  }
  return "?";
}

FeatureBundle FeatureBundle::from_values(const std::array<double, kFeatureCount>& v) {
  return {v[0], v[1], v[2], v[3], v[4]};
}

void FeatureBundle::validate() const {
  auto v = values();
  for (std::size_t i = 0; i < kFeatureCount; ++i) {
    if (!std::isfinite(v[i]) || v[i] < 0.0 || v[i] > 1.0) {
      throw ValidationError(std::string(feature_name(static_cast<Feature>(i))) +
                            " outside [0,1]: " + std::to_string(v[i]));
    }
  }
}

FeatureMask mask_without(Feature excluded) {
  FeatureMask m = kAllFeatures;
  m[static_cast<std::size_t>(excluded)] = false;
  return m;
}

WeightVector::WeightVector(const FeatureMask& active)
    : WeightVector(from_logits({0, 0, 0, 0, 0}, active)) {}

WeightVector::WeightVector(const std::array<double, kFeatureCount>& w, const FeatureMask& active)
    : w_(w), active_(active) {
  double total = 0.0;
  bool any = false;
  for (std::size_t i = 0; i < kFeatureCount; ++i) {
    if (!std::isfinite(w[i])) throw ValidationError("weight is not finite");
    if (active[i] && !(w[i] > 0.0)) throw ValidationError("active weights must be positive");
    if (!active[i] && w[i] != 0.0) throw ValidationError("excluded weights must be zero");
    any = any || active[i];
    total += w[i];
  }
  if (!any) throw ValidationError("at least one feature must be active");
  if (std::abs(total - 1.0) > 1e-9) {
    throw ValidationError("weights must sum to 1, got " + std::to_string(total));
  }
}

WeightVector WeightVector::from_logits(const std::array<double, kFeatureCount>& logits,
                                       const FeatureMask& active) {
  double top = -INFINITY;
  for (std::size_t i = 0; i < kFeatureCount; ++i) {
    if (active[i]) top = std::max(top, logits[i]);
  }
  if (top == -INFINITY) throw ValidationError("at least one feature must be active");
  std::array<double, kFeatureCount> w{};
  double total = 0.0;
  for (std::size_t i = 0; i < kFeatureCount; ++i) {
    if (active[i]) total += (w[i] = std::exp(logits[i] - top));
  }
  for (double& x : w) x /= total;
  return WeightVector(w, active);
}

double keyword_feature(std::span<const Keyword> keywords, double tau) {
  if (!(tau > 0.0)) throw ValidationError("keyword tau must be positive");
  double s = 0.0;
  for (const auto& k : keywords) s += k.kscore;
  return s <= 0.0 ? 0.0 : s / (s + tau);
}

double credibility_contribution(const FeatureBundle& f, const WeightVector& w) {
  f.validate();
  auto fv = f.values();
  double cc = 0.0;
  for (std::size_t i = 0; i < kFeatureCount; ++i) cc += w.values()[i] * fv[i];
  return std::clamp(cc, 0.0, 1.0);
}

std::vector<double> rank_weights(std::size_t n) {
  std::vector<double> out(n);
  for (std::size_t r = 1; r <= n; ++r) {
    out[r - 1] = std::exp(1.0 - static_cast<double>(r) / static_cast<double>(n));
  }
  return out;
}

CredoScore credo_score(std::span<const EvidenceContribution> contribs, std::size_t n) {
  if (n == 0) throw NoEvidence();
  if (contribs.size() != n) throw ValidationError("expected one contribution per rank");
  std::vector<bool> seen(n, false);
  std::vector<double> rho = rank_weights(n);
  double num = 0.0;
  double den = 0.0;
  for (const auto& c : contribs) {
    if (c.rank < 1 || c.rank > n || seen[c.rank - 1]) {
      throw ValidationError("ranks must be a permutation of 1..n");
    }
    seen[c.rank - 1] = true;
    num += rho[c.rank - 1] * c.cc;
    den += rho[c.rank - 1];
  }
  CredoScore out;
  out.value = num / den;
  out.contributions.assign(contribs.begin(), contribs.end());
  return out;
}

FeatureBundle aggregate_features(std::span<const FeatureBundle> ranked) {
  if (ranked.empty()) throw NoEvidence();
  std::vector<double> rho = rank_weights(ranked.size());
  double den = std::accumulate(rho.begin(), rho.end(), 0.0);
  std::array<double, kFeatureCount> acc{};
  for (std::size_t r = 0; r < ranked.size(); ++r) {
    auto v = ranked[r].values();
    for (std::size_t i = 0; i < kFeatureCount; ++i) acc[i] += rho[r] * v[i];
  }
  for (double& x : acc) x = std::clamp(x / den, 0.0, 1.0);
  return FeatureBundle::from_values(acc);
}

Verdict classify(double score, LabelMode mode) {
  if (mode == LabelMode::Binary) return score >= 0.5 ? Verdict::True : Verdict::False;
  if (score < 0.25) return Verdict::False;
  if (score < 0.5) return Verdict::MostlyFalse;
  if (score < 0.75) return Verdict::MostlyTrue;
  return Verdict::True;
}

double fusion_target(Verdict v, LabelMode mode) { return TagValue::from_verdict(v, mode).value(); }

std::vector<double> balance_weights(std::span<const double> targets, bool enabled) {
  std::vector<double> out(targets.size(), 1.0);
  if (!enabled) return out;
  double pos = 0.0;
  for (double t : targets) pos += t >= 0.5 ? 1.0 : 0.0;
  double neg = static_cast<double>(targets.size()) - pos;
  if (pos == 0.0 || neg == 0.0) return out;
  double n = static_cast<double>(targets.size());
  for (std::size_t i = 0; i < targets.size(); ++i) {
    out[i] = targets[i] >= 0.5 ? n / (2.0 * pos) : n / (2.0 * neg);
  }
  return out;
}

double weight_loss(std::span<const double> logits,
                   std::span<const std::vector<FeatureBundle>> evidence,
                   std::span<const double> targets, std::span<const double> sample_weights,
                   const FeatureMask& active, std::span<double> grad) {
  if (logits.size() != kFeatureCount) throw ValidationError("expected five weight logits");
  if (evidence.size() != targets.size() || targets.size() != sample_weights.size()) {
    throw ValidationError("evidence, targets and sample weights differ in length");
  }
  std::array<double, kFeatureCount> theta{};
  std::copy(logits.begin(), logits.end(), theta.begin());
  WeightVector w = WeightVector::from_logits(theta, active);

  double total_weight = 0.0;
  double loss = 0.0;
  std::array<double, kFeatureCount> dw{};
  for (std::size_t c = 0; c < evidence.size(); ++c) {
    const auto& bundles = evidence[c];
    std::vector<EvidenceContribution> contribs;
    for (std::size_t r = 0; r < bundles.size(); ++r) {
      contribs.push_back({r + 1, credibility_contribution(bundles[r], w)});
    }
    double p = credo_score(contribs, bundles.size()).value;
    double y = targets[c];
    double s = sample_weights[c];
    total_weight += s;
    double pc = std::clamp(p, kProbFloor, 1.0 - kProbFloor);
    loss -= s * (y * std::log(pc) + (1.0 - y) * std::log(1.0 - pc));
    if (grad.empty() || pc != p) continue;
    double dp = s * (p - y) / (p * (1.0 - p));
    // The score is linear in the weights with coefficients equal to the
    // rank-aggregated features.
    auto agg = aggregate_features(bundles).values();
    for (std::size_t i = 0; i < kFeatureCount; ++i) dw[i] += dp * agg[i];
  }
  if (total_weight <= 0.0) throw ValidationError("sample weights sum to zero");
  if (!grad.empty()) {
    if (grad.size() != kFeatureCount) throw ValidationError("gradient must have five entries");
    double mean = 0.0;
    for (std::size_t i = 0; i < kFeatureCount; ++i) mean += w.values()[i] * dw[i];
    for (std::size_t i = 0; i < kFeatureCount; ++i) {
      grad[i] = active[i] ? w.values()[i] * (dw[i] - mean) / total_weight : 0.0;
    }
  }
  return loss / total_weight;
}

WeightVector train_weights(std::span<const std::vector<FeatureBundle>> evidence,
                           std::span<const double> targets, const FeatureMask& active,
                           const WeightTrainingConfig& config) {
  check_two_classes(targets);
  std::vector<double> sample_weights = balance_weights(targets, config.class_balanced);
  std::vector<double> logits(kFeatureCount, 0.0);
  std::vector<double> grad(kFeatureCount, 0.0);
  nn::Adam adam(kFeatureCount, {config.learning_rate});
  for (std::size_t epoch = 0; epoch < config.epochs; ++epoch) {
    weight_loss(logits, evidence, targets, sample_weights, active, grad);
    adam.step(logits, grad);
  }
  std::array<double, kFeatureCount> theta{};
  std::copy(logits.begin(), logits.end(), theta.begin());
  return WeightVector::from_logits(theta, active);
}

}  // namespace credo

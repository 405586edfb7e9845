#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "credo/ensemble.hpp"
#include "credo/error.hpp"
#include "credo/nn.hpp"
#include "credo/random.hpp"

using namespace credo;

namespace {

using Weights = std::array<double, kFeatureCount>;

FeatureBundle random_bundle(Rng& rng) {
  return FeatureBundle::from_values({uniform01(rng), uniform01(rng), uniform01(rng),
                                     uniform01(rng), uniform01(rng)});
}

std::array<double, kFeatureCount> random_simplex(Rng& rng) {
  std::array<double, kFeatureCount> w{};
  double total = 0.0;
  for (double& x : w) total += (x = uniform(rng, 0.05, 1.0));
  for (double& x : w) x /= total;
  return w;
}

/// Direct evaluation of the rank-weighted mean, ranks given in order.
double rank_mean(const std::vector<double>& cc) {
  double n = static_cast<double>(cc.size());
  double num = 0.0;
  double den = 0.0;
  for (std::size_t r = 1; r <= cc.size(); ++r) {
    double rho = std::exp(1.0 - static_cast<double>(r) / n);
    num += rho * cc[r - 1];
    den += rho;
  }
  return num / den;
}

std::vector<EvidenceContribution> in_order(const std::vector<double>& cc) {
  std::vector<EvidenceContribution> out;
  for (std::size_t r = 0; r < cc.size(); ++r) out.push_back({r + 1, cc[r]});
  return out;
}

}  // namespace

TEST_CASE("keyword_feature") {
  CHECK(keyword_feature({}) == 0.0);
  std::vector<Keyword> kws = {{"a b", 4.0, 0}, {"c", 6.0, 3}};
  CHECK(keyword_feature(kws) == doctest::Approx(0.5));
  CHECK(keyword_feature(kws, 30.0) == doctest::Approx(0.25));
  CHECK_THROWS_AS(keyword_feature(kws, 0.0), ValidationError);

  double prev = 0.0;
  for (double s = 0.5; s < 200.0; s *= 1.7) {
    std::vector<Keyword> one = {{"x", s, 0}};
    double k = keyword_feature(one);
    CHECK(k > prev);
    CHECK(k < 1.0);
    prev = k;
  }
}

TEST_CASE("weight vectors") {
  WeightVector uniform_all;
  for (double w : uniform_all.values()) CHECK(w == doctest::Approx(0.2));

  WeightVector no_ss(mask_without(Feature::Similarity));
  CHECK(no_ss[Feature::Similarity] == 0.0);
  CHECK(no_ss[Feature::Author] == doctest::Approx(0.25));

  CHECK_THROWS_AS(WeightVector(Weights{0.5, 0.5, 0.0, 0.0, 0.0}), ValidationError);
  CHECK_THROWS_AS(WeightVector(Weights{0.3, 0.3, 0.2, 0.2, 0.2}), ValidationError);
  CHECK_THROWS_AS(WeightVector(Weights{0.25, 0.25, 0.25, 0.25, 0.0}, kAllFeatures), ValidationError);
  CHECK_NOTHROW(WeightVector(Weights{0.25, 0.25, 0.25, 0.25, 0.0}, mask_without(Feature::Similarity)));
  CHECK_THROWS_AS(WeightVector(Weights{0.2, 0.2, 0.2, 0.2, 0.2}, mask_without(Feature::Keywords)),
                  ValidationError);

  auto w = WeightVector::from_logits({0.0, 0.0, 0.0, 0.0, std::log(2.0)});
  CHECK(w[Feature::Similarity] == doctest::Approx(2.0 / 6.0));
  auto masked = WeightVector::from_logits({9.0, 1.0, 1.0, 1.0, 1.0}, mask_without(Feature::Keywords));
  CHECK(masked[Feature::Keywords] == 0.0);
  CHECK(masked[Feature::Neutrality] == doctest::Approx(0.25));

  CHECK(feature_name(Feature::Keywords) == "kterm");
  CHECK(feature_name(Feature::Similarity) == "ss");
}

TEST_CASE("credibility_contribution") {
  WeightVector w(Weights{0.1, 0.2, 0.2, 0.2, 0.3});
  CHECK(credibility_contribution(FeatureBundle{1, 0, 0, 0, 1}, w) == doctest::Approx(0.4));
  CHECK(credibility_contribution(FeatureBundle{0.5, 0.5, 0.5, 0.5, 0.5}, WeightVector()) ==
        doctest::Approx(0.5));
  CHECK(credibility_contribution(FeatureBundle{1, 1, 1, 1, 1}, w) == doctest::Approx(1.0));
  CHECK_THROWS_AS(credibility_contribution(FeatureBundle{0, 1.5, 0, 0, 0}, w), ValidationError);
  try {
    FeatureBundle{0, 0, -0.1, 0, 0}.validate();
    FAIL("expected ValidationError");
  } catch (const ValidationError& e) {
    CHECK(std::string(e.what()).find("wts") != std::string::npos);
  }

  Rng rng(41);
  for (int i = 0; i < 1000; ++i) {
    auto f = random_bundle(rng);
    WeightVector wv(random_simplex(rng));
    auto fv = f.values();
    double want = 0.0;
    for (std::size_t k = 0; k < kFeatureCount; ++k) want += wv.values()[k] * fv[k];
    double cc = credibility_contribution(f, wv);
    CHECK(std::abs(cc - want) < 1e-12);
    CHECK(cc >= *std::min_element(fv.begin(), fv.end()) - 1e-12);
    CHECK(cc <= *std::max_element(fv.begin(), fv.end()) + 1e-12);
  }
}

TEST_CASE("credo_score examples") {
  CHECK(credo_score(in_order({0.7}), 1).value == 0.7);

  // rank weights e^0.5 and 1
  double two = credo_score(in_order({0.9, 0.3}), 2).value;
  CHECK(std::abs(two - (std::exp(0.5) * 0.9 + 0.3) / (std::exp(0.5) + 1.0)) < 1e-12);
  CHECK(std::abs(two - 0.67347) < 1e-5);

  CHECK(credo_score(in_order({0.42, 0.42, 0.42, 0.42}), 4).value == doctest::Approx(0.42));

  std::vector<EvidenceContribution> swapped = {{2, 0.3}, {1, 0.9}};
  CHECK(credo_score(swapped, 2).value == doctest::Approx(two).epsilon(1e-15));

  CHECK_THROWS_AS(credo_score({}, 0), NoEvidence);
  CHECK_THROWS_AS(credo_score(in_order({0.5}), 2), ValidationError);
  std::vector<EvidenceContribution> dup = {{1, 0.3}, {1, 0.9}};
  CHECK_THROWS_AS(credo_score(dup, 2), ValidationError);
  std::vector<EvidenceContribution> zero = {{0, 0.3}};
  CHECK_THROWS_AS(credo_score(zero, 1), ValidationError);

  auto rho = rank_weights(3);
  CHECK(rho[2] == 1.0);
  CHECK(rho[0] == doctest::Approx(std::exp(2.0 / 3.0)));
}

TEST_CASE("credo_score bounds and rank monotonicity") {
  Rng rng(42);
  for (int trial = 0; trial < 10000; ++trial) {
    std::size_t n = 1 + uniform_index(rng, 10);
    std::vector<double> cc(n);
    for (double& x : cc) x = uniform01(rng);
    double s = credo_score(in_order(cc), n).value;
    CHECK(std::abs(s - rank_mean(cc)) < 1e-12);
    CHECK(s >= *std::min_element(cc.begin(), cc.end()) - 1e-12);
    CHECK(s <= *std::max_element(cc.begin(), cc.end()) + 1e-12);

    // raising any one contribution never lowers the score
    std::size_t k = uniform_index(rng, n);
    auto raised = cc;
    raised[k] = std::min(1.0, raised[k] + uniform(rng, 0.0, 0.5));
    CHECK(credo_score(in_order(raised), n).value >= s - 1e-12);

    // the same contribution counts more at a better rank
    if (n >= 2) {
      std::vector<double> lo(n, 0.0);
      std::vector<double> hi(n, 0.0);
      std::size_t r = 1 + uniform_index(rng, n - 1);
      hi[r - 1] = 1.0;
      lo[r] = 1.0;
      CHECK(credo_score(in_order(hi), n).value > credo_score(in_order(lo), n).value);
    }
  }
}

TEST_CASE("aggregate_features matches per-feature credo_score") {
  Rng rng(43);
  for (int trial = 0; trial < 200; ++trial) {
    std::size_t n = 1 + uniform_index(rng, 6);
    std::vector<FeatureBundle> bundles;
    for (std::size_t r = 0; r < n; ++r) bundles.push_back(random_bundle(rng));
    auto agg = aggregate_features(bundles).values();
    for (std::size_t i = 0; i < kFeatureCount; ++i) {
      std::vector<double> column;
      for (const auto& b : bundles) column.push_back(b.values()[i]);
      CHECK(std::abs(agg[i] - rank_mean(column)) < 1e-12);
    }
    // fusing then averaging equals averaging then fusing
    WeightVector w(random_simplex(rng));
    std::vector<double> cc;
    for (const auto& b : bundles) cc.push_back(credibility_contribution(b, w));
    CHECK(std::abs(credibility_contribution(aggregate_features(bundles), w) - rank_mean(cc)) <
          1e-12);
  }
  CHECK_THROWS_AS(aggregate_features({}), NoEvidence);
}

TEST_CASE("classify") {
  CHECK(classify(0.5, LabelMode::Binary) == Verdict::True);
  CHECK(classify(0.4999, LabelMode::Binary) == Verdict::False);
  CHECK(classify(0.0, LabelMode::MultiClass) == Verdict::False);
  CHECK(classify(0.25, LabelMode::MultiClass) == Verdict::MostlyFalse);
  CHECK(classify(0.6, LabelMode::MultiClass) == Verdict::MostlyTrue);
  CHECK(classify(0.75, LabelMode::MultiClass) == Verdict::True);
  CHECK(fusion_target(Verdict::True, LabelMode::Binary) == 1.0);
  CHECK(fusion_target(Verdict::MostlyFalse, LabelMode::Binary) == 0.0);
}

TEST_CASE("balance_weights") {
  std::vector<double> t = {1, 1, 1, 0};
  auto w = balance_weights(t, true);
  CHECK(w[0] == doctest::Approx(4.0 / 6.0));
  CHECK(w[3] == doctest::Approx(2.0));
  CHECK(balance_weights(t, false) == std::vector<double>(4, 1.0));
  std::vector<double> one_class = {1, 1};
  CHECK(balance_weights(one_class, true) == std::vector<double>(2, 1.0));
}

TEST_CASE("weight_loss passes grad_check") {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    Rng rng(700 + seed);
    std::size_t claims = 3 + uniform_index(rng, 6);
    std::vector<std::vector<FeatureBundle>> evidence(claims);
    std::vector<double> targets;
    for (auto& ev : evidence) {
      std::size_t n = 1 + uniform_index(rng, 4);
      for (std::size_t r = 0; r < n; ++r) ev.push_back(random_bundle(rng));
      targets.push_back(seed % 4 == 3 ? uniform01(rng) : (bernoulli(rng, 0.5) ? 1.0 : 0.0));
    }
    auto sw = balance_weights(targets, seed % 2 == 0);
    FeatureMask mask = seed % 5 == 1 ? mask_without(Feature::Website) : kAllFeatures;
    std::vector<double> logits(kFeatureCount);
    for (double& x : logits) x = uniform(rng, -1.0, 1.0);
    auto loss = [&](std::span<const double> p, std::span<double> g) {
      return weight_loss(p, evidence, targets, sw, mask, g);
    };
    CHECK(nn::grad_check(loss, logits).max_relative_error < 1e-5);
  }
}

TEST_CASE("train_weights recovers a planted feature") {
  // Only ss carries the label; the other features are noise.
  Rng rng(44);
  std::vector<std::vector<FeatureBundle>> evidence;
  std::vector<double> targets;
  for (int c = 0; c < 200; ++c) {
    bool credible = bernoulli(rng, 0.3);
    std::vector<FeatureBundle> ev;
    for (int r = 0; r < 3; ++r) {
      auto b = random_bundle(rng);
      b.ss = credible ? uniform(rng, 0.7, 1.0) : uniform(rng, 0.0, 0.3);
      ev.push_back(b);
    }
    evidence.push_back(ev);
    targets.push_back(credible ? 1.0 : 0.0);
  }
  auto w = train_weights(evidence, targets, kAllFeatures, {});
  auto v = w.values();
  CHECK(std::max_element(v.begin(), v.end()) - v.begin() ==
        static_cast<std::ptrdiff_t>(Feature::Similarity));
  double total = 0.0;
  for (double x : v) {
    CHECK(x > 0.0);
    total += x;
  }
  CHECK(total == doctest::Approx(1.0).epsilon(1e-12));

  auto no_ss = train_weights(evidence, targets, mask_without(Feature::Similarity), {});
  CHECK(no_ss[Feature::Similarity] == 0.0);

  std::vector<double> one_class(targets.size(), 1.0);
  CHECK_THROWS_AS(train_weights(evidence, one_class, kAllFeatures, {}), ValidationError);
}

#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "credo/error.hpp"
#include "credo/pipeline.hpp"

using namespace credo;

namespace {

Models small_models(const std::vector<std::string>& words, std::uint64_t seed) {
  Vocabulary vocab;
  for (const auto& w : words) vocab.add(w);
  Rng rng(seed);
  SiameseConfig sc;
  sc.embed_dim = 6;
  sc.hidden_size = 5;
  SentimentConfig tc;
  tc.embed_dim = 6;
  tc.hidden_size = 5;
  Models m{SiameseModel(vocab, sc, rng), SentimentModel(vocab, tc, rng)};
  m.sentiment.head_weights.setZero();
  m.sentiment.head_bias[0] = 0.0;
  return m;
}

/// Claims whose single evidence document carries the label in ss only.
struct PlantedCorpus {
  std::vector<ClaimArticle> claims;
  std::vector<ClaimEvidence> evidence;
};

PlantedCorpus planted(std::size_t n, std::uint64_t seed) {
  Rng rng(seed);
  PlantedCorpus out;
  for (std::size_t i = 0; i < n; ++i) {
    bool credible = i % 3 == 0;
    ClaimArticle c;
    c.id = "c" + std::to_string(i);
    c.text = "claim " + std::to_string(i);
    c.label = credible ? Verdict::True : Verdict::False;
    c.author = "writer " + std::to_string(i);
    c.source_url = "https://site" + std::to_string(i) + ".org/x";
    ClaimEvidence ev;
    ev.claim_id = c.id;
    ev.ns = uniform01(rng);
    ev.author_key = normalize_author(c.author);
    ev.domain_key = normalize_domain(c.source_url);
    EvidenceRecord rec;
    rec.doc_id = "d" + std::to_string(i);
    rec.rank = 1;
    rec.kterm = uniform01(rng);
    rec.ss = credible ? uniform(rng, 0.75, 1.0) : uniform(rng, 0.0, 0.35);
    rec.author_key = "reporter " + std::to_string(i);
    rec.domain_key = "gazette" + std::to_string(i) + ".com";
    ev.evidence.push_back(rec);
    out.claims.push_back(c);
    out.evidence.push_back(ev);
  }
  return out;
}

}  // namespace

TEST_CASE("component seeds are distinct and stable") {
  CHECK(component_seed(42, SeedStream::Siamese) == component_seed(42, SeedStream::Siamese));
  CHECK(component_seed(42, SeedStream::Siamese) != component_seed(42, SeedStream::Sentiment));
  CHECK(component_seed(42, SeedStream::Folds) != component_seed(43, SeedStream::Folds));
}

TEST_CASE("a claim identical to its only document") {
  const std::string text = "solar panels power the northern village school";
  auto models = small_models({"solar", "panels", "power", "northern", "village", "school"}, 3);
  auto index = build_index({{"d1", "", text, "https://news.example.org/a", "Ann Lee"},
                            {"d2", "", "rain fell on the harbour", "https://b.example.org", std::nullopt},
                            {"d3", "", "markets closed early", "https://c.example.org", std::nullopt}});
  ClaimArticle claim{"c1", text, std::nullopt, std::nullopt, "https://blog.example.com/p", std::nullopt};
  Config config;

  auto ev = gather_evidence(claim, index, default_stopwords(), models, config);
  REQUIRE(ev.evidence.size() == 1);
  CHECK(ev.evidence[0].doc_id == "d1");
  CHECK(ev.evidence[0].summary == text);
  CHECK(ev.evidence[0].ss == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(ev.ns == 1.0);
  CHECK(ev.evidence[0].author_key == "ann lee");
  CHECK(ev.evidence[0].domain_key == "news.example.org");

  TrustState trust;
  auto bundles = assemble_features(ev, trust);
  REQUIRE(bundles.size() == 1);
  CHECK(bundles[0].acs == 0.5);
  CHECK(bundles[0].wts == 0.5);
  CHECK(bundles[0].ns == 1.0);
  CHECK(bundles[0].kterm > 0.0);
  CHECK(bundles == assemble_features(claim, index, default_stopwords(), models, trust, config));

  // a binary False tag is 0, whose update factor is exactly 1
  ClaimArticle labelled = claim;
  labelled.author = "Ann Lee";
  labelled.label = Verdict::False;
  replay_claims(trust, std::span(&labelled, 1), LabelMode::Binary);
  CHECK(assemble_features(ev, trust)[0].acs == 0.5);
  labelled.label = Verdict::MostlyFalse;
  replay_claims(trust, std::span(&labelled, 1), LabelMode::MultiClass);
  CHECK(assemble_features(ev, trust)[0].acs == doctest::Approx(0.5 * (1.0 + std::log(0.75))));
}

TEST_CASE("claims without evidence get a fallback bundle") {
  auto models = small_models({"alpha"}, 4);
  auto index = build_index({{"d1", "", "beta gamma", "https://x.org", std::nullopt}});
  ClaimArticle claim{"c", "alpha delta", std::nullopt, "Bo", "https://y.org/1", std::nullopt};
  auto ev = gather_evidence(claim, index, default_stopwords(), models, Config{});
  CHECK(ev.evidence.empty());

  TrustState trust;
  ClaimArticle history{"h", "x", Verdict::True, "Bo", "https://y.org/2", std::nullopt};
  replay_claims(trust, std::span(&history, 1), LabelMode::Binary);
  auto bundles = assemble_features(ev, trust);
  REQUIRE(bundles.size() == 1);
  CHECK(bundles[0].kterm == 0.0);
  CHECK(bundles[0].ss == 0.0);
  CHECK(bundles[0].acs > 0.5);
  CHECK(bundles[0].wts > 0.5);
  CHECK(bundles[0].ns == ev.ns);

  // stopword-only claims have no keywords and still score
  ClaimArticle empty_query{"e", "the of and", std::nullopt, std::nullopt, "https://z.org", std::nullopt};
  CHECK(gather_evidence(empty_query, index, default_stopwords(), models, Config{}).evidence.empty());
}

TEST_CASE("mlp_input masks excluded features") {
  std::vector<FeatureBundle> b = {{0.1, 0.2, 0.3, 0.4, 0.5}};
  auto x = mlp_input(b, mask_without(Feature::Author));
  CHECK(x[0] == doctest::Approx(0.1));
  CHECK(x[1] == 0.0);
  CHECK(x[4] == doctest::Approx(0.5));
}

TEST_CASE("fusion models train, score and round-trip") {
  auto corpus = planted(90, 5);
  TrustState trust;
  std::vector<std::vector<FeatureBundle>> features;
  std::vector<Verdict> labels;
  for (std::size_t i = 0; i < corpus.claims.size(); ++i) {
    features.push_back(assemble_features(corpus.evidence[i], trust));
    labels.push_back(*corpus.claims[i].label);
  }
  Config config;
  for (Fusion kind : {Fusion::EqWeights, Fusion::Mlp}) {
    auto model = train_fusion(features, labels, kind, LabelMode::Binary, kAllFeatures, config, 7);
    CHECK(model.weights[Feature::Similarity] ==
          *std::max_element(model.weights.values().begin(), model.weights.values().end()));
    std::size_t hits = 0;
    for (std::size_t i = 0; i < features.size(); ++i) {
      hits += model.predict(features[i]) == labels[i] ? 1 : 0;
      double s = model.score(features[i]);
      CHECK(s >= 0.0);
      CHECK(s <= 1.0);
    }
    CHECK(hits >= 85);

    auto back = parse_fusion_model(serialize_fusion(model));
    CHECK(back.kind == kind);
    CHECK(back.weights.values() == model.weights.values());
    for (const auto& f : features) CHECK(back.score(f) == model.score(f));

    auto scored = score_claim(corpus.evidence[0], trust, model);
    CHECK(scored.claim_id == "c0");
    REQUIRE(scored.per_evidence.size() == 1);
    CHECK(scored.per_evidence[0].rank == 1);
    CHECK(scored.credo == model.score(features[0]));
    auto line = serialize_scores(std::span(&scored, 1));
    CHECK(line.find("\"claim_id\":\"c0\"") != std::string::npos);
    CHECK(line.back() == '\n');
  }
  CHECK_THROWS_AS(parse_fusion_model("{\"kind\":"), ParseError);
}

TEST_CASE("run_eval on planted evidence") {
  auto corpus = planted(150, 6);
  Config config;
  EvalOptions options;
  options.seed = 11;
  auto result = run_eval(corpus.claims, corpus.evidence, nullptr, options, config);
  CHECK(result.folds.size() == 5);
  CHECK(result.mean.overall_accuracy >= 0.9);
  CHECK(serialize_eval(result, options) ==
        serialize_eval(run_eval(corpus.claims, corpus.evidence, nullptr, options, config), options));

  options.shuffle_labels = true;
  auto control = run_eval(corpus.claims, corpus.evidence, nullptr, options, config);
  CHECK(control.mean.macro_accuracy < 0.7);

  options.shuffle_labels = false;
  options.active = mask_without(Feature::Similarity);
  auto ablated = run_eval(corpus.claims, corpus.evidence, nullptr, options, config);
  CHECK(ablated.mean.overall_accuracy < result.mean.overall_accuracy);

  auto unlabeled = corpus.claims;
  unlabeled[3].label.reset();
  CHECK_THROWS_AS(run_eval(unlabeled, corpus.evidence, nullptr, EvalOptions{}, config),
                  ValidationError);
}

#include "credo/pipeline.hpp"

#include <algorithm>
#include <cmath>

#include "credo/error.hpp"
#include "credo/random.hpp"
#include "credo/rake.hpp"
#include "credo/textrank.hpp"
#include "jsonl_util.hpp"

namespace credo {

using detail::json;

std::uint64_t component_seed(std::uint64_t master, SeedStream stream) {
  return derive_seed(master, static_cast<std::uint64_t>(stream));
}

TrustState::TrustState(std::shared_ptr<const ReputationProvider> provider)
    : authors(EntityKind::Author, provider), websites(EntityKind::Website, provider) {}

void replay_claims(TrustState& trust, std::span<const ClaimArticle> claims, LabelMode mode) {
  for (const auto& claim : claims) {
    if (!claim.label) continue;
    TagValue tag = TagValue::from_verdict(*claim.label, mode);
    trust.authors.observe(normalize_author(claim.author), tag);
    trust.websites.observe(normalize_domain(claim.source_url), tag);
  }
}

ClaimEvidence gather_evidence(const ClaimArticle& claim, const InvertedIndex& index,
                              const StopwordSet& stopwords, const Models& models,
                              const Config& config) {
  ClaimEvidence out;
  out.claim_id = claim.id;
  out.author_key = normalize_author(claim.author);
  out.domain_key = normalize_domain(claim.source_url);
  out.ns = neutrality(sentiment_prob(claim.text, models.sentiment));

  std::vector<Keyword> keywords = extract_keywords(claim.text, stopwords, config.keyword_top_k);
  ResultSet results;
  try {
    results = retrieve(keywords, index, config.retrieval_limit);
  } catch (const EmptyQuery&) {
    return out;
  }
  for (const auto& hit : results.docs) {
    try {
      EvidenceRecord rec;
      rec.doc_id = hit.doc.doc_id;
      rec.rank = hit.rank;
      rec.bm25 = hit.bm25;
      rec.summary = summarize(hit.doc, claim.text.size(), config.summary, config.bm25);
      rec.kterm = keyword_feature(extract_keywords(rec.summary, stopwords, config.keyword_top_k),
                                  config.keyword_tau);
      rec.ss = ss_score(claim.text, rec.summary, models.siamese);
      rec.author_key = normalize_author(hit.doc.author);
      rec.domain_key = normalize_domain(hit.doc.source_url);
      out.evidence.push_back(std::move(rec));
    } catch (const Error& e) {
      throw Error("claim " + claim.id + ", evidence rank " + std::to_string(hit.rank) + ": " +
                  e.what());
    }
  }
  return out;
}

std::vector<FeatureBundle> assemble_features(const ClaimEvidence& evidence,
                                             const TrustState& trust) {
  std::vector<FeatureBundle> bundles;
  if (evidence.evidence.empty()) {
    FeatureBundle fallback;
    fallback.acs = trust.authors.score(evidence.author_key);
    fallback.wts = trust.websites.score(evidence.domain_key);
    fallback.ns = evidence.ns;
    bundles.push_back(fallback);
    return bundles;
  }
  for (const auto& rec : evidence.evidence) {
    FeatureBundle f;
    f.kterm = rec.kterm;
    f.acs = trust.authors.score(rec.author_key);
    f.wts = trust.websites.score(rec.domain_key);
    f.ns = evidence.ns;
    f.ss = rec.ss;
    bundles.push_back(f);
  }
  return bundles;
}

std::vector<FeatureBundle> assemble_features(const ClaimArticle& claim, const InvertedIndex& index,
                                             const StopwordSet& stopwords, const Models& models,
                                             const TrustState& trust, const Config& config) {
  return assemble_features(gather_evidence(claim, index, stopwords, models, config), trust);
}

Eigen::VectorXd mlp_input(std::span<const FeatureBundle> bundles, const FeatureMask& active) {
  auto agg = aggregate_features(bundles).values();
  Eigen::VectorXd x(static_cast<Eigen::Index>(kFeatureCount));
  for (std::size_t i = 0; i < kFeatureCount; ++i) {
    x[static_cast<Eigen::Index>(i)] = active[i] ? agg[i] : 0.0;
  }
  return x;
}

namespace {

std::size_t verdict_index(Verdict v) { return static_cast<std::size_t>(v); }

}  // namespace

double FusionModel::score(std::span<const FeatureBundle> bundles) const {
  if (kind == Fusion::Mlp && mlp) {
    Eigen::VectorXd p = mlp->predict_proba(mlp_input(bundles, active));
    if (mlp->classes() == 2) return p[1];
    return p[verdict_index(Verdict::MostlyTrue)] + p[verdict_index(Verdict::True)];
  }
  std::vector<EvidenceContribution> contribs;
  for (std::size_t r = 0; r < bundles.size(); ++r) {
    contribs.push_back({r + 1, credibility_contribution(bundles[r], weights)});
  }
  return credo_score(contribs, bundles.size()).value;
}

Verdict FusionModel::predict(std::span<const FeatureBundle> bundles) const {
  if (kind == Fusion::Mlp && mlp) {
    std::size_t cls = mlp->predict(mlp_input(bundles, active));
    if (mlp->classes() == 2) return cls == 1 ? Verdict::True : Verdict::False;
    return static_cast<Verdict>(cls);
  }
  return classify(score(bundles), mode);
}

FusionModel train_fusion(std::span<const std::vector<FeatureBundle>> evidence,
                         std::span<const Verdict> labels, Fusion kind, LabelMode mode,
                         const FeatureMask& active, const Config& config, std::uint64_t seed) {
  if (evidence.size() != labels.size()) throw ValidationError("evidence and labels differ in length");
  FusionModel model;
  model.kind = kind;
  model.mode = mode;
  model.active = active;

  std::vector<double> targets;
  for (Verdict v : labels) targets.push_back(fusion_target(v, mode));
  model.weights = train_weights(evidence, targets, active, config.weights);

  if (kind == Fusion::Mlp) {
    std::vector<Eigen::VectorXd> xs;
    std::vector<std::size_t> classes;
    for (std::size_t i = 0; i < evidence.size(); ++i) {
      xs.push_back(mlp_input(evidence[i], active));
      classes.push_back(mode == LabelMode::Binary ? (is_credible(labels[i]) ? 1 : 0)
                                                  : verdict_index(labels[i]));
    }
    MlpConfig mc = config.mlp;
    mc.seed = seed;
    model.mlp = train_mlp(xs, classes, mode == LabelMode::Binary ? 2 : 4, mc);
  }
  return model;
}

namespace {

json matrix_json(const RowMatrix& m) {
  return {{"rows", m.rows()},
          {"cols", m.cols()},
          {"values", std::vector<double>(m.data(), m.data() + m.size())}};
}

json vector_json(const Eigen::VectorXd& v) {
  return std::vector<double>(v.data(), v.data() + v.size());
}

RowMatrix matrix_from(const json& j) {
  RowMatrix m(j.at("rows").get<Eigen::Index>(), j.at("cols").get<Eigen::Index>());
  auto values = j.at("values").get<std::vector<double>>();
  if (values.size() != static_cast<std::size_t>(m.size())) throw ParseError("matrix size mismatch", 0);
  std::copy(values.begin(), values.end(), m.data());
  return m;
}

Eigen::VectorXd vector_from(const json& j) {
  auto values = j.get<std::vector<double>>();
  return Eigen::Map<Eigen::VectorXd>(values.data(), static_cast<Eigen::Index>(values.size()));
}

}  // namespace

std::string serialize_fusion(const FusionModel& model) {
  json j;
  j["kind"] = to_string(model.kind);
  j["mode"] = to_string(model.mode);
  j["active"] = model.active;
  j["weights"] = model.weights.values();
  if (model.mlp) {
    j["mlp"] = {{"classes", model.mlp->classes()},
                {"w1", matrix_json(model.mlp->w1)},
                {"b1", vector_json(model.mlp->b1)},
                {"w2", matrix_json(model.mlp->w2)},
                {"b2", vector_json(model.mlp->b2)}};
  }
  return j.dump(2) + "\n";
}

FusionModel parse_fusion_model(std::string_view json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::exception& e) {
    throw ParseError(std::string("fusion model: ") + e.what(), 0);
  }
  FusionModel model;
  model.kind = parse_fusion(j.at("kind").get<std::string>());
  model.mode = parse_label_mode(j.at("mode").get<std::string>());
  model.active = j.at("active").get<FeatureMask>();
  model.weights = WeightVector(j.at("weights").get<std::array<double, kFeatureCount>>(),
                               model.active);
  if (j.contains("mlp")) {
    const json& m = j.at("mlp");
    Rng rng(0);
    RowMatrix w1 = matrix_from(m.at("w1"));
    Mlp mlp(static_cast<std::size_t>(w1.cols()), static_cast<std::size_t>(w1.rows()),
            m.at("classes").get<std::size_t>(), rng);
    mlp.w1 = w1;
    mlp.b1 = vector_from(m.at("b1"));
    mlp.w2 = matrix_from(m.at("w2"));
    mlp.b2 = vector_from(m.at("b2"));
    model.mlp = std::move(mlp);
  }
  return model;
}

ScoredClaim score_claim(const ClaimEvidence& evidence, const TrustState& trust,
                        const FusionModel& fusion) {
  std::vector<FeatureBundle> bundles = assemble_features(evidence, trust);
  ScoredClaim out;
  out.claim_id = evidence.claim_id;
  out.credo = fusion.score(bundles);
  out.label = fusion.predict(bundles);
  for (std::size_t r = 0; r < evidence.evidence.size(); ++r) {
    out.per_evidence.push_back({evidence.evidence[r].doc_id, r + 1,
                                credibility_contribution(bundles[r], fusion.weights), bundles[r]});
  }
  return out;
}

std::string serialize_scores(std::span<const ScoredClaim> scores) {
  std::string out;
  for (const auto& s : scores) {
    json per = json::array();
    for (const auto& e : s.per_evidence) {
      json features;
      for (std::size_t i = 0; i < kFeatureCount; ++i) {
        features[std::string(feature_name(static_cast<Feature>(i)))] = e.features.values()[i];
      }
      per.push_back({{"doc_id", e.doc_id}, {"rank", e.rank}, {"cc", e.cc}, {"features", features}});
    }
    json line = {{"claim_id", s.claim_id},
                 {"credo", s.credo},
                 {"label", std::string(to_string(s.label))},
                 {"per_evidence", per}};
    out += line.dump();
    out.push_back('\n');
  }
  return out;
}

EvalResult run_eval(std::span<const ClaimArticle> claims, std::span<const ClaimEvidence> evidence,
                    std::shared_ptr<const ReputationProvider> provider, const EvalOptions& options,
                    const Config& config) {
  if (claims.size() != evidence.size()) throw ValidationError("claims and evidence differ in length");
  std::vector<ClaimArticle> data(claims.begin(), claims.end());
  for (const auto& c : data) {
    if (!c.label) throw ValidationError("claim " + c.id + " has no label");
  }
  if (options.shuffle_labels) {
    std::vector<Verdict> labels;
    for (const auto& c : data) labels.push_back(*c.label);
    Rng rng(component_seed(options.seed, SeedStream::Shuffle));
    shuffle(labels, rng);
    for (std::size_t i = 0; i < data.size(); ++i) data[i].label = labels[i];
  }

  auto folds = kfold_split(data.size(), options.folds, component_seed(options.seed, SeedStream::Folds));
  EvalResult result;
  for (std::size_t f = 0; f < folds.size(); ++f) {
    try {
      std::vector<bool> held_out(data.size(), false);
      for (std::size_t i : folds[f]) held_out[i] = true;

      // Training claims keep their dataset order for the ledger replay.
      std::vector<ClaimArticle> train_claims;
      std::vector<std::size_t> train_idx;
      for (std::size_t i = 0; i < data.size(); ++i) {
        if (!held_out[i]) {
          train_claims.push_back(data[i]);
          train_idx.push_back(i);
        }
      }
      TrustState trust(provider);
      replay_claims(trust, train_claims, options.mode);

      std::vector<std::vector<FeatureBundle>> train_features;
      std::vector<Verdict> train_labels;
      for (std::size_t i : train_idx) {
        train_features.push_back(assemble_features(evidence[i], trust));
        train_labels.push_back(*data[i].label);
      }
      FusionModel fusion = train_fusion(train_features, train_labels, options.fusion, options.mode,
                                        options.active, config,
                                        derive_seed(component_seed(options.seed, SeedStream::Fusion), f));

      std::vector<double> scores;
      std::vector<bool> predictions;
      std::vector<bool> labels;
      std::size_t exact = 0;
      for (std::size_t i : folds[f]) {
        auto bundles = assemble_features(evidence[i], trust);
        Verdict predicted = fusion.predict(bundles);
        scores.push_back(fusion.score(bundles));
        predictions.push_back(is_credible(predicted));
        labels.push_back(is_credible(*data[i].label));
        if (predicted == *data[i].label) ++exact;
      }
      MetricsReport report = compute_metrics(scores, predictions, labels);
      if (options.mode == LabelMode::MultiClass) {
        report.overall_accuracy = static_cast<double>(exact) / static_cast<double>(folds[f].size());
      }
      result.folds.push_back(report);
    } catch (const Error& e) {
      throw Error("fold " + std::to_string(f) + ": " + e.what());
    }
  }
  result.mean = mean_report(result.folds);
  return result;
}

namespace {

json report_json(const MetricsReport& r) {
  return {{"overall_accuracy", r.overall_accuracy}, {"true_accuracy", r.true_accuracy},
          {"false_accuracy", r.false_accuracy},     {"macro_accuracy", r.macro_accuracy},
          {"auc", r.auc},                           {"fake_precision", r.fake_precision},
          {"fake_recall", r.fake_recall},           {"fake_f1", r.fake_f1}};
}

}  // namespace

std::string serialize_eval(const EvalResult& result, const EvalOptions& options) {
  json excluded = json::array();
  for (std::size_t i = 0; i < kFeatureCount; ++i) {
    if (!options.active[i]) excluded.push_back(feature_name(static_cast<Feature>(i)));
  }
  json folds = json::array();
  for (const auto& r : result.folds) folds.push_back(report_json(r));
  json j = {{"folds", options.folds},
            {"seed", options.seed},
            {"mode", to_string(options.mode)},
            {"fusion", to_string(options.fusion)},
            {"excluded", excluded},
            {"shuffled_labels", options.shuffle_labels},
            {"mean", report_json(result.mean)},
            {"per_fold", folds}};
  return j.dump(2) + "\n";
}

}  // namespace credo

// Command-line front end. All state lives in a workspace directory:
//
//   kb.jsonl          ingested knowledge base (sorted by doc_id)
//   reputation.jsonl  website reputation seeds
//   siamese.ckpt      similarity model
//   sentiment.ckpt    sentiment model
//   authors.jsonl     author ledger after replaying the training claims
//   websites.jsonl    website ledger after replaying the training claims
//   fusion.json       trained fusion stage
//   config.conf       effective configuration of the last `train`

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <memory>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "credo/config.hpp"
#include "credo/dataset.hpp"
#include "credo/error.hpp"
#include "credo/pipeline.hpp"
#include "credo/synthetic.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::string read_text(const fs::path& path) {
  std::FILE* f = std::fopen(path.string().c_str(), "rb");
  if (!f) throw credo::Error("cannot open file: " + path.string());
  std::string out;
  char buf[65536];
  std::size_t n = 0;
  while ((n = std::fread(buf, 1, sizeof buf, f)) > 0) out.append(buf, n);
  std::fclose(f);
  return out;
}

void write_text(const fs::path& path, const std::string& text) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::FILE* f = std::fopen(path.string().c_str(), "wb");
  if (!f) throw credo::Error("cannot write file: " + path.string());
  std::fwrite(text.data(), 1, text.size(), f);
  std::fclose(f);
}

/// Writes to `out` when given, else to stdout.
void emit(const std::string& out, const std::string& text) {
  if (out.empty()) {
    std::cout << text;
  } else {
    write_text(out, text);
  }
}

struct Options {
  std::string workspace = "credo-workspace";
  std::string config_path;
  std::optional<std::uint64_t> seed;
};

credo::Config effective_config(const Options& opt) {
  credo::Config config;
  if (!opt.config_path.empty()) config = credo::load_config(opt.config_path);
  if (opt.seed) config.seed = *opt.seed;
  return config;
}

class Workspace {
 public:
  explicit Workspace(fs::path root) : root_(std::move(root)) {}

  fs::path path(const char* name) const { return root_ / name; }
  void ensure() const { fs::create_directories(root_); }

  fs::path require(const char* name, const char* hint) const {
    fs::path p = path(name);
    if (!fs::exists(p)) {
      throw credo::ConfigError("workspace is missing " + p.string() + " (run `" + hint + "` first)");
    }
    return p;
  }

  std::vector<credo::KbDocument> kb() const {
    return credo::load_kb(require("kb.jsonl", "credo ingest-kb"));
  }

  std::shared_ptr<const credo::ReputationProvider> reputation() const {
    fs::path p = path("reputation.jsonl");
    if (!fs::exists(p)) return std::make_shared<credo::ReputationProvider>();
    return std::make_shared<credo::ReputationProvider>(credo::ReputationProvider::load(p));
  }

  credo::Models models() const {
    return {credo::SiameseModel::load(require("siamese.ckpt", "credo train")),
            credo::SentimentModel::load(require("sentiment.ckpt", "credo train"))};
  }

  const fs::path& root() const { return root_; }

 private:
  fs::path root_;
};

credo::StopwordSet stopwords_for(const credo::Config& config) {
  return config.stopwords.empty() ? credo::default_stopwords()
                                  : credo::load_stopwords(config.stopwords);
}

/// A file next to `anchor` when `explicit_path` is empty.
fs::path sibling_or(const std::string& explicit_path, const fs::path& anchor, const char* name) {
  if (!explicit_path.empty()) return explicit_path;
  return anchor.parent_path() / name;
}

std::vector<credo::ClaimEvidence> gather_all(std::span<const credo::ClaimArticle> claims,
                                             const credo::InvertedIndex& index,
                                             const credo::StopwordSet& stopwords,
                                             const credo::Models& models,
                                             const credo::Config& config) {
  std::vector<credo::ClaimEvidence> out;
  out.reserve(claims.size());
  for (const auto& c : claims) {
    out.push_back(credo::gather_evidence(c, index, stopwords, models, config));
  }
  return out;
}

json report_json(const credo::nn::TrainingReport& r) {
  return {{"initial_loss", r.initial_loss},
          {"final_loss", r.final_loss},
          {"epoch_losses", r.epoch_losses}};
}

// ---------------------------------------------------------------------------

void cmd_ingest(const Options& opt, const std::string& kb_path) {
  credo::Config config = effective_config(opt);
  auto docs = credo::load_kb(kb_path);
  auto index = credo::build_index(docs, config.bm25);
  Workspace ws(opt.workspace);
  ws.ensure();
  write_text(ws.path("kb.jsonl"), credo::serialize_kb(index.documents()));
  json summary = {{"documents", index.document_count()},
                  {"vocabulary", index.vocabulary_size()},
                  {"average_length", index.average_length()}};
  std::cout << summary.dump() << "\n";
}

struct TrainArgs {
  std::string claims;
  std::string pairs;
  std::string sentiment;
  std::string reputation;
};

void cmd_train(const Options& opt, const TrainArgs& args) {
  credo::Config config = effective_config(opt);
  Workspace ws(opt.workspace);
  ws.ensure();

  fs::path claims_path = args.claims;
  auto claims = credo::load_claims(claims_path);
  auto pairs = credo::load_pairs(sibling_or(args.pairs, claims_path, "pairs.jsonl"));
  auto sentiment = credo::load_sentiment(sibling_or(args.sentiment, claims_path, "sentiment.jsonl"));
  fs::path rep_path = sibling_or(args.reputation, claims_path, "reputation.jsonl");
  if (fs::exists(rep_path)) {
    write_text(ws.path("reputation.jsonl"), read_text(rep_path));
  }

  credo::SiameseConfig sc = config.siamese;
  sc.training.seed = credo::component_seed(config.seed, credo::SeedStream::Siamese);
  credo::nn::TrainingReport siamese_report;
  credo::SiameseModel siamese = credo::train_siamese(pairs, sc, &siamese_report);
  siamese.save(ws.path("siamese.ckpt"), config.seed);

  credo::SentimentConfig tc = config.sentiment;
  tc.training.seed = credo::component_seed(config.seed, credo::SeedStream::Sentiment);
  credo::nn::TrainingReport sentiment_report;
  credo::SentimentModel sentiment_model =
      credo::train_sentiment(sentiment, tc, &sentiment_report);
  sentiment_model.save(ws.path("sentiment.ckpt"), config.seed);

  credo::Models models{std::move(siamese), std::move(sentiment_model)};
  auto provider = ws.reputation();
  credo::TrustState trust(provider);
  credo::replay_claims(trust, claims, config.mode);
  trust.authors.persist(ws.path("authors.jsonl"));
  trust.websites.persist(ws.path("websites.jsonl"));

  auto index = credo::build_index(ws.kb(), config.bm25);
  auto stopwords = stopwords_for(config);
  auto evidence = gather_all(claims, index, stopwords, models, config);
  std::vector<std::vector<credo::FeatureBundle>> features;
  std::vector<credo::Verdict> labels;
  for (std::size_t i = 0; i < claims.size(); ++i) {
    if (!claims[i].label) throw credo::ValidationError("training claim " + claims[i].id + " has no label");
    features.push_back(credo::assemble_features(evidence[i], trust));
    labels.push_back(*claims[i].label);
  }
  credo::FusionModel fusion =
      credo::train_fusion(features, labels, config.fusion, config.mode, credo::kAllFeatures,
                          config, credo::component_seed(config.seed, credo::SeedStream::Fusion));
  write_text(ws.path("fusion.json"), credo::serialize_fusion(fusion));
  write_text(ws.path("config.conf"), credo::render_config(config));

  json summary = {{"claims", claims.size()},
                  {"siamese", report_json(siamese_report)},
                  {"sentiment", report_json(sentiment_report)},
                  {"weights", fusion.weights.values()}};
  std::string text = summary.dump(2) + "\n";
  write_text(ws.path("train_report.json"), text);
  std::cout << text;
}

void cmd_score(const Options& opt, const std::string& claim_file, const std::string& out) {
  Workspace ws(opt.workspace);
  credo::Config config = opt.config_path.empty() && fs::exists(ws.path("config.conf"))
                             ? credo::load_config(ws.path("config.conf"))
                             : effective_config(opt);
  auto provider = ws.reputation();
  credo::TrustState trust(provider);
  trust.authors = credo::TrustLedger::load(ws.require("authors.jsonl", "credo train"),
                                           credo::EntityKind::Author, provider);
  trust.websites = credo::TrustLedger::load(ws.require("websites.jsonl", "credo train"),
                                            credo::EntityKind::Website, provider);
  auto fusion = credo::parse_fusion_model(read_text(ws.require("fusion.json", "credo train")));
  auto models = ws.models();
  auto index = credo::build_index(ws.kb(), config.bm25);
  auto stopwords = stopwords_for(config);

  auto claims = credo::load_claims(claim_file);
  std::vector<credo::ScoredClaim> scored;
  for (const auto& c : claims) {
    scored.push_back(
        credo::score_claim(credo::gather_evidence(c, index, stopwords, models, config), trust, fusion));
  }
  emit(out, credo::serialize_scores(scored));
}

struct EvalArgs {
  std::string claims;
  std::size_t k = 5;
  std::string mode = "binary";
  std::string fusion = "eq";
  bool shuffle = false;
  std::string out;
};

void run_eval_command(const Options& opt, const EvalArgs& args, const credo::FeatureMask& active) {
  credo::Config config = effective_config(opt);
  Workspace ws(opt.workspace);
  auto claims = credo::load_claims(args.claims);
  auto models = ws.models();
  auto index = credo::build_index(ws.kb(), config.bm25);
  auto stopwords = stopwords_for(config);
  auto evidence = gather_all(claims, index, stopwords, models, config);

  credo::EvalOptions eo;
  eo.folds = args.k;
  eo.seed = config.seed;
  eo.mode = credo::parse_label_mode(args.mode);
  eo.fusion = credo::parse_fusion(args.fusion);
  eo.active = active;
  eo.shuffle_labels = args.shuffle;
  auto result = credo::run_eval(claims, evidence, ws.reputation(), eo, config);
  emit(args.out, credo::serialize_eval(result, eo));
}

credo::Feature parse_excluded(const std::string& name) {
  if (name == "ACS") return credo::Feature::Author;
  if (name == "WTS") return credo::Feature::Website;
  if (name == "SS") return credo::Feature::Similarity;
  if (name == "SA") return credo::Feature::Neutrality;
  throw credo::ConfigError("--exclude must be one of ACS, WTS, SS, SA");
}

void cmd_gen_synthetic(const Options& opt, std::size_t n, const std::string& out_dir) {
  credo::Config config = effective_config(opt);
  config.synthetic.claims = n;
  auto data = credo::generate_synthetic(
      config.synthetic, credo::component_seed(config.seed, credo::SeedStream::Synthetic));
  fs::path dir = out_dir;
  fs::create_directories(dir);
  write_text(dir / "claims.jsonl", credo::serialize_claims(data.claims));
  write_text(dir / "kb.jsonl", credo::serialize_kb(data.kb));
  write_text(dir / "pairs.jsonl", credo::serialize_pairs(data.pairs));
  write_text(dir / "sentiment.jsonl", credo::serialize_sentiment(data.sentiment));
  write_text(dir / "reputation.jsonl", credo::serialize_reputation(data.reputation));
  write_text(dir / "sts.tsv", credo::serialize_sts(data.sts));
  std::size_t n_true = 0;
  for (const auto& c : data.claims) n_true += c.label && credo::is_credible(*c.label) ? 1 : 0;
  json summary = {{"claims", data.claims.size()},
                  {"true", n_true},
                  {"false", data.claims.size() - n_true},
                  {"kb_documents", data.kb.size()},
                  {"pairs", data.pairs.size()},
                  {"sentiment_examples", data.sentiment.size()},
                  {"sts_pairs", data.sts.size()}};
  std::cout << summary.dump() << "\n";
}

void cmd_sts_eval(const Options& opt, const std::string& pairs_path, std::optional<double> threshold,
                  const std::string& out) {
  credo::Config config = effective_config(opt);
  double t = threshold.value_or(config.sts_threshold);
  Workspace ws(opt.workspace);
  auto model = credo::SiameseModel::load(ws.require("siamese.ckpt", "credo train"));
  auto pairs = credo::load_sts(pairs_path);
  auto binary = credo::binarize_sts(pairs, t);

  std::vector<double> predicted;
  std::vector<double> gold;
  std::size_t correct = 0;
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    double ss = credo::ss_score(pairs[i].text_a, pairs[i].text_b, model);
    predicted.push_back(ss);
    gold.push_back(pairs[i].score);
    // similarity above 0 (ss above 0.5) predicts the positive class
    int label = ss > 0.5 ? 1 : -1;
    correct += label == binary[i].label ? 1 : 0;
  }
  json summary = {{"pairs", pairs.size()},
                  {"threshold", t},
                  {"pearson", credo::pearson(predicted, gold)},
                  {"binary_accuracy", pairs.empty() ? 0.0 : static_cast<double>(correct) /
                                                               static_cast<double>(pairs.size())}};
  emit(out, summary.dump(2) + "\n");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"credo: credibility scoring for textual claims"};
  app.require_subcommand(1);
  app.fallthrough();
  Options opt;
  app.add_option("--workspace,-w", opt.workspace, "Workspace directory")->capture_default_str();
  app.add_option("--config,-c", opt.config_path, "key = value configuration file");
  std::uint64_t seed = 0;
  auto* seed_opt = app.add_option("--seed", seed, "Master seed (overrides the config)");

  std::string kb_path;
  auto* ingest = app.add_subcommand("ingest-kb", "Validate and index a knowledge base");
  ingest->add_option("kb", kb_path, "KB JSONL file")->required();

  TrainArgs train_args;
  auto* train = app.add_subcommand("train", "Train the neural models, ledgers and fusion stage");
  train->add_option("--claims", train_args.claims, "Labelled claims JSONL")->required();
  train->add_option("--pairs", train_args.pairs, "Similarity pairs (default: next to claims)");
  train->add_option("--sentiment", train_args.sentiment, "Sentiment examples (default: next to claims)");
  train->add_option("--reputation", train_args.reputation, "Website reputation seeds");

  std::string claim_file;
  std::string score_out;
  auto* score = app.add_subcommand("score", "Score claims with the trained workspace");
  score->add_option("--claim-file", claim_file, "Claims JSONL")->required();
  score->add_option("--out,-o", score_out, "Output JSONL (default stdout)");

  EvalArgs eval_args;
  auto add_eval_options = [&](CLI::App* cmd) {
    cmd->add_option("--claims", eval_args.claims, "Labelled claims JSONL")->required();
    cmd->add_option("--k", eval_args.k, "Number of folds")->capture_default_str();
    cmd->add_option("--mode", eval_args.mode, "binary | multiclass")->capture_default_str();
    cmd->add_option("--fusion", eval_args.fusion, "eq | mlp")->capture_default_str();
    cmd->add_flag("--shuffle-labels", eval_args.shuffle, "No-signal control");
    cmd->add_option("--out,-o", eval_args.out, "Report file (default stdout)");
  };
  auto* eval = app.add_subcommand("eval", "K-fold evaluation");
  add_eval_options(eval);
  std::string excluded;
  auto* ablate = app.add_subcommand("ablate", "K-fold evaluation without one module");
  add_eval_options(ablate);
  ablate->add_option("--exclude", excluded, "ACS | WTS | SS | SA")->required();

  std::size_t n_claims = 500;
  std::string synth_out = "synthetic";
  auto* gen = app.add_subcommand("gen-synthetic", "Write a planted-signal synthetic corpus");
  gen->add_option("--n", n_claims, "Number of claims")->capture_default_str();
  gen->add_option("--out,-o", synth_out, "Output directory")->capture_default_str();

  std::string sts_pairs;
  std::optional<double> sts_threshold;
  std::string sts_out;
  auto* sts = app.add_subcommand("sts-eval", "Correlate similarity scores with graded pairs");
  sts->add_option("--pairs", sts_pairs, "Tab-separated sentence pairs with gold scores")->required();
  sts->add_option("--threshold", sts_threshold, "Binarization threshold (default from config)");
  sts->add_option("--out,-o", sts_out, "Report file (default stdout)");

  auto* print_config = app.add_subcommand("print-config", "Print the effective configuration");

  CLI11_PARSE(app, argc, argv);
  if (*seed_opt) opt.seed = seed;

  try {
    if (*ingest) cmd_ingest(opt, kb_path);
    if (*train) cmd_train(opt, train_args);
    if (*score) cmd_score(opt, claim_file, score_out);
    if (*eval) run_eval_command(opt, eval_args, credo::kAllFeatures);
    if (*ablate) run_eval_command(opt, eval_args, credo::mask_without(parse_excluded(excluded)));
    if (*gen) cmd_gen_synthetic(opt, n_claims, synth_out);
    if (*sts) cmd_sts_eval(opt, sts_pairs, sts_threshold, sts_out);
    if (*print_config) std::cout << credo::render_config(effective_config(opt));
  } catch (const std::exception& e) {
    std::cerr << "credo: " << e.what() << "\n";
    return 1;
  }
  return 0;
}

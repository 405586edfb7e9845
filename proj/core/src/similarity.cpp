#include "credo/similarity.hpp"

#include <algorithm>
#include <cmath>

#include "credo/error.hpp"
#include "jsonl_util.hpp"
#include "training_loop.hpp"

namespace credo {
namespace {

void check_label(int label) {
  if (label != 1 && label != -1) {
    throw ValidationError("pair label must be +1 or -1, got " + std::to_string(label));
  }
}

void append_encoder_params(nn::ParamList& list, BiLstmEncoder& enc) {
  list.push_back(nn::param_ref("embedding", enc.embedding.weights));
  enc.forward.append_to(list, "forward");
  enc.backward.append_to(list, "backward");
}

}  // namespace

std::vector<Vocabulary::Id> BiLstmEncoder::ids(std::string_view text) const {
  std::vector<Token> tokens = tokenize(text);
  std::vector<Vocabulary::Id> out = to_ids(tokens, vocab, max_tokens);
  if (out.empty()) throw EmptySequence();
  return out;
}

Eigen::VectorXd BiLstmEncoder::encode_ids(std::span<const Vocabulary::Id> ids,
                                          nn::BiLstmTrace* trace) const {
  RowMatrix inputs = nn::gather_rows(embedding.weights, ids);
  return nn::bilstm_encode(inputs, forward, backward, trace);
}

SiameseModel::SiameseModel(Vocabulary vocab, SiameseConfig config, Rng& rng)
    : config_(config) {
  encoder_.embedding =
      EmbeddingTable::random(vocab.size(), config.embed_dim, rng, config.embed_init_scale);
  encoder_.vocab = std::move(vocab);
  encoder_.forward = nn::LstmParams::random(config.embed_dim, config.hidden_size, rng);
  encoder_.backward = nn::LstmParams::random(config.embed_dim, config.hidden_size, rng);
  encoder_.max_tokens = config.max_tokens;
}

const BiLstmEncoder& SiameseModel::twin(int which) const {
  if (which != 0 && which != 1) throw ValidationError("twin index must be 0 or 1");
  return encoder_;
}

nn::ParamList SiameseModel::parameters() {
  nn::ParamList list;
  append_encoder_params(list, encoder_);
  return list;
}

double SiameseModel::pair_loss(std::span<const Vocabulary::Id> ids_a,
                               std::span<const Vocabulary::Id> ids_b, int label,
                               SiameseModel* grads) const {
  check_label(label);
  const BiLstmEncoder& left = twin(0);
  const BiLstmEncoder& right = twin(1);
  nn::BiLstmTrace trace_a;
  nn::BiLstmTrace trace_b;
  Eigen::VectorXd u = left.encode_ids(ids_a, grads ? &trace_a : nullptr);
  Eigen::VectorXd v = right.encode_ids(ids_b, grads ? &trace_b : nullptr);
  double sim = energy(u, v);
  double loss = contrastive_loss(sim, label, config_.margin);
  if (grads == nullptr) return loss;

  double dsim = contrastive_loss_grad(sim, label, config_.margin);
  if (dsim == 0.0) return loss;
  double nu = u.norm();
  double nv = v.norm();
  Eigen::VectorXd du = dsim * (v / (nu * nv) - sim * u / (nu * nu));
  Eigen::VectorXd dv = dsim * (u / (nu * nv) - sim * v / (nv * nv));

  BiLstmEncoder& g = grads->encoder_;
  RowMatrix inputs_a = nn::gather_rows(left.embedding.weights, ids_a);
  RowMatrix inputs_b = nn::gather_rows(right.embedding.weights, ids_b);
  RowMatrix dinputs;
  nn::bilstm_backward(inputs_a, left.forward, left.backward, trace_a, du, g.forward, g.backward,
                      &dinputs);
  nn::scatter_add_rows(g.embedding.weights, ids_a, dinputs);
  nn::bilstm_backward(inputs_b, right.forward, right.backward, trace_b, dv, g.forward,
                      g.backward, &dinputs);
  nn::scatter_add_rows(g.embedding.weights, ids_b, dinputs);
  return loss;
}

void SiameseModel::save(const std::filesystem::path& path, std::uint64_t seed) {
  detail::json header = {{"model", "siamese"},
                         {"embed_dim", config_.embed_dim},
                         {"hidden_size", config_.hidden_size},
                         {"max_tokens", config_.max_tokens},
                         {"margin", config_.margin},
                         {"seed", seed},
                         {"vocab", encoder_.vocab.tokens()}};
  nn::write_checkpoint(path, header.dump(), parameters());
}

SiameseModel SiameseModel::load(const std::filesystem::path& path) {
  nn::Checkpoint ckpt = nn::read_checkpoint(path);
  detail::json header = detail::json::parse(ckpt.header);
  if (header.value("model", "") != "siamese") {
    throw ConfigError("not a siamese checkpoint: " + path.string());
  }
  SiameseConfig config;
  config.embed_dim = header.at("embed_dim").get<std::size_t>();
  config.hidden_size = header.at("hidden_size").get<std::size_t>();
  config.max_tokens = header.at("max_tokens").get<std::size_t>();
  config.margin = header.at("margin").get<double>();
  Rng rng(0);
  SiameseModel model(Vocabulary::from_tokens(header.at("vocab").get<std::vector<std::string>>()),
                     config, rng);
  nn::load_blocks(ckpt, model.parameters());
  return model;
}

Eigen::VectorXd encode(std::string_view text, const SiameseModel& model) {
  const BiLstmEncoder& enc = model.encoder();
  return enc.encode_ids(enc.ids(text));
}

double energy(const Eigen::VectorXd& u, const Eigen::VectorXd& v) {
  if (u.size() != v.size()) throw ValidationError("energy operands differ in length");
  double nu = u.norm();
  double nv = v.norm();
  if (nu == 0.0 || nv == 0.0) throw DegenerateEncoding();
  // Elementwise products commute and Eigen sums in index order, so swapping
  // the operands gives the same bits.
  return std::clamp((u / nu).dot(v / nv), -1.0, 1.0);
}

double contrastive_loss(double sim, int label, double margin) {
  check_label(label);
  if (label == 1) return (1.0 - sim) * (1.0 - sim);
  double excess = std::max(0.0, sim - margin);
  return excess * excess;
}

double contrastive_loss_grad(double sim, int label, double margin) {
  check_label(label);
  if (label == 1) return -2.0 * (1.0 - sim);
  return sim > margin ? 2.0 * (sim - margin) : 0.0;
}

Vocabulary build_vocabulary(std::span<const PairExample> pairs) {
  Vocabulary vocab;
  for (const auto& p : pairs) {
    for (const auto& t : tokenize(p.text_a)) vocab.add(t.surface);
    for (const auto& t : tokenize(p.text_b)) vocab.add(t.surface);
  }
  return vocab;
}

SiameseModel train_siamese(std::span<const PairExample> pairs, const SiameseConfig& config,
                           nn::TrainingReport* report) {
  bool has_pos = false;
  bool has_neg = false;
  for (const auto& p : pairs) {
    check_label(p.label);
    (p.label == 1 ? has_pos : has_neg) = true;
  }
  if (!has_pos || !has_neg) {
    throw ValidationError("siamese training needs both positive and negative pairs");
  }

  Rng rng(config.training.seed);
  SiameseModel model(build_vocabulary(pairs), config, rng);

  std::vector<std::vector<Vocabulary::Id>> ids_a;
  std::vector<std::vector<Vocabulary::Id>> ids_b;
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    try {
      ids_a.push_back(model.encoder().ids(pairs[i].text_a));
      ids_b.push_back(model.encoder().ids(pairs[i].text_b));
    } catch (const EmptySequence&) {
      throw ValidationError("pair " + std::to_string(i) + " has an empty text");
    }
  }

  nn::TrainingReport r = detail::fit_minibatch(
      model, pairs.size(), config.training, rng,
      [&](const SiameseModel& m, std::size_t i, SiameseModel* grads) {
        return m.pair_loss(ids_a[i], ids_b[i], pairs[i].label, grads);
      });
  if (report) *report = std::move(r);
  return model;
}

double ss_score(std::string_view input_article, std::string_view retrieved_summary,
                const SiameseModel& model) {
  double sim = energy(encode(input_article, model), encode(retrieved_summary, model));
  return std::clamp((sim + 1.0) / 2.0, 0.0, 1.0);
}

}  // namespace credo

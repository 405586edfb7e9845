#include "credo/sentiment.hpp"

#include <cmath>

#include "credo/error.hpp"
#include "jsonl_util.hpp"
#include "training_loop.hpp"

namespace credo {
namespace {

void check_label(int label) {
  if (label != 1 && label != -1) {
    throw ValidationError("sentiment label must be +1 or -1, got " + std::to_string(label));
  }
}

// log(1 + e^z) without overflow.
double softplus(double z) { return z > 0 ? z + std::log1p(std::exp(-z)) : std::log1p(std::exp(z)); }

}  // namespace

SentimentModel::SentimentModel(Vocabulary vocab, SentimentConfig config, Rng& rng)
    : config_(config), vocab_(std::move(vocab)) {
  embedding = EmbeddingTable::random(vocab_.size(), config.embed_dim, rng, config.embed_init_scale);
  lstm = nn::LstmParams::random(config.embed_dim, config.hidden_size, rng);
  double bound = 1.0 / std::sqrt(static_cast<double>(config.hidden_size));
  head_weights.resize(static_cast<Eigen::Index>(config.hidden_size));
  for (auto& w : head_weights) w = uniform(rng, -bound, bound);
  head_bias = Eigen::VectorXd::Zero(1);
}

nn::ParamList SentimentModel::parameters() {
  nn::ParamList list;
  list.push_back(nn::param_ref("embedding", embedding.weights));
  lstm.append_to(list, "lstm");
  list.push_back(nn::param_ref("head.weights", head_weights));
  list.push_back(nn::param_ref("head.bias", head_bias));
  return list;
}

std::vector<Vocabulary::Id> SentimentModel::ids(std::string_view text) const {
  std::vector<Token> tokens = tokenize(text);
  std::vector<Vocabulary::Id> out = to_ids(tokens, vocab_, config_.max_tokens);
  if (out.empty()) throw EmptySequence();
  return out;
}

double SentimentModel::logit(std::span<const Vocabulary::Id> ids) const {
  RowMatrix inputs = nn::gather_rows(embedding.weights, ids);
  nn::LstmTrace trace = nn::lstm_forward(lstm, inputs);
  return head_weights.dot(nn::mean_pool(trace.h)) + head_bias[0];
}

double SentimentModel::example_loss(std::span<const Vocabulary::Id> ids, int label,
                                    SentimentModel* grads) const {
  check_label(label);
  RowMatrix inputs = nn::gather_rows(embedding.weights, ids);
  nn::LstmTrace trace = nn::lstm_forward(lstm, inputs);
  Eigen::VectorXd pooled = nn::mean_pool(trace.h);
  double z = head_weights.dot(pooled) + head_bias[0];
  double y = label == 1 ? 1.0 : 0.0;
  double loss = softplus(z) - y * z;
  if (grads == nullptr) return loss;

  double dz = nn::sigmoid(z) - y;
  grads->head_weights += dz * pooled;
  grads->head_bias[0] += dz;
  if (config_.head_only) return loss;

  const auto steps = static_cast<Eigen::Index>(trace.steps());
  Eigen::RowVectorXd dpool = (dz / static_cast<double>(steps)) * head_weights.transpose();
  RowMatrix dh = dpool.replicate(steps, 1);
  RowMatrix dinputs;
  nn::lstm_backward(lstm, inputs, trace, dh, grads->lstm, &dinputs);
  nn::scatter_add_rows(grads->embedding.weights, ids, dinputs);
  return loss;
}

void SentimentModel::save(const std::filesystem::path& path, std::uint64_t seed) {
  detail::json header = {{"model", "sentiment"},
                         {"embed_dim", config_.embed_dim},
                         {"hidden_size", config_.hidden_size},
                         {"max_tokens", config_.max_tokens},
                         {"head_only", config_.head_only},
                         {"seed", seed},
                         {"vocab", vocab_.tokens()}};
  nn::write_checkpoint(path, header.dump(), parameters());
}

SentimentModel SentimentModel::load(const std::filesystem::path& path) {
  nn::Checkpoint ckpt = nn::read_checkpoint(path);
  detail::json header = detail::json::parse(ckpt.header);
  if (header.value("model", "") != "sentiment") {
    throw ConfigError("not a sentiment checkpoint: " + path.string());
  }
  SentimentConfig config;
  config.embed_dim = header.at("embed_dim").get<std::size_t>();
  config.hidden_size = header.at("hidden_size").get<std::size_t>();
  config.max_tokens = header.at("max_tokens").get<std::size_t>();
  config.head_only = header.at("head_only").get<bool>();
  Rng rng(0);
  SentimentModel model(
      Vocabulary::from_tokens(header.at("vocab").get<std::vector<std::string>>()), config, rng);
  nn::load_blocks(ckpt, model.parameters());
  return model;
}

double sentiment_prob(std::string_view text, const SentimentModel& model) {
  return nn::sigmoid(model.logit(model.ids(text)));
}

double neutrality(double p) { return 1.0 - std::abs(2.0 * p - 1.0); }

SentimentModel train_sentiment(std::span<const SentimentExample> examples,
                               const SentimentConfig& config, nn::TrainingReport* report) {
  bool has_pos = false;
  bool has_neg = false;
  for (const auto& e : examples) {
    check_label(e.label);
    (e.label == 1 ? has_pos : has_neg) = true;
  }
  if (!has_pos || !has_neg) {
    throw ValidationError("sentiment training needs both positive and negative examples");
  }

  Vocabulary vocab;
  for (const auto& e : examples) {
    for (const auto& t : tokenize(e.text)) vocab.add(t.surface);
  }
  Rng rng(config.training.seed);
  SentimentModel model(std::move(vocab), config, rng);

  std::vector<std::vector<Vocabulary::Id>> ids;
  for (std::size_t i = 0; i < examples.size(); ++i) {
    try {
      ids.push_back(model.ids(examples[i].text));
    } catch (const EmptySequence&) {
      throw ValidationError("sentiment example " + std::to_string(i) + " has an empty text");
    }
  }

  nn::TrainingReport r = detail::fit_minibatch(
      model, examples.size(), config.training, rng,
      [&](const SentimentModel& m, std::size_t i, SentimentModel* grads) {
        return m.example_loss(ids[i], examples[i].label, grads);
      });
  if (report) *report = std::move(r);
  return model;
}

}  // namespace credo

#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <map>

#include "credo/error.hpp"
#include "credo/sentiment.hpp"
#include "gradcheck.hpp"
#include "oracles.hpp"

using namespace credo;

namespace {

SentimentConfig small_config() {
  SentimentConfig c;
  c.embed_dim = 5;
  c.hidden_size = 4;
  c.embed_init_scale = 0.5;
  return c;
}

Vocabulary vocab_of(std::initializer_list<const char*> words) {
  Vocabulary v;
  for (const char* w : words) v.add(w);
  return v;
}

/// Filler words plus one or two words from a positive or negative lexicon.
std::vector<SentimentExample> lexicon_data(Rng& rng, std::size_t n) {
  static const std::vector<std::string> filler = {"the", "report", "city", "council", "said",
                                                  "today", "water", "plan", "market", "school",
                                                  "road", "new", "local", "week"};
  static const std::vector<std::string> good = {"wonderful", "great", "brilliant", "superb",
                                                "delightful"};
  static const std::vector<std::string> bad = {"terrible", "awful", "horrible", "disastrous",
                                               "dreadful"};
  std::vector<SentimentExample> out;
  for (std::size_t i = 0; i < n; ++i) {
    int label = bernoulli(rng, 0.5) ? 1 : -1;
    const auto& lex = label == 1 ? good : bad;
    std::vector<std::string> words;
    std::size_t len = 4 + uniform_index(rng, 6);
    for (std::size_t k = 0; k < len; ++k) words.push_back(filler[uniform_index(rng, filler.size())]);
    std::size_t hits = 1 + uniform_index(rng, 2);
    for (std::size_t k = 0; k < hits; ++k) {
      words.insert(words.begin() + static_cast<std::ptrdiff_t>(uniform_index(rng, words.size() + 1)),
                   lex[uniform_index(rng, lex.size())]);
    }
    std::string text;
    for (const auto& w : words) text += (text.empty() ? "" : " ") + w;
    out.push_back({text, label});
  }
  return out;
}

/// Bag-of-words logistic regression fitted by plain gradient descent.
struct BowLogistic {
  std::map<std::string, double> w;
  double b = 0.0;

  double z(const std::string& text) const {
    double s = b;
    for (const auto& t : tokenize(text)) {
      auto it = w.find(t.surface);
      if (it != w.end()) s += it->second;
    }
    return s;
  }

  void fit(const std::vector<SentimentExample>& data, int epochs, double lr) {
    for (int e = 0; e < epochs; ++e) {
      for (const auto& ex : data) {
        double p = 1.0 / (1.0 + std::exp(-z(ex.text)));
        double g = p - (ex.label == 1 ? 1.0 : 0.0);
        for (const auto& t : tokenize(ex.text)) w[t.surface] -= lr * g;
        b -= lr * g;
      }
    }
  }
};

template <typename Predict>
double accuracy(const std::vector<SentimentExample>& data, Predict predict) {
  double hits = 0;
  for (const auto& ex : data) hits += predict(ex.text) == ex.label ? 1 : 0;
  return hits / static_cast<double>(data.size());
}

}  // namespace

TEST_CASE("neutrality") {
  CHECK(neutrality(0.5) == 1.0);
  CHECK(neutrality(1.0) == 0.0);
  CHECK(neutrality(0.0) == 0.0);
  CHECK(neutrality(0.75) == 0.5);
  Rng rng(81);
  for (int i = 0; i < 10000; ++i) {
    double p = uniform01(rng);
    CHECK(neutrality(p) == neutrality(1.0 - p));
    CHECK(neutrality(p) >= 0.0);
    CHECK(neutrality(p) <= 1.0);
    if (p != 0.5) CHECK(neutrality(p) < 1.0);
  }
}

TEST_CASE("sentiment_prob trivial heads") {
  Rng rng(82);
  SentimentModel model(vocab_of({"good", "bad"}), small_config(), rng);
  model.head_weights.setZero();
  model.head_bias[0] = 0.0;
  CHECK(sentiment_prob("good news", model) == 0.5);
  CHECK(sentiment_prob("bad", model) == 0.5);
  model.head_bias[0] = 40.0;
  CHECK(sentiment_prob("bad", model) > 1.0 - 1e-12);
  CHECK_THROWS_AS(sentiment_prob("", model), EmptySequence);
}

TEST_CASE("logit matches the scalar reference") {
  Rng rng(83);
  SentimentModel model(vocab_of({"p", "q", "r"}), small_config(), rng);
  for (const char* text : {"p", "q r p", "r r q q zz"}) {
    auto ids = model.ids(text);
    const auto& L = model.lstm;
    std::vector<double> wx(L.w_input.data(), L.w_input.data() + L.w_input.size());
    std::vector<double> wh(L.w_recurrent.data(), L.w_recurrent.data() + L.w_recurrent.size());
    std::vector<double> bias(L.bias.data(), L.bias.data() + L.bias.size());
    std::vector<double> h(L.hidden_size, 0.0);
    std::vector<double> c(L.hidden_size, 0.0);
    std::vector<double> pooled(L.hidden_size, 0.0);
    for (auto id : ids) {
      auto row = model.embedding.weights.row(id);
      auto out = oracle::lstm_cell({row.data(), row.data() + row.size()}, h, c, wx, wh, bias,
                                   L.hidden_size);
      h = out.h;
      c = out.c;
      for (std::size_t u = 0; u < h.size(); ++u) pooled[u] += h[u] / static_cast<double>(ids.size());
    }
    double z = model.head_bias[0];
    for (std::size_t u = 0; u < pooled.size(); ++u) z += model.head_weights[u] * pooled[u];
    CHECK(std::abs(model.logit(ids) - z) < 1e-12);
  }
}

TEST_CASE("sentiment loss passes grad_check") {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    Rng rng(1000 + seed);
    auto cfg = small_config();
    cfg.head_only = seed % 5 == 4;
    SentimentModel model(vocab_of({"calm", "angry", "news", "today"}), cfg, rng);
    auto ids = model.ids(seed % 2 ? "angry news today angry" : "calm news");
    int label = seed % 3 == 0 ? 1 : -1;
    auto flat = nn::flatten(model.parameters());
    auto loss = fixtures::model_loss(model, [&](const SentimentModel& m, SentimentModel* g) {
      return m.example_loss(ids, label, g);
    });
    if (cfg.head_only) {
      // a head-only model leaves the encoder gradients at zero
      SentimentModel grads = model;
      nn::set_zero(grads.parameters());
      model.example_loss(ids, label, &grads);
      CHECK(grads.lstm.w_input.isZero());
      CHECK(grads.embedding.weights.isZero());
      CHECK_FALSE(grads.head_weights.isZero());
    } else {
      CHECK(nn::grad_check(loss, flat).max_relative_error < 1e-4);
    }
  }
}

TEST_CASE("train_sentiment learns a lexicon and not shuffled labels") {
  Rng rng(84);
  auto train = lexicon_data(rng, 300);
  auto held = lexicon_data(rng, 200);

  BowLogistic bow;
  bow.fit(train, 20, 0.1);
  double bow_acc = accuracy(held, [&](const std::string& t) { return bow.z(t) >= 0 ? 1 : -1; });
  REQUIRE(bow_acc >= 0.9);

  SentimentConfig cfg;
  cfg.embed_dim = 16;
  cfg.hidden_size = 16;
  cfg.training.seed = 3;
  nn::TrainingReport report;
  auto model = train_sentiment(train, cfg, &report);
  CHECK(report.final_loss < report.initial_loss);
  CHECK(accuracy(held, [&](const std::string& t) {
          return sentiment_prob(t, model) >= 0.5 ? 1 : -1;
        }) >= 0.9);

  auto shuffled = train;
  std::vector<int> labels;
  for (const auto& e : shuffled) labels.push_back(e.label);
  shuffle(labels, rng);
  for (std::size_t i = 0; i < shuffled.size(); ++i) shuffled[i].label = labels[i];
  auto control = train_sentiment(shuffled, cfg);
  double control_acc = accuracy(held, [&](const std::string& t) {
    return sentiment_prob(t, control) >= 0.5 ? 1 : -1;
  });
  CHECK(control_acc >= 0.4);
  CHECK(control_acc <= 0.6);
}

TEST_CASE("train_sentiment validation") {
  std::vector<SentimentExample> one_class = {{"fine", 1}, {"great", 1}};
  CHECK_THROWS_AS(train_sentiment(one_class, small_config()), ValidationError);
}

TEST_CASE("sentiment model round-trips through a checkpoint") {
  Rng rng(85);
  SentimentModel model(vocab_of({"x", "y"}), small_config(), rng);
  auto path = std::filesystem::temp_directory_path() / "credo_sentiment_test.ckpt";
  model.save(path, 85);
  auto loaded = SentimentModel::load(path);
  CHECK(loaded.vocabulary() == model.vocabulary());
  CHECK(sentiment_prob("x y y", loaded) == sentiment_prob("x y y", model));
  std::filesystem::remove(path);
}

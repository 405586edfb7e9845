#include "credo/config.hpp"

#include <charconv>
#include <cstdio>
#include <functional>
#include <vector>

#include "credo/error.hpp"
#include "jsonl_util.hpp"

namespace credo {
namespace {

std::string trim(std::string_view s) {
  std::size_t lo = s.find_first_not_of(" \t\r");
  if (lo == std::string_view::npos) return {};
  std::size_t hi = s.find_last_not_of(" \t\r");
  return std::string(s.substr(lo, hi - lo + 1));
}

// Shortest text that parses back to the same value.
std::string format_double(double v) {
  char buf[32];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

double parse_double(const std::string& s) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != s.size() || s.empty()) throw ConfigError("expected a number, got '" + s + "'");
  return v;
}

template <typename T>
T parse_unsigned(const std::string& s) {
  T v{};
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) {
    throw ConfigError("expected a non-negative integer, got '" + s + "'");
  }
  return v;
}

bool parse_bool(const std::string& s) {
  if (s == "true" || s == "1") return true;
  if (s == "false" || s == "0") return false;
  throw ConfigError("expected true or false, got '" + s + "'");
}

struct Field {
  std::string key;
  std::string comment;  ///< emitted above the key when non-empty
  std::function<void(Config&, const std::string&)> set;
  std::function<std::string(const Config&)> get;
};

template <typename Member>
Field real(std::string key, Member member, std::string comment = {}) {
  return {std::move(key), std::move(comment),
          [member](Config& c, const std::string& v) { member(c) = parse_double(v); },
          [member](const Config& c) { return format_double(member(const_cast<Config&>(c))); }};
}

template <typename Member>
Field count(std::string key, Member member, std::string comment = {}) {
  return {std::move(key), std::move(comment),
          [member](Config& c, const std::string& v) {
            auto& ref = member(c);
            ref = parse_unsigned<std::remove_reference_t<decltype(ref)>>(v);
          },
          [member](const Config& c) { return std::to_string(member(const_cast<Config&>(c))); }};
}

template <typename Member>
Field flag(std::string key, Member member, std::string comment = {}) {
  return {std::move(key), std::move(comment),
          [member](Config& c, const std::string& v) { member(c) = parse_bool(v); },
          [member](const Config& c) {
            return std::string(member(const_cast<Config&>(c)) ? "true" : "false");
          }};
}

#define CREDO_MEMBER(expr) [](Config & c) -> auto& { return c.expr; }

const std::vector<Field>& fields() {
  static const std::vector<Field> table = {
      count("seed", CREDO_MEMBER(seed), "Master seed; every component seed derives from it."),
      {"stopwords", "Text processing. An empty stopword path selects the built-in list.",
       [](Config& c, const std::string& v) { c.stopwords = v; },
       [](const Config& c) { return c.stopwords; }},
      count("keywords.top_k", CREDO_MEMBER(keyword_top_k)),
      real("bm25.k1", CREDO_MEMBER(bm25.k1), "Retrieval"),
      real("bm25.b", CREDO_MEMBER(bm25.b)),
      real("bm25.epsilon", CREDO_MEMBER(bm25.epsilon)),
      count("retrieval.limit", CREDO_MEMBER(retrieval_limit)),
      real("textrank.damping", CREDO_MEMBER(summary.damping), "Summarization"),
      real("textrank.tolerance", CREDO_MEMBER(summary.tolerance)),
      count("textrank.max_iters", CREDO_MEMBER(summary.max_iters)),
      real("summary.length_slack", CREDO_MEMBER(summary.length_slack)),
      count("siamese.embed_dim", CREDO_MEMBER(siamese.embed_dim), "Semantic similarity model"),
      count("siamese.hidden_size", CREDO_MEMBER(siamese.hidden_size)),
      count("siamese.max_tokens", CREDO_MEMBER(siamese.max_tokens)),
      real("siamese.margin", CREDO_MEMBER(siamese.margin)),
      real("siamese.embed_init_scale", CREDO_MEMBER(siamese.embed_init_scale)),
      count("siamese.epochs", CREDO_MEMBER(siamese.training.epochs)),
      count("siamese.batch_size", CREDO_MEMBER(siamese.training.batch_size)),
      real("siamese.learning_rate", CREDO_MEMBER(siamese.training.learning_rate)),
      real("siamese.grad_clip", CREDO_MEMBER(siamese.training.grad_clip)),
      count("sentiment.embed_dim", CREDO_MEMBER(sentiment.embed_dim), "Sentiment model"),
      count("sentiment.hidden_size", CREDO_MEMBER(sentiment.hidden_size)),
      count("sentiment.max_tokens", CREDO_MEMBER(sentiment.max_tokens)),
      real("sentiment.embed_init_scale", CREDO_MEMBER(sentiment.embed_init_scale)),
      flag("sentiment.head_only", CREDO_MEMBER(sentiment.head_only)),
      count("sentiment.epochs", CREDO_MEMBER(sentiment.training.epochs)),
      count("sentiment.batch_size", CREDO_MEMBER(sentiment.training.batch_size)),
      real("sentiment.learning_rate", CREDO_MEMBER(sentiment.training.learning_rate)),
      real("sentiment.grad_clip", CREDO_MEMBER(sentiment.training.grad_clip)),
      real("fusion.keyword_tau", CREDO_MEMBER(keyword_tau), "Fusion: eq | mlp; mode: binary | multiclass"),
      {"fusion.kind", "", [](Config& c, const std::string& v) { c.fusion = parse_fusion(v); },
       [](const Config& c) { return std::string(to_string(c.fusion)); }},
      {"fusion.mode", "", [](Config& c, const std::string& v) { c.mode = parse_label_mode(v); },
       [](const Config& c) { return std::string(to_string(c.mode)); }},
      count("weights.epochs", CREDO_MEMBER(weights.epochs)),
      real("weights.learning_rate", CREDO_MEMBER(weights.learning_rate)),
      flag("weights.class_balanced", CREDO_MEMBER(weights.class_balanced)),
      count("mlp.hidden", CREDO_MEMBER(mlp.hidden)),
      count("mlp.epochs", CREDO_MEMBER(mlp.epochs)),
      real("mlp.learning_rate", CREDO_MEMBER(mlp.learning_rate)),
      flag("mlp.class_balanced", CREDO_MEMBER(mlp.class_balanced)),
      count("eval.folds", CREDO_MEMBER(folds), "Evaluation"),
      real("sts.threshold", CREDO_MEMBER(sts_threshold)),
      count("synthetic.claims", CREDO_MEMBER(synthetic.claims), "Synthetic corpus"),
      real("synthetic.true_fraction", CREDO_MEMBER(synthetic.true_fraction)),
      count("synthetic.docs_per_fact", CREDO_MEMBER(synthetic.docs_per_fact)),
      real("synthetic.exaggeration_rate", CREDO_MEMBER(synthetic.exaggeration_rate)),
      real("synthetic.polarized_contradiction_rate",
           CREDO_MEMBER(synthetic.polarized_contradiction_rate)),
      count("synthetic.similarity_pairs", CREDO_MEMBER(synthetic.similarity_pairs)),
      count("synthetic.sentiment_examples", CREDO_MEMBER(synthetic.sentiment_examples)),
      count("synthetic.sts_pairs", CREDO_MEMBER(synthetic.sts_pairs)),
  };
  return table;
}

#undef CREDO_MEMBER

}  // namespace

std::string_view to_string(Fusion f) { return f == Fusion::Mlp ? "mlp" : "eq"; }

Fusion parse_fusion(std::string_view s) {
  if (s == "eq" || s == "eq-weights") return Fusion::EqWeights;
  if (s == "mlp") return Fusion::Mlp;
  throw ConfigError("unknown fusion '" + std::string(s) + "' (expected eq or mlp)");
}

std::string_view to_string(LabelMode m) {
  return m == LabelMode::MultiClass ? "multiclass" : "binary";
}

LabelMode parse_label_mode(std::string_view s) {
  if (s == "binary") return LabelMode::Binary;
  if (s == "multiclass" || s == "multi-class") return LabelMode::MultiClass;
  throw ConfigError("unknown mode '" + std::string(s) + "' (expected binary or multiclass)");
}

Config parse_config(std::string_view text) {
  Config config;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t nl = text.find('\n', pos);
    if (nl == std::string_view::npos) nl = text.size();
    std::string line(text.substr(pos, nl - pos));
    pos = nl + 1;
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("line " + std::to_string(line_no) + ": expected key = value");
    }
    std::string key = trim(std::string_view(line).substr(0, eq));
    std::string value = trim(std::string_view(line).substr(eq + 1));
    bool found = false;
    for (const auto& f : fields()) {
      if (f.key != key) continue;
      found = true;
      try {
        f.set(config, value);
      } catch (const ConfigError& e) {
        throw ConfigError("line " + std::to_string(line_no) + ": " + key + ": " + e.what());
      }
    }
    if (!found) throw ConfigError("line " + std::to_string(line_no) + ": unknown key '" + key + "'");
  }
  return config;
}

Config load_config(const std::filesystem::path& path) {
  std::string text;
  try {
    text = detail::read_file(path);
  } catch (const Error& e) {
    throw ConfigError(e.what());
  }
  return parse_config(text);
}

std::string render_config(const Config& config) {
  std::string out;
  for (const auto& f : fields()) {
    if (!f.comment.empty()) {
      if (!out.empty()) out += "\n";
      out += "# " + f.comment + "\n";
    }
    out += f.key + " = " + f.get(config) + "\n";
  }
  return out;
}

}  // namespace credo

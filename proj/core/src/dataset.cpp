#include "credo/dataset.hpp"

#include "credo/error.hpp"
#include "jsonl_util.hpp"

namespace credo {
namespace {

using detail::json;

std::optional<std::string> optional_string(const json& obj, const char* key) {
  auto it = obj.find(key);
  if (it == obj.end() || it->is_null()) return std::nullopt;
  return it->get<std::string>();
}

json nullable(const std::optional<std::string>& s) { return s ? json(*s) : json(nullptr); }

int parse_label(const json& obj) {
  int label = detail::required<int>(obj, "label");
  if (label != 1 && label != -1) {
    throw ValidationError("label must be +1 or -1, got " + std::to_string(label));
  }
  return label;
}

template <typename T>
std::string join_lines(std::span<const T> items, json (*to_json)(const T&)) {
  std::string out;
  for (const auto& item : items) {
    out += to_json(item).dump();
    out.push_back('\n');
  }
  return out;
}

json kb_json(const KbDocument& d) {
  return {{"doc_id", d.doc_id},
          {"title", d.title},
          {"text", d.text},
          {"source_url", d.source_url},
          {"author", nullable(d.author)}};
}

json claim_json(const ClaimArticle& c) {
  json label = c.label ? json(std::string(to_string(*c.label))) : json(nullptr);
  return {{"id", c.id},         {"text", c.text},
          {"label", label},     {"author", nullable(c.author)},
          {"source_url", c.source_url}, {"date", nullable(c.date)}};
}

json pair_json(const PairExample& p) {
  return {{"text_a", p.text_a}, {"text_b", p.text_b}, {"label", p.label}};
}

json sentiment_json(const SentimentExample& e) { return {{"text", e.text}, {"label", e.label}}; }

}  // namespace

std::vector<KbDocument> parse_kb(std::string_view contents) {
  std::vector<KbDocument> docs;
  detail::for_each_jsonl(contents, [&](const json& obj, std::size_t) {
    KbDocument d;
    d.doc_id = detail::required<std::string>(obj, "doc_id");
    d.title = obj.value("title", "");
    d.text = detail::required<std::string>(obj, "text");
    d.source_url = obj.value("source_url", "");
    d.author = optional_string(obj, "author");
    docs.push_back(std::move(d));
  });
  return docs;
}

std::vector<KbDocument> load_kb(const std::filesystem::path& path) {
  return parse_kb(detail::read_file(path));
}

std::string serialize_kb(std::span<const KbDocument> docs) { return join_lines(docs, &kb_json); }

std::vector<ClaimArticle> parse_claims(std::string_view contents) {
  std::vector<ClaimArticle> claims;
  detail::for_each_jsonl(contents, [&](const json& obj, std::size_t) {
    ClaimArticle c;
    c.id = detail::required<std::string>(obj, "id");
    c.text = detail::required<std::string>(obj, "text");
    if (c.text.find_first_not_of(" \t\r\n") == std::string::npos) {
      throw ValidationError("claim text is empty");
    }
    if (auto label = optional_string(obj, "label")) c.label = parse_verdict(*label);
    c.author = optional_string(obj, "author");
    c.source_url = obj.value("source_url", "");
    c.date = optional_string(obj, "date");
    claims.push_back(std::move(c));
  });
  return claims;
}

std::vector<ClaimArticle> load_claims(const std::filesystem::path& path) {
  return parse_claims(detail::read_file(path));
}

std::string serialize_claims(std::span<const ClaimArticle> claims) {
  return join_lines(claims, &claim_json);
}

std::vector<PairExample> parse_pairs(std::string_view contents) {
  std::vector<PairExample> pairs;
  detail::for_each_jsonl(contents, [&](const json& obj, std::size_t) {
    pairs.push_back({detail::required<std::string>(obj, "text_a"),
                     detail::required<std::string>(obj, "text_b"), parse_label(obj)});
  });
  return pairs;
}

std::vector<PairExample> load_pairs(const std::filesystem::path& path) {
  return parse_pairs(detail::read_file(path));
}

std::string serialize_pairs(std::span<const PairExample> pairs) {
  return join_lines(pairs, &pair_json);
}

std::vector<SentimentExample> parse_sentiment(std::string_view contents) {
  std::vector<SentimentExample> out;
  detail::for_each_jsonl(contents, [&](const json& obj, std::size_t) {
    out.push_back({detail::required<std::string>(obj, "text"), parse_label(obj)});
  });
  return out;
}

std::vector<SentimentExample> load_sentiment(const std::filesystem::path& path) {
  return parse_sentiment(detail::read_file(path));
}

std::string serialize_sentiment(std::span<const SentimentExample> examples) {
  return join_lines(examples, &sentiment_json);
}

std::string serialize_reputation(std::span<const std::pair<std::string, double>> scores) {
  std::string out;
  for (const auto& [domain, score] : scores) {
    out += json{{"domain", domain}, {"score", score}}.dump();
    out.push_back('\n');
  }
  return out;
}

std::vector<StsPair> parse_sts(std::string_view contents) {
  std::vector<StsPair> out;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos < contents.size()) {
    std::size_t nl = contents.find('\n', pos);
    if (nl == std::string_view::npos) nl = contents.size();
    std::string line(contents.substr(pos, nl - pos));
    pos = nl + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos || line[0] == '#') continue;
    auto t1 = line.find('\t');
    auto t2 = t1 == std::string::npos ? t1 : line.find('\t', t1 + 1);
    if (t2 == std::string::npos) throw ParseError("expected three tab-separated fields", line_no);
    StsPair p;
    p.text_a = line.substr(0, t1);
    p.text_b = line.substr(t1 + 1, t2 - t1 - 1);
    std::string gold = line.substr(t2 + 1);
    std::size_t used = 0;
    try {
      p.score = std::stod(gold, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || gold.find_first_not_of(" \t", used) != std::string::npos) {
      throw ParseError("bad gold score '" + gold + "'", line_no);
    }
    if (!(p.score >= 0.0 && p.score <= 5.0)) {
      throw ParseError("gold score " + gold + " outside [0, 5]", line_no);
    }
    out.push_back(std::move(p));
  }
  return out;
}

std::vector<StsPair> load_sts(const std::filesystem::path& path) {
  return parse_sts(detail::read_file(path));
}

std::string serialize_sts(std::span<const StsPair> pairs) {
  std::string out;
  for (const auto& p : pairs) {
    out += p.text_a + "\t" + p.text_b + "\t" + json(p.score).dump() + "\n";
  }
  return out;
}

std::vector<PairExample> binarize_sts(std::span<const StsPair> pairs, double threshold) {
  std::vector<PairExample> out;
  for (const auto& p : pairs) out.push_back({p.text_a, p.text_b, p.score >= threshold ? 1 : -1});
  return out;
}

}  // namespace credo

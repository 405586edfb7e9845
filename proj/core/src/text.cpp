#include "credo/text.hpp"

#include <fstream>
#include <sstream>

#include "credo/error.hpp"

namespace credo {
namespace {

struct CodePoint {
  char32_t value;
  std::size_t begin;
  std::size_t end;  // one past the last byte
};

// Lenient UTF-8 decoder: invalid bytes decode as themselves (Latin-1).
CodePoint decode_at(std::string_view s, std::size_t i) {
  auto byte = [&](std::size_t k) { return static_cast<unsigned char>(s[k]); };
  unsigned char lead = byte(i);
  std::size_t len = 1;
  char32_t cp = lead;
  if (lead >= 0xC0 && lead < 0xE0) {
    len = 2;
    cp = lead & 0x1F;
  } else if (lead >= 0xE0 && lead < 0xF0) {
    len = 3;
    cp = lead & 0x0F;
  } else if (lead >= 0xF0 && lead < 0xF8) {
    len = 4;
    cp = lead & 0x07;
  }
  if (len > 1) {
    if (i + len > s.size()) return {lead, i, i + 1};
    for (std::size_t k = 1; k < len; ++k) {
      unsigned char c = byte(i + k);
      if ((c & 0xC0) != 0x80) return {lead, i, i + 1};
      cp = (cp << 6) | (c & 0x3F);
    }
  }
  return {cp, i, i + len};
}

std::vector<CodePoint> decode(std::string_view s) {
  std::vector<CodePoint> out;
  out.reserve(s.size());
  for (std::size_t i = 0; i < s.size();) {
    CodePoint cp = decode_at(s, i);
    out.push_back(cp);
    i = cp.end;
  }
  return out;
}

bool is_space(char32_t c) {
  return (c >= 0x09 && c <= 0x0D) || c == 0x20 || c == 0x85 || c == 0xA0 || c == 0x1680 ||
         (c >= 0x2000 && c <= 0x200A) || c == 0x2028 || c == 0x2029 || c == 0x202F ||
         c == 0x205F || c == 0x3000;
}

bool is_punct(char32_t c) {
  if (c < 0x80) {
    return (c >= 0x21 && c <= 0x2F) || (c >= 0x3A && c <= 0x40) || (c >= 0x5B && c <= 0x60) ||
           (c >= 0x7B && c <= 0x7E);
  }
  return (c >= 0xA1 && c <= 0xBF && c != 0xAA && c != 0xB5 && c != 0xBA) ||
         (c >= 0x2010 && c <= 0x2027) || (c >= 0x2030 && c <= 0x205E) ||
         (c >= 0x3001 && c <= 0x3003) || (c >= 0x300C && c <= 0x300F);
}

bool is_apostrophe(char32_t c) { return c == U'\'' || c == 0x2019; }

void append_utf8(std::string& out, char32_t c) {
  if (c < 0x80) {
    out.push_back(static_cast<char>(c));
  } else if (c < 0x800) {
    out.push_back(static_cast<char>(0xC0 | (c >> 6)));
    out.push_back(static_cast<char>(0x80 | (c & 0x3F)));
  } else if (c < 0x10000) {
    out.push_back(static_cast<char>(0xE0 | (c >> 12)));
    out.push_back(static_cast<char>(0x80 | ((c >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (c & 0x3F)));
  } else {
    out.push_back(static_cast<char>(0xF0 | (c >> 18)));
    out.push_back(static_cast<char>(0x80 | ((c >> 12) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | ((c >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (c & 0x3F)));
  }
}

char32_t to_lower(char32_t c) {
  if (c >= U'A' && c <= U'Z') return c + 32;
  if (c >= 0xC0 && c <= 0xDE && c != 0xD7) return c + 32;
  return c;
}

// Converts one whitespace-free piece into a token, reporting which sides had
// punctuation removed. Returns false if nothing is left.
bool make_token(std::span<const CodePoint> piece, ScannedToken& out) {
  std::size_t lo = 0;
  std::size_t hi = piece.size();
  while (lo < hi && is_punct(piece[lo].value)) ++lo;
  while (hi > lo && is_punct(piece[hi - 1].value)) --hi;
  bool stripped_before = lo > 0;
  bool stripped_after = hi < piece.size();
  // possessive clitic: "pennsylvania's" -> "pennsylvania"
  while (hi - lo > 2 && (piece[hi - 1].value == U's' || piece[hi - 1].value == U'S') &&
         is_apostrophe(piece[hi - 2].value)) {
    hi -= 2;
    while (hi > lo && is_punct(piece[hi - 1].value)) --hi;
    stripped_after = true;
  }
  if (lo == hi) return false;
  std::string surface;
  for (std::size_t k = lo; k < hi; ++k) append_utf8(surface, to_lower(piece[k].value));
  out.token.surface = std::move(surface);
  out.break_before = stripped_before;
  out.break_after = stripped_after;
  return true;
}

std::string_view trim(std::string_view s, std::size_t& offset) {
  auto cps = decode(s);
  std::size_t lo = 0;
  std::size_t hi = cps.size();
  while (lo < hi && is_space(cps[lo].value)) ++lo;
  while (hi > lo && is_space(cps[hi - 1].value)) --hi;
  if (lo == hi) {
    offset = s.size();
    return {};
  }
  offset = cps[lo].begin;
  return s.substr(cps[lo].begin, cps[hi - 1].end - cps[lo].begin);
}

}  // namespace

std::vector<ScannedToken> scan_tokens(std::string_view text) {
  std::vector<ScannedToken> out;
  auto cps = decode(text);
  std::size_t i = 0;
  while (i < cps.size()) {
    while (i < cps.size() && is_space(cps[i].value)) ++i;
    std::size_t start = i;
    while (i < cps.size() && !is_space(cps[i].value)) ++i;
    if (start == i) continue;
    std::span<const CodePoint> piece(cps.data() + start, i - start);
    ScannedToken st;
    if (make_token(piece, st)) {
      st.token.position = out.size();
      out.push_back(std::move(st));
    } else if (!out.empty()) {
      // a bare punctuation piece such as "--" still separates phrases
      out.back().break_after = true;
    }
  }
  return out;
}

std::vector<Token> tokenize(std::string_view text) {
  std::vector<Token> out;
  for (auto& st : scan_tokens(text)) out.push_back(std::move(st.token));
  return out;
}

std::vector<Sentence> split_sentences(std::string_view text) {
  std::vector<Sentence> out;
  auto cps = decode(text);
  std::size_t sentence_begin = 0;
  std::size_t next_position = 0;

  auto emit = [&](std::size_t end_byte) {
    std::size_t local = 0;
    std::string_view piece = trim(text.substr(sentence_begin, end_byte - sentence_begin), local);
    if (!piece.empty()) {
      Sentence s;
      s.text = std::string(piece);
      s.index = out.size();
      s.offset = sentence_begin + local;
      s.tokens = tokenize(piece);
      for (auto& tok : s.tokens) tok.position = next_position++;
      out.push_back(std::move(s));
    }
    sentence_begin = end_byte;
  };

  for (std::size_t i = 0; i < cps.size(); ++i) {
    char32_t c = cps[i].value;
    if (c != U'.' && c != U'!' && c != U'?') continue;
    bool at_end = i + 1 == cps.size();
    if (at_end || is_space(cps[i + 1].value)) emit(cps[i].end);
  }
  if (sentence_begin < text.size()) emit(text.size());
  return out;
}

StopwordSet parse_stopwords(std::string_view contents) {
  StopwordSet words;
  std::size_t pos = 0;
  while (pos <= contents.size()) {
    std::size_t nl = contents.find('\n', pos);
    if (nl == std::string_view::npos) nl = contents.size();
    std::size_t ignored = 0;
    std::string_view line = trim(contents.substr(pos, nl - pos), ignored);
    if (!line.empty() && line.front() != '#') {
      std::string word;
      for (auto cp : decode(line)) append_utf8(word, to_lower(cp.value));
      words.insert(std::move(word));
    }
    pos = nl + 1;
  }
  return words;
}

StopwordSet load_stopwords(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open stopword file: " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_stopwords(buf.str());
}

const StopwordSet& default_stopwords() {
  static const StopwordSet words = parse_stopwords(default_stopword_file_contents());
  return words;
}

// ---------------------------------------------------------------------------

Vocabulary::Vocabulary() {
  tokens_ = {"<pad>", "<unk>"};
  ids_.emplace("<pad>", kPadding);
  ids_.emplace("<unk>", kUnknown);
}

Vocabulary Vocabulary::from_tokens(std::vector<std::string> tokens) {
  if (tokens.size() < 2 || tokens[0] != "<pad>" || tokens[1] != "<unk>") {
    throw ConfigError("vocabulary must start with <pad>, <unk>");
  }
  Vocabulary v;
  for (std::size_t i = 2; i < tokens.size(); ++i) {
    if (v.contains(tokens[i])) throw ConfigError("duplicate vocabulary token: " + tokens[i]);
    v.add(tokens[i]);
  }
  return v;
}

Vocabulary::Id Vocabulary::add(std::string_view surface) {
  auto it = ids_.find(std::string(surface));
  if (it != ids_.end()) return it->second;
  Id id = static_cast<Id>(tokens_.size());
  tokens_.emplace_back(surface);
  ids_.emplace(tokens_.back(), id);
  return id;
}

Vocabulary::Id Vocabulary::id(std::string_view surface) const {
  auto it = ids_.find(std::string(surface));
  return it == ids_.end() ? kUnknown : it->second;
}

bool Vocabulary::contains(std::string_view surface) const {
  return ids_.find(std::string(surface)) != ids_.end();
}

const std::string& Vocabulary::token(Id id) const {
  if (id < 0 || static_cast<std::size_t>(id) >= tokens_.size()) {
    throw LookupError("vocabulary id out of range: " + std::to_string(id));
  }
  return tokens_[static_cast<std::size_t>(id)];
}

EmbeddingTable EmbeddingTable::random(std::size_t vocab_size, std::size_t dim, Rng& rng,
                                      double scale) {
  EmbeddingTable t;
  t.weights.resize(static_cast<Eigen::Index>(vocab_size), static_cast<Eigen::Index>(dim));
  for (Eigen::Index r = 0; r < t.weights.rows(); ++r) {
    for (Eigen::Index c = 0; c < t.weights.cols(); ++c) t.weights(r, c) = uniform(rng, -scale, scale);
  }
  return t;
}

Eigen::VectorXd embed_lookup(const Token& token, const Vocabulary& vocab,
                             const EmbeddingTable& table) {
  if (table.rows() != vocab.size()) {
    throw ConfigError("embedding table has " + std::to_string(table.rows()) +
                      " rows but vocabulary has " + std::to_string(vocab.size()) + " entries");
  }
  return table.weights.row(vocab.id(token.surface)).transpose();
}

std::vector<Vocabulary::Id> to_ids(std::span<const Token> tokens, const Vocabulary& vocab,
                                   std::size_t max_tokens) {
  std::vector<Vocabulary::Id> ids;
  std::size_t n = std::min(tokens.size(), max_tokens);
  ids.reserve(n);
  for (std::size_t i = 0; i < n; ++i) ids.push_back(vocab.id(tokens[i].surface));
  return ids;
}

}  // namespace credo

#include "credo/trust.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>

#include "credo/error.hpp"
#include "jsonl_util.hpp"

namespace credo {
namespace {

std::string lower_trim(std::string_view s) {
  std::size_t lo = 0;
  std::size_t hi = s.size();
  while (lo < hi && std::isspace(static_cast<unsigned char>(s[lo]))) ++lo;
  while (hi > lo && std::isspace(static_cast<unsigned char>(s[hi - 1]))) --hi;
  std::string out(s.substr(lo, hi - lo));
  for (auto& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

void check_unit(double score, std::string_view what) {
  if (!std::isfinite(score) || score < 0.0 || score > 1.0) {
    throw ValidationError(std::string(what) + " must be in [0,1], got " + std::to_string(score));
  }
}

}  // namespace

std::string_view to_string(Verdict v) {
  switch (v) {
    case Verdict::False: return "False";
    case Verdict::MostlyFalse: return "Mostly False";
    case Verdict::MostlyTrue: return "Mostly True";
    case Verdict::True: return "True";
  }
  return "False";
}

Verdict parse_verdict(std::string_view text) {
  std::string key;
  for (char c : lower_trim(text)) {
    if (c == '_' || c == '-') c = ' ';
    key.push_back(c);
  }
  if (key == "true") return Verdict::True;
  if (key == "mostly true") return Verdict::MostlyTrue;
  if (key == "mostly false") return Verdict::MostlyFalse;
  if (key == "false") return Verdict::False;
  throw ValidationError("unknown verdict: " + std::string(text));
}

TagValue::TagValue(double t) : t_(t) { check_unit(t, "tag value"); }

TagValue TagValue::from_verdict(Verdict v, LabelMode mode) {
  if (mode == LabelMode::Binary) return TagValue(is_credible(v) ? 1.0 : 0.0);
  switch (v) {
    case Verdict::False: return TagValue(0.0);
    case Verdict::MostlyFalse: return TagValue(0.25);
    case Verdict::MostlyTrue: return TagValue(0.75);
    case Verdict::True: return TagValue(1.0);
  }
  return TagValue(0.0);
}

void ReputationProvider::set(std::string_view domain, double score) {
  check_unit(score, "reputation score");
  scores_.insert_or_assign(normalize_domain(domain), score);
}

double ReputationProvider::lookup(std::string_view domain) const {
  auto it = scores_.find(domain);
  return it == scores_.end() ? kDefaultScore : it->second;
}

ReputationProvider ReputationProvider::parse(std::string_view contents) {
  ReputationProvider p;
  detail::for_each_jsonl(contents, [&](const detail::json& obj, std::size_t) {
    p.set(detail::required<std::string>(obj, "domain"), detail::required<double>(obj, "score"));
  });
  return p;
}

ReputationProvider ReputationProvider::load(const std::filesystem::path& path) {
  return parse(detail::read_file(path));
}

std::string normalize_domain(std::string_view url) {
  std::string s = lower_trim(url);
  if (auto scheme = s.find("://"); scheme != std::string::npos) s.erase(0, scheme + 3);
  if (auto at = s.find('@'); at != std::string::npos && at < s.find('/')) s.erase(0, at + 1);
  if (auto slash = s.find_first_of("/?#"); slash != std::string::npos) s.erase(slash);
  if (auto colon = s.find(':'); colon != std::string::npos) s.erase(colon);
  if (s.rfind("www.", 0) == 0) s.erase(0, 4);
  while (!s.empty() && s.back() == '.') s.pop_back();
  return s;
}

std::string normalize_author(const std::optional<std::string>& author) {
  if (!author) return "anonymous";
  std::string a = lower_trim(*author);
  return a.empty() ? "anonymous" : a;
}

LedgerEntry init_entry(EntityKind kind, std::string_view entity_id,
                       const ReputationProvider& provider) {
  LedgerEntry e;
  e.entity_id = std::string(entity_id);
  e.score = kind == EntityKind::Author ? 0.5 : provider.lookup(entity_id);
  e.count = 0;
  return e;
}

double update_factor(TagValue tag) {
  double t = tag.value();
  return t <= 0.5 ? 1.0 + std::log(1.0 - t) : 1.0 + std::log(1.0 + t);
}

LedgerEntry update(const LedgerEntry& entry, TagValue tag) {
  check_unit(entry.score, "ledger score");
  LedgerEntry next = entry;
  next.score = std::clamp(update_factor(tag) * entry.score, 0.0, 1.0);
  next.count = entry.count + 1;
  return next;
}

TrustLedger::TrustLedger(EntityKind kind, std::shared_ptr<const ReputationProvider> provider)
    : kind_(kind), provider_(std::move(provider)) {}

const LedgerEntry& TrustLedger::observe(std::string_view entity_id, TagValue tag) {
  auto it = entries_.find(entity_id);
  if (it == entries_.end()) {
    it = entries_.emplace(std::string(entity_id), lookup(entity_id)).first;
  }
  it->second = update(it->second, tag);
  return it->second;
}

LedgerEntry TrustLedger::lookup(std::string_view entity_id) const {
  auto it = entries_.find(entity_id);
  if (it != entries_.end()) return it->second;
  static const ReputationProvider empty;
  return init_entry(kind_, entity_id, provider_ ? *provider_ : empty);
}

void TrustLedger::insert(LedgerEntry entry) {
  check_unit(entry.score, "ledger score");
  std::string key = entry.entity_id;
  entries_.insert_or_assign(std::move(key), std::move(entry));
}

std::string TrustLedger::serialize() const {
  std::string out;
  for (const auto& [id, e] : entries_) {
    detail::json obj = {{"entity_id", e.entity_id}, {"score", e.score}, {"count", e.count}};
    out += obj.dump();
    out.push_back('\n');
  }
  return out;
}

void TrustLedger::persist(const std::filesystem::path& path) const {
  detail::write_file(path, serialize());
}

TrustLedger TrustLedger::parse(std::string_view contents, EntityKind kind,
                               std::shared_ptr<const ReputationProvider> provider) {
  TrustLedger ledger(kind, std::move(provider));
  detail::for_each_jsonl(contents, [&](const detail::json& obj, std::size_t) {
    LedgerEntry e;
    e.entity_id = detail::required<std::string>(obj, "entity_id");
    e.score = detail::required<double>(obj, "score");
    e.count = detail::required<std::uint64_t>(obj, "count");
    if (ledger.entries_.contains(e.entity_id)) {
      throw IngestionError("duplicate entity_id: " + e.entity_id);
    }
    ledger.insert(std::move(e));
  });
  return ledger;
}

TrustLedger TrustLedger::load(const std::filesystem::path& path, EntityKind kind,
                              std::shared_ptr<const ReputationProvider> provider) {
  return parse(detail::read_file(path), kind, std::move(provider));
}

}  // namespace credo

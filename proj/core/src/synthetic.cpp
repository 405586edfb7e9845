#include "credo/synthetic.hpp"

#include <array>
#include <cmath>
#include <set>

#include "credo/random.hpp"

namespace credo {
namespace {

using Words = std::vector<std::string_view>;

// Each family pairs a set of synonymous verbs with its antonym set.
struct VerbFamily {
  Words forward;
  Words opposite;
};

const std::vector<VerbFamily>& verb_families() {
  static const std::vector<VerbFamily> families = {
      {{"increased", "raised", "boosted"}, {"decreased", "lowered", "reduced"}},
      {{"approved", "endorsed", "backed"}, {"rejected", "vetoed", "blocked"}},
      {{"expanded", "extended", "widened"}, {"shrank", "narrowed", "curtailed"}},
      {{"confirmed", "verified", "affirmed"}, {"denied", "disputed", "refuted"}},
      {{"opened", "launched", "started"}, {"closed", "halted", "ended"}},
      {{"supported", "funded", "sponsored"}, {"opposed", "defunded", "abandoned"}},
  };
  return families;
}

const Words kSyllables = {"ka", "lo", "mi", "ru", "ve", "to", "sa", "ne", "di", "po",
                          "ba", "fe", "gu", "ri", "zo", "ma", "te", "li", "no", "ha"};
const Words kCodas = {"n", "r", "s", "th", "l", "x"};
const Words kOrgs = {"council",    "agency",     "institute", "committee", "ministry",
                     "board",      "union",      "authority", "commission", "foundation"};
const Words kModifiers = {"regional", "national", "rural",   "urban",     "coastal",
                          "northern", "southern", "federal", "municipal", "local"};
const Words kTopics = {"water", "school", "transit", "housing", "farm",
                       "energy", "health", "road",    "park",    "library"};
const Words kNouns = {"budget", "tariffs", "wages",  "subsidies", "permits",   "fares",
                      "pensions", "rents", "grants", "contracts", "programs", "levies"};

const Words kSubjectTails = {
    "announced the decision at a public session",
    "published a detailed statement afterwards",
    "answered questions from local reporters",
    "held a press briefing on the matter",
    "circulated an internal memo to staff",
    "scheduled a follow-up meeting for next month",
};
const Words kObjectTails = {
    "had been debated for several months",
    "affects many households in the area",
    "was reviewed by independent auditors",
    "appears in the annual spending report",
    "drew attention from neighbouring districts",
    "remains a recurring topic among residents",
};

const Words kPositiveAdverbs = {"wonderfully", "brilliantly", "heroically", "generously"};
const Words kPositiveAdjectives = {"wonderful", "brilliant", "excellent",
                                   "fantastic", "amazing",   "glorious"};
const Words kNegativeAdverbs = {"shamefully", "disgracefully", "recklessly", "foolishly"};
const Words kNegativeAdjectives = {"terrible", "awful",    "disgraceful",
                                   "horrible", "pathetic", "outrageous"};

const Words kHighDomains = {"civicrecord.org", "publicledger.com", "factdesk.org",
                            "cityherald.com",  "statewire.org",    "openbulletin.net"};
const Words kLowDomains = {"buzzfeedia.net", "viralnow.info", "shockpost.biz",
                           "rumormill.co",   "clickstorm.net"};
const Words kAuthorFirst = {"alex", "jordan", "morgan", "casey", "riley",
                            "taylor", "jamie", "robin", "avery", "quinn"};
const Words kAuthorLast = {"hale", "moreno", "okafor", "lindqvist", "tanaka",
                           "brennan", "castillo", "novak", "adeyemi", "fischer"};

template <typename T>
const T& pick(const std::vector<T>& items, Rng& rng) {
  return items[uniform_index(rng, items.size())];
}

std::string pick_str(const Words& words, Rng& rng) { return std::string(pick(words, rng)); }

struct Fact {
  std::string entity;
  std::string org;
  std::size_t family = 0;
  bool forward = true;  ///< which side of the family the fact asserts
  std::string object;   ///< modifier topic noun
  int year = 2000;
};

struct Polarity {
  bool positive = true;
};

class Generator {
 public:
  explicit Generator(std::uint64_t seed) : rng_(seed) {}

  Rng& rng() { return rng_; }

  std::string fresh_entity() {
    while (true) {
      std::string name;
      for (int i = 0; i < 3; ++i) name += pick(kSyllables, rng_);
      name += pick(kCodas, rng_);
      if (used_entities_.insert(name).second) return name;
    }
  }

  Fact fresh_fact() {
    Fact f;
    f.entity = fresh_entity();
    f.org = pick_str(kOrgs, rng_);
    f.family = uniform_index(rng_, verb_families().size());
    f.forward = bernoulli(rng_, 0.5);
    f.object = pick_str(kModifiers, rng_) + " " + pick_str(kTopics, rng_) + " " +
               pick_str(kNouns, rng_);
    f.year = 1980 + static_cast<int>(uniform_index(rng_, 40));
    return f;
  }

  std::string verb(const Fact& f, bool agree) {
    const VerbFamily& fam = verb_families()[f.family];
    bool side = agree ? f.forward : !f.forward;
    return pick_str(side ? fam.forward : fam.opposite, rng_);
  }

  /// "the <entity> <org> [adv] <verb> the [adj] <object> in <year>."
  std::string statement(const Fact& f, bool agree, const Polarity* polar) {
    std::string s = "the " + f.entity + " " + f.org + " ";
    if (polar) s += pick_str(polar->positive ? kPositiveAdverbs : kNegativeAdverbs, rng_) + " ";
    s += verb(f, agree) + " the ";
    if (polar) {
      s += pick_str(polar->positive ? kPositiveAdjectives : kNegativeAdjectives, rng_) + " ";
    }
    s += f.object + " in " + std::to_string(f.year) + ".";
    return s;
  }

  std::string subject_sentence(const Fact& f) {
    return f.entity + " " + f.org + " officials " + pick_str(kSubjectTails, rng_) + ".";
  }

  std::string object_sentence(const Fact& f) {
    return "the " + f.object + " " + pick_str(kObjectTails, rng_) + ".";
  }

  std::optional<std::string> author() {
    if (bernoulli(rng_, 0.2)) return std::nullopt;
    return pick_str(kAuthorFirst, rng_) + " " + pick_str(kAuthorLast, rng_);
  }

  Polarity random_polarity() { return {bernoulli(rng_, 0.5)}; }

 private:
  Rng rng_;
  std::set<std::string> used_entities_;
};

std::string pad4(std::size_t i) {
  std::string s = std::to_string(i);
  while (s.size() < 4) s.insert(s.begin(), '0');
  return s;
}

}  // namespace

std::size_t synthetic_true_count(const SyntheticConfig& config) {
  return static_cast<std::size_t>(std::llround(static_cast<double>(config.claims) *
                                               config.true_fraction));
}

SyntheticDataset generate_synthetic(const SyntheticConfig& config, std::uint64_t seed) {
  SyntheticDataset out;
  Generator gen(seed);
  Rng& rng = gen.rng();

  for (auto d : kHighDomains) out.reputation.emplace_back(d, 0.8 + 0.15 * uniform01(rng));
  for (auto d : kLowDomains) out.reputation.emplace_back(d, 0.1 + 0.2 * uniform01(rng));

  // Claims: the first true_count are credible, then the order is shuffled.
  std::size_t n_true = synthetic_true_count(config);
  std::vector<bool> credible(config.claims, false);
  for (std::size_t i = 0; i < n_true && i < credible.size(); ++i) credible[i] = true;
  shuffle(credible, rng);

  for (std::size_t c = 0; c < config.claims; ++c) {
    Fact fact = gen.fresh_fact();
    std::string fact_id = pad4(c);

    for (std::size_t j = 0; j < config.docs_per_fact; ++j) {
      std::vector<std::string> sentences = {gen.statement(fact, true, nullptr),
                                            gen.subject_sentence(fact), gen.object_sentence(fact)};
      shuffle(sentences, rng);
      KbDocument doc;
      doc.doc_id = "kb-" + fact_id + "-" + std::to_string(j);
      doc.title = fact.entity + " " + fact.org + " update";
      doc.text = sentences[0] + " " + sentences[1] + " " + sentences[2];
      doc.source_url = "https://" + pick_str(kHighDomains, rng) + "/news/" + fact_id + "-" +
                       std::to_string(j);
      doc.author = gen.author();
      out.kb.push_back(std::move(doc));
    }

    ClaimArticle claim;
    claim.id = "claim-" + fact_id;
    if (credible[c]) {
      claim.text = gen.statement(fact, true, nullptr);
      claim.label = Verdict::True;
      claim.source_url = "https://" + pick_str(kHighDomains, rng) + "/claims/" + fact_id;
    } else {
      Polarity polar = gen.random_polarity();
      if (bernoulli(rng, config.exaggeration_rate)) {
        claim.text = gen.statement(fact, true, &polar);
      } else {
        bool polarized = bernoulli(rng, config.polarized_contradiction_rate);
        claim.text = gen.statement(fact, false, polarized ? &polar : nullptr);
      }
      claim.label = Verdict::False;
      claim.source_url = "https://" + pick_str(kLowDomains, rng) + "/posts/" + fact_id;
    }
    claim.author = gen.author();
    claim.date = std::to_string(fact.year + 1) + "-0" + std::to_string(1 + uniform_index(rng, 9)) +
                 "-1" + std::to_string(uniform_index(rng, 10));
    out.claims.push_back(std::move(claim));
  }

  // Similarity pairs over fresh facts, so claim entities stay unseen.
  for (std::size_t i = 0; i < config.similarity_pairs; ++i) {
    Fact fact = gen.fresh_fact();
    Polarity polar = gen.random_polarity();
    const Polarity* a_polar = bernoulli(rng, 0.15) ? &polar : nullptr;
    const Polarity* b_polar = bernoulli(rng, 0.3) ? &polar : nullptr;
    std::string a = gen.statement(fact, true, a_polar);
    double kind = uniform01(rng);
    if (kind < 0.5) {
      out.pairs.push_back({a, gen.statement(fact, true, b_polar), 1});
    } else if (kind < 0.85) {
      out.pairs.push_back({a, gen.statement(fact, false, b_polar), -1});
    } else {
      Fact other = gen.fresh_fact();
      out.pairs.push_back({a, gen.statement(other, bernoulli(rng, 0.5), b_polar), -1});
    }
  }

  // Sentiment: polarized statements carry their polarity; neutral statements
  // appear once with each label so the optimum for them is p = 0.5.
  std::size_t n_neutral = config.sentiment_examples / 4;
  for (std::size_t i = 0; i + 2 * n_neutral < config.sentiment_examples; ++i) {
    Fact fact = gen.fresh_fact();
    Polarity polar = gen.random_polarity();
    out.sentiment.push_back(
        {gen.statement(fact, bernoulli(rng, 0.5), &polar), polar.positive ? 1 : -1});
  }
  for (std::size_t i = 0; i < n_neutral; ++i) {
    Fact fact = gen.fresh_fact();
    std::string text = gen.statement(fact, bernoulli(rng, 0.5), nullptr);
    out.sentiment.push_back({text, 1});
    out.sentiment.push_back({text, -1});
  }
  shuffle(out.sentiment, rng);

  // STS-style graded pairs: paraphrases 4-5, contradictions 1-2, unrelated 0-1.
  for (std::size_t i = 0; i < config.sts_pairs; ++i) {
    Fact fact = gen.fresh_fact();
    std::string a = gen.statement(fact, true, nullptr);
    double kind = uniform01(rng);
    StsPair p;
    p.text_a = a;
    if (kind < 0.4) {
      p.text_b = gen.statement(fact, true, nullptr);
      p.score = 4.0 + uniform01(rng);
    } else if (kind < 0.75) {
      p.text_b = gen.statement(fact, false, nullptr);
      p.score = 1.0 + uniform01(rng);
    } else {
      p.text_b = gen.statement(gen.fresh_fact(), true, nullptr);
      p.score = uniform01(rng);
    }
    p.score = std::round(p.score * 100.0) / 100.0;
    out.sts.push_back(std::move(p));
  }
  return out;
}

}  // namespace credo

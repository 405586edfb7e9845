#include <doctest.h>

#include <cmath>

#include "credo/error.hpp"
#include "credo/random.hpp"
#include "credo/trust.hpp"
#include "oracles.hpp"

using namespace credo;

TEST_CASE("initial entries") {
  ReputationProvider provider;
  provider.set("trusted.org", 0.9);
  CHECK(init_entry(EntityKind::Author, "someone", provider).score == 0.5);
  CHECK(init_entry(EntityKind::Author, "someone", provider).count == 0);
  CHECK(init_entry(EntityKind::Website, "trusted.org", provider).score == 0.9);
  CHECK(init_entry(EntityKind::Website, "unknown.net", provider).score == 0.5);
  CHECK(normalize_author(std::nullopt) == "anonymous");
  CHECK(normalize_author(std::string("  ")) == "anonymous");
  CHECK(init_entry(EntityKind::Author, normalize_author(std::nullopt), provider).score == 0.5);
}

TEST_CASE("update worked examples") {
  LedgerEntry e{"x", 0.5, 0};
  auto zero = update(e, TagValue(0.0));
  CHECK(zero.score == 0.5);
  CHECK(zero.count == 1);

  auto one = update(e, TagValue(1.0));
  CHECK(std::abs(one.score - 0.5 * (1.0 + std::log(2.0))) < 1e-12);
  CHECK(one.score == doctest::Approx(0.8466).epsilon(1e-4));

  auto quarter = update(LedgerEntry{"x", 0.8, 3}, TagValue(0.25));
  CHECK(std::abs(quarter.score - 0.8 * (1.0 + std::log(0.75))) < 1e-12);
  CHECK(quarter.score == doctest::Approx(0.5699).epsilon(1e-4));
  CHECK(quarter.count == 4);
}

TEST_CASE("update agrees with the one-line oracle") {
  Rng rng(51);
  for (int trial = 0; trial < 1000; ++trial) {
    double s = uniform01(rng);
    double t = uniform01(rng);
    auto got = update(LedgerEntry{"e", s, 0}, TagValue(t));
    CHECK(std::abs(got.score - oracle::trust_update(s, t)) < 1e-12);
  }
}

TEST_CASE("tag validation") {
  CHECK_THROWS_AS(TagValue(-0.1), ValidationError);
  CHECK_THROWS_AS(TagValue(1.5), ValidationError);
  CHECK_THROWS_AS(TagValue(std::nan("")), ValidationError);
  CHECK(TagValue::from_verdict(Verdict::MostlyFalse, LabelMode::MultiClass).value() == 0.25);
  CHECK(TagValue::from_verdict(Verdict::MostlyTrue, LabelMode::MultiClass).value() == 0.75);
  CHECK(TagValue::from_verdict(Verdict::MostlyTrue, LabelMode::Binary).value() == 1.0);
  CHECK(TagValue::from_verdict(Verdict::MostlyFalse, LabelMode::Binary).value() == 0.0);
}

TEST_CASE("scores stay in [0,1] and move in the documented direction") {
  Rng rng(52);
  for (int seq = 0; seq < 2000; ++seq) {
    LedgerEntry e{"e", uniform01(rng), 0};
    for (int step = 0; step < 20; ++step) {
      double t = bernoulli(rng, 0.3) ? std::vector<double>{0.0, 0.25, 0.75, 1.0}[uniform_index(rng, 4)]
                                     : uniform01(rng);
      auto next = update(e, TagValue(t));
      REQUIRE(next.score >= 0.0);
      REQUIRE(next.score <= 1.0);
      if (t == 1.0) CHECK(next.score >= e.score);
      if (t > 0.0 && t <= 0.5) CHECK(next.score <= e.score);
      CHECK(next.count == e.count + 1);
      e = next;
    }
  }
}

TEST_CASE("verdict parsing") {
  CHECK(parse_verdict("Mostly True") == Verdict::MostlyTrue);
  CHECK(parse_verdict("mostly_false") == Verdict::MostlyFalse);
  CHECK(parse_verdict(" TRUE ") == Verdict::True);
  CHECK_THROWS_AS(parse_verdict("unproven"), ValidationError);
}

TEST_CASE("domain normalization") {
  CHECK(normalize_domain("https://www.Example.com:8080/path?q=1") == "example.com");
  CHECK(normalize_domain("news.site.org") == "news.site.org");
  CHECK(normalize_domain("http://user@host.net/x") == "host.net");
}

TEST_CASE("ledger observes in order and round-trips") {
  auto provider = std::make_shared<ReputationProvider>();
  provider->set("good.org", 0.9);
  TrustLedger ledger(EntityKind::Website, provider);
  ledger.observe("good.org", TagValue(1.0));
  ledger.observe("bad.net", TagValue(0.25));
  ledger.observe("good.org", TagValue(0.0));
  CHECK(ledger.lookup("good.org").count == 2);
  CHECK(ledger.score("good.org") == 1.0);  // clamped on the first update
  CHECK(ledger.score("never.seen") == 0.5);
  CHECK(ledger.size() == 2);

  auto text = ledger.serialize();
  CHECK(TrustLedger::parse(text, EntityKind::Website, provider) == ledger);

  TrustLedger empty(EntityKind::Author);
  CHECK(empty.serialize().empty());
  CHECK(TrustLedger::parse("", EntityKind::Author) == empty);
}

TEST_CASE("large random ledger round-trips exactly") {
  Rng rng(53);
  TrustLedger ledger(EntityKind::Author);
  for (int i = 0; i < 1000; ++i) {
    ledger.insert(LedgerEntry{"author-" + std::to_string(i), uniform01(rng), rng() % 1000});
  }
  CHECK(TrustLedger::parse(ledger.serialize(), EntityKind::Author) == ledger);
}

TEST_CASE("malformed ledger lines report the line number") {
  try {
    TrustLedger::parse("{\"entity_id\":\"a\",\"score\":0.5,\"count\":1}\n{oops\n",
                       EntityKind::Author);
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(e.line() == 2);
  }
  CHECK_THROWS_AS(TrustLedger::parse("{\"entity_id\":\"a\",\"score\":1.5,\"count\":1}\n",
                                     EntityKind::Author),
                  ParseError);
}

TEST_CASE("reputation provider file") {
  auto p = ReputationProvider::parse("{\"domain\":\"WWW.Good.org\",\"score\":0.8}\n");
  CHECK(p.lookup("good.org") == 0.8);
  CHECK_THROWS_AS(ReputationProvider::parse("{\"domain\":\"x\",\"score\":2}\n"), ParseError);
}

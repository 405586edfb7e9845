#include <doctest.h>

#include <algorithm>

#include "credo/dataset.hpp"
#include "credo/error.hpp"

using namespace credo;

namespace {

template <typename F>
std::size_t parse_error_line(F f) {
  try {
    f();
  } catch (const ParseError& e) {
    return e.line();
  }
  return 0;
}

}  // namespace

TEST_CASE("knowledge base round-trip") {
  std::vector<KbDocument> docs = {
      {"d1", "Title", "Body with \"quotes\" and ünïcode", "https://a.org/x", "Ann Lee"},
      {"d2", "", "second", "https://b.org", std::nullopt}};
  auto text = serialize_kb(docs);
  CHECK(parse_kb(text) == docs);
  CHECK(serialize_kb(parse_kb(text)) == text);
  CHECK(parse_kb("").empty());
}

TEST_CASE("claims round-trip") {
  std::vector<ClaimArticle> claims = {
      {"c1", "The sky is green.", Verdict::MostlyFalse, "Bo", "https://n.org/1", "2020-01-02"},
      {"c2", "Water is wet.", std::nullopt, std::nullopt, "https://n.org/2", std::nullopt}};
  auto text = serialize_claims(claims);
  CHECK(parse_claims(text) == claims);

  auto parsed = parse_claims(
      R"({"id":"x","text":"t","label":"Mostly True","author":null,"source_url":"u","date":null})");
  REQUIRE(parsed.size() == 1);
  CHECK(parsed[0].label == Verdict::MostlyTrue);
}

TEST_CASE("pair, sentiment and sts round-trips") {
  std::vector<PairExample> pairs = {{"a b", "b a", 1}, {"x", "y", -1}};
  CHECK(parse_pairs(serialize_pairs(pairs)) == pairs);

  std::vector<SentimentExample> sent = {{"great", 1}, {"awful", -1}};
  CHECK(parse_sentiment(serialize_sentiment(sent)) == sent);

  std::vector<StsPair> sts = {{"one two", "two one", 4.5}, {"p", "q", 0.0}};
  auto back = parse_sts(serialize_sts(sts));
  REQUIRE(back.size() == 2);
  CHECK(back[0].text_a == "one two");
  CHECK(back[0].score == 4.5);
  CHECK(parse_sts("# header\n\nx\ty\t2\n").size() == 1);

  auto bin = binarize_sts(sts, 3.0);
  CHECK(bin[0].label == 1);
  CHECK(bin[1].label == -1);
}

TEST_CASE("malformed lines report their line number") {
  CHECK(parse_error_line([] { parse_kb("{\"doc_id\":\"a\",\"title\":\"\",\"text\":\"t\",\"source_url\":\"u\",\"author\":null}\n{oops\n"); }) == 2);
  CHECK(parse_error_line([] { parse_claims("\n{\"id\":\"c\"}\n"); }) == 2);
  CHECK(parse_error_line([] { parse_pairs("{\"text_a\":\"a\",\"text_b\":\"b\",\"label\":0}\n"); }) == 1);
  CHECK(parse_error_line([] { parse_sentiment("[1,2]\n"); }) == 1);
  CHECK(parse_error_line([] { parse_sts("a\tb\t2\na\tb\n"); }) == 2);
  CHECK(parse_error_line([] { parse_sts("a\tb\t7\n"); }) == 1);
  CHECK(parse_error_line([] {
    parse_claims(R"({"id":"x","text":"t","label":"Pants on Fire","author":null,"source_url":"u","date":null})");
  }) == 1);
}

TEST_CASE("reputation serialization") {
  std::vector<std::pair<std::string, double>> rep = {{"a.org", 0.5}, {"b.com", 1.0}};
  auto text = serialize_reputation(rep);
  CHECK(text.find("\"domain\":\"a.org\"") != std::string::npos);
  CHECK(std::count(text.begin(), text.end(), '\n') == 2);
}

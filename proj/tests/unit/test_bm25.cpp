#include <doctest.h>

#include <cmath>

#include "credo/bm25.hpp"
#include "credo/error.hpp"
#include "fixtures.hpp"
#include "oracles.hpp"

using namespace credo;

namespace {

KbDocument doc(std::string id, std::string text) {
  return KbDocument{std::move(id), "", std::move(text), "https://example.org/" + id, std::nullopt};
}

std::vector<std::string> words(std::string_view text) {
  std::vector<std::string> out;
  for (const auto& t : tokenize(text)) out.push_back(t.surface);
  return out;
}

}  // namespace

TEST_CASE("build_index basics") {
  auto empty = build_index({});
  CHECK(empty.document_count() == 0);

  auto one = build_index({doc("d1", "a b")});
  CHECK(one.document_count() == 1);
  CHECK(one.average_length() == 2.0);
  CHECK(one.vocabulary_size() == 2);
  CHECK(one.postings("a").size() == 1);
  CHECK(one.postings("b").size() == 1);

  std::vector<KbDocument> corpus = {doc("z", "x y"), doc("a", "y y z")};
  auto first = build_index(corpus);
  CHECK(first == build_index(corpus));
  CHECK(first.document(0).doc_id == "a");  // ordinals follow doc_id order

  CHECK_THROWS_AS(build_index({doc("d", "x"), doc("d", "y")}), IngestionError);
  CHECK_THROWS_AS(build_index({doc("d", "")}), ValidationError);
}

TEST_CASE("duplicate id error names the id") {
  try {
    build_index({doc("dup-7", "x"), doc("dup-7", "y")});
    FAIL("expected IngestionError");
  } catch (const IngestionError& e) {
    CHECK(std::string(e.what()).find("dup-7") != std::string::npos);
  }
}

TEST_CASE("bm25_score closed form") {
  // N=3, df=1, tf=1, equal lengths: score = idf = ln(2.5/1.5)
  auto index = build_index({doc("a", "cat dog"), doc("b", "emu fox"), doc("c", "gnu hen")});
  std::vector<std::string> q = {"cat"};
  CHECK(bm25_score(q, "a", index) == doctest::Approx(std::log(2.5 / 1.5)).epsilon(1e-12));
  CHECK(bm25_score(q, "b", index) == 0.0);
  CHECK_THROWS_AS(bm25_score(q, "missing", index), LookupError);

  std::vector<std::string> twice = {"cat", "cat"};
  CHECK(bm25_score(twice, "a", index) == doctest::Approx(2.0 * std::log(2.5 / 1.5)));
}

TEST_CASE("negative idf is floored") {
  // "common" appears in 3 of 4 documents: raw idf ln(1.5/3.5) < 0
  auto index = build_index({doc("a", "common rare1"), doc("b", "common rare2"),
                            doc("c", "common rare3"), doc("d", "other rare4")});
  // every other term has df 1, so the positive mean is ln(3.5/1.5)
  double positive_mean = std::log(3.5 / 1.5);
  CHECK(index.idf("common") == doctest::Approx(0.25 * positive_mean).epsilon(1e-12));
}

TEST_CASE("bm25_score matches the naive formula on random corpora") {
  Rng rng(31);
  for (int trial = 0; trial < 300; ++trial) {
    std::size_t n_docs = 1 + uniform_index(rng, 8);
    std::vector<KbDocument> corpus;
    std::vector<std::vector<std::string>> token_lists;
    for (std::size_t i = 0; i < n_docs; ++i) {
      std::string text = fixtures::random_text(rng, 20);
      corpus.push_back(doc("d" + std::to_string(10 + i), text));
      token_lists.push_back(words(text));
    }
    auto index = build_index(corpus);
    std::vector<std::string> query = words(fixtures::random_text(rng, 6));
    for (std::size_t i = 0; i < n_docs; ++i) {
      double got = bm25_score(query, corpus[i].doc_id, index);
      double want = oracle::bm25(query, token_lists, i);
      CHECK(std::abs(got - want) < 1e-9);
    }
  }
}

TEST_CASE("retrieve ranks by score") {
  auto index = build_index({doc("a", "apple apple pie"), doc("b", "apple tart crust"),
                            doc("c", "banana split cream")});
  std::vector<Keyword> kw = {{"apple", 1.0, 0}};
  auto rs = retrieve(kw, index, 5);
  REQUIRE(rs.n() == 2);
  CHECK(rs.docs[0].doc.doc_id == "a");
  CHECK(rs.docs[0].rank == 1);
  CHECK(rs.docs[1].rank == 2);
  CHECK(rs.docs[0].bm25 > rs.docs[1].bm25);

  std::vector<Keyword> miss = {{"durian", 1.0, 0}};
  CHECK(retrieve(miss, index, 5).n() == 0);
  CHECK_THROWS_AS(retrieve(std::vector<Keyword>{}, index, 5), EmptyQuery);
  CHECK(retrieve(kw, index, 1).n() == 1);
}

TEST_CASE("single matching document") {
  // with two documents a df-1 term has idf ln(1.5/1.5) = 0, so use three
  auto index = build_index({doc("a", "kiwi"), doc("b", "lime"), doc("c", "plum")});
  std::vector<Keyword> kw = {{"kiwi", 1.0, 0}};
  auto rs = retrieve(kw, index, 5);
  REQUIRE(rs.n() == 1);
  CHECK(rs.docs[0].rank == 1);
}

TEST_CASE("result sets are ordered with contiguous ranks") {
  Rng rng(32);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<KbDocument> corpus;
    for (std::size_t i = 0; i < 12; ++i) {
      corpus.push_back(doc("d" + std::to_string(i), fixtures::random_text(rng, 15)));
    }
    auto index = build_index(corpus);
    std::vector<Keyword> kws = {{fixtures::content_words()[uniform_index(rng, 20)], 1.0, 0},
                                {fixtures::content_words()[uniform_index(rng, 20)], 1.0, 1}};
    auto rs = retrieve(kws, index, 5);
    CHECK(rs.n() <= 5);
    for (std::size_t r = 0; r < rs.n(); ++r) {
      CHECK(rs.docs[r].rank == r + 1);
      CHECK(rs.docs[r].bm25 > 0.0);
      if (r > 0) CHECK(rs.docs[r - 1].bm25 >= rs.docs[r].bm25);
    }
  }
}

TEST_CASE("query_terms deduplicates phrase tokens") {
  std::vector<Keyword> kws = {{"black university", 1, 0}, {"lincoln university", 1, 3}};
  CHECK(query_terms(kws) == std::vector<std::string>{"black", "university", "lincoln"});
}

TEST_CASE("titles are indexed") {
  KbDocument d{"t", "Quantum Harbor", "body words", "u", std::nullopt};
  CHECK(index_terms(d) == std::vector<std::string>{"quantum", "harbor", "body", "words"});
}

#include "doctest.h"
#include "support.hpp"
#include "tcr/error.hpp"
#include "tcr/weighting.hpp"

#include <sstream>

using namespace tcr;
using test::Rational;

namespace {

struct T1 {
  LabeledCorpus corpus = test::t1_corpus();
  PreprocessConfig config = test::toy_config();
  Vocabulary vocab = build_vocabulary(corpus, config, 1);
  ClassTermStats stats = build_stats(corpus, vocab, config);
};

constexpr std::size_t X = 0, Y = 1, Z = 2, A = 0, B = 1;

// Exact oracle over the hand counts of T1: cf, corpus df, tf, class sizes.
Rational oracle_tcr(std::size_t term, std::size_t cls) {
  const std::int64_t cf[3][2] = {{2, 1}, {1, 1}, {1, 0}};
  const std::int64_t df[3] = {3, 2, 1};
  const std::int64_t tf[3][2] = {{3, 1}, {1, 3}, {1, 0}};
  const std::int64_t size[2] = {2, 1};
  return Rational(size[cls], 3) * Rational(cf[term][cls], df[term]) *
         Rational(tf[term][cls], tf[term][0] + tf[term][1]);
}

}  // namespace

TEST_CASE("hand oracle agrees with the frozen T1 values") {
  CHECK(oracle_tcr(X, A) == Rational(1, 3));
  CHECK(oracle_tcr(X, B) == Rational(1, 36));
  CHECK(oracle_tcr(Y, A) == Rational(1, 12));
  CHECK(oracle_tcr(Y, B) == Rational(1, 8));
  CHECK(oracle_tcr(Z, A) == Rational(2, 3));
  CHECK(oracle_tcr(Z, B) == Rational(0));
}

TEST_CASE("factor examples on T1") {
  const T1 t;
  CHECK(class_term_weight(t.stats, X, A) == doctest::Approx(2.0 / 3).epsilon(1e-12));
  CHECK(class_term_weight(t.stats, Z, B) == 0.0);
  CHECK(class_term_density(t.stats, X, A) == doctest::Approx(0.75).epsilon(1e-12));
  CHECK(class_term_density(t.stats, Z, A) == 1.0);
  CHECK(class_term_density(t.stats, Y, B) == doctest::Approx(0.75).epsilon(1e-12));
  CHECK(class_weight(t.stats, A) == doctest::Approx(2.0 / 3).epsilon(1e-12));
}

TEST_CASE("class weight identities") {
  std::vector<Document> docs;
  for (int c = 0; c < 4; ++c)
    for (int d = 0; d < 3; ++d) docs.push_back({std::to_string(c) + "_" + std::to_string(d), "c" + std::to_string(c), "w"});
  const auto corpus = LabeledCorpus::from_documents(docs);
  const auto cfg = test::toy_config();
  const auto vocab = build_vocabulary(corpus, cfg, 1);
  const auto s = build_stats(corpus, vocab, cfg);
  for (std::size_t j = 0; j < 4; ++j) CHECK(class_weight(s, j) == 0.25);

  ClassTermStats single({"only", "empty"}, 1);
  single.add_document(0, {"d", {{0, 1}}});
  CHECK(class_weight(single, 0) == 1.0);
  CHECK(class_term_weight(single, 0, 0) == 1.0);  // term seen only in class 0
}

TEST_CASE("term-class relevance examples on T1") {
  const T1 t;
  CHECK(std::abs(term_class_relevance(t.stats, X, A) - 1.0 / 3) <= 1e-12);
  CHECK(term_class_relevance(t.stats, Z, B) == 0.0);
  CHECK(std::abs(term_class_relevance(t.stats, Y, B) - 0.125) <= 1e-12);
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 2; ++j)
      CHECK(std::abs(term_class_relevance(t.stats, i, j) - oracle_tcr(i, j).value()) <= 1e-12);
}

TEST_CASE("Bayes posterior on T1 through its three factors") {
  const T1 t;
  const auto f = bayes_factors(t.stats, X, A);
  CHECK(std::abs(f.likelihood - 3.0 / 5) <= 1e-15);
  CHECK(std::abs(f.prior - 5.0 / 9) <= 1e-15);
  CHECK(std::abs(f.evidence - 4.0 / 9) <= 1e-15);
  CHECK(std::abs(bayes_posterior(t.stats, X, A) - 0.75) <= 1e-12);
  CHECK(std::abs(bayes_posterior(t.stats, X, B) - 0.25) <= 1e-12);
  CHECK(std::abs(bayes_posterior(t.stats, Z, A) - 1.0) <= 1e-12);
  CHECK(bayes_posterior(t.stats, Z, B) == 0.0);
}

TEST_CASE("relevance tables on T1") {
  const T1 t;
  const auto tcr_table = relevance_table(t.stats, t.vocab, Scheme::tcr);
  CHECK(tcr_table.num_terms() == 3);
  CHECK(tcr_table.num_classes() == 2);
  CHECK(std::abs(tcr_table.at(X, A) - 1.0 / 3) <= 1e-12);
  CHECK(std::abs(tcr_table.at(X, B) - 1.0 / 36) <= 1e-12);
  CHECK(tcr_table.argmax_class(X) == A);
  CHECK(tcr_table.argmax_class(Y) == B);
  const auto bayes_table = relevance_table(t.stats, t.vocab, Scheme::bayes);
  CHECK(std::abs(bayes_table.at(X, A) - 0.75) <= 1e-12);
  CHECK(std::abs(bayes_table.at(X, B) - 0.25) <= 1e-12);

  std::ostringstream csv;
  tcr_table.write_csv(csv);
  CHECK(csv.str().rfind("term,A,B\nx,0.3333333333333333,0.027777777777777776\n", 0) == 0);
}

TEST_CASE("a wordless class contributes zero likelihood") {
  ClassTermStats s({"a", "b"}, 1);
  s.add_document(0, {"d1", {{0, 2}}});
  s.add_document(1, {"d2", {}});
  CHECK(bayes_factors(s, 0, 1).likelihood == 0.0);
  CHECK(bayes_posterior(s, 0, 1) == 0.0);
  CHECK(bayes_posterior(s, 0, 0) == 1.0);
}

TEST_CASE("zero denominators signal a stats/vocabulary mismatch") {
  const T1 t;
  const Vocabulary wider({"w", "x", "y", "z"}, 1);
  const auto s = build_stats(t.corpus, wider, t.config);
  CHECK_THROWS_AS(class_term_weight(s, 0, 0), DataError);
  CHECK_THROWS_AS(class_term_density(s, 0, 0), DataError);
  CHECK_THROWS_AS(bayes_posterior(s, 0, 0), DataError);
  CHECK_THROWS_AS(relevance_table(t.stats, wider, Scheme::tcr), DataError);
  CHECK_THROWS_AS(parse_scheme("tfidf"), ConfigError);
}

TEST_CASE("property: normalization, bounds and the Bayes simplification") {
  std::mt19937_64 gen(123);
  const auto cfg = test::toy_config();
  for (int trial = 0; trial < 100; ++trial) {
    const auto corpus = test::random_corpus(gen);
    const auto vocab = build_vocabulary(corpus, cfg, 1);
    const auto s = build_stats(corpus, vocab, cfg);
    double cw = 0.0;
    for (std::size_t j = 0; j < s.k; ++j) cw += class_weight(s, j);
    CHECK(std::abs(cw - 1.0) <= 1e-9);
    for (std::size_t i = 0; i < vocab.size(); ++i) {
      double density = 0.0, weight = 0.0, posterior = 0.0;
      for (std::size_t j = 0; j < s.k; ++j) {
        const double d = class_term_density(s, i, j), w = class_term_weight(s, i, j), c = class_weight(s, j);
        const double r = term_class_relevance(s, i, j), p = bayes_posterior(s, i, j);
        density += d;
        weight += w;
        posterior += p;
        CHECK(r >= 0.0);
        CHECK(r <= std::min({d, w, c}) + 1e-15);
        CHECK(p >= 0.0);
        CHECK(p <= 1.0 + 1e-15);
        // Simplified ratio as an independent route to the posterior.
        const double simple = static_cast<double>(s.term_freq(i, j)) / static_cast<double>(s.term_total(i));
        CHECK(std::abs(p - simple) <= 1e-12);
      }
      CHECK(std::abs(density - 1.0) <= 1e-9);
      CHECK(std::abs(weight - 1.0) <= 1e-9);
      CHECK(std::abs(posterior - 1.0) <= 1e-9);
    }
  }
}

TEST_CASE("property: duplicating every document leaves every score unchanged") {
  std::mt19937_64 gen(321);
  const auto cfg = test::toy_config();
  for (int trial = 0; trial < 50; ++trial) {
    const auto corpus = test::random_corpus(gen);
    std::vector<Document> doubled = corpus.documents();
    for (const auto& d : corpus.documents()) doubled.push_back({d.id + "_dup", d.class_label, d.text});
    const auto twice = LabeledCorpus::from_documents(std::move(doubled));
    const auto vocab = build_vocabulary(corpus, cfg, 1);
    REQUIRE(build_vocabulary(twice, cfg, 1).terms() == vocab.terms());
    const auto s1 = build_stats(corpus, vocab, cfg);
    const auto s2 = build_stats(twice, vocab, cfg);
    for (const auto scheme : {Scheme::tcr, Scheme::bayes}) {
      const auto a = relevance_table(s1, vocab, scheme), b = relevance_table(s2, vocab, scheme);
      for (std::size_t n = 0; n < a.scores().size(); ++n) CHECK(std::abs(a.scores()[n] - b.scores()[n]) <= 1e-12);
    }
  }
}

TEST_CASE("property: a term exclusive to one class scores its class weight there and 0 elsewhere") {
  std::mt19937_64 gen(8);
  const auto cfg = test::toy_config();
  int exclusive_seen = 0;
  for (int trial = 0; trial < 100; ++trial) {
    const auto corpus = test::random_corpus(gen);
    const auto vocab = build_vocabulary(corpus, cfg, 1);
    const auto s = build_stats(corpus, vocab, cfg);
    for (std::size_t i = 0; i < vocab.size(); ++i) {
      std::size_t owner = s.k, classes = 0;
      for (std::size_t j = 0; j < s.k; ++j)
        if (s.term_freq(i, j) > 0) {
          owner = j;
          ++classes;
        }
      if (classes != 1) continue;
      ++exclusive_seen;
      for (std::size_t j = 0; j < s.k; ++j) {
        if (j == owner) {
          CHECK(term_class_relevance(s, i, j) == class_weight(s, j));
        } else {
          CHECK(term_class_relevance(s, i, j) == 0.0);
        }
      }
    }
  }
  CHECK(exclusive_seen > 0);
}

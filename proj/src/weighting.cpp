#include "tcr/weighting.hpp"

#include "tcr/error.hpp"
#include "tcr/text.hpp"

namespace tcr {

std::string to_string(Scheme scheme) { return scheme == Scheme::bayes ? "bayes" : "tcr"; }

Scheme parse_scheme(std::string_view name) {
  if (name == "tcr") return Scheme::tcr;
  if (name == "bayes") return Scheme::bayes;
  throw ConfigError("unknown weighting scheme '" + std::string(name) + "' (expected tcr or bayes)");
}

namespace {

void check_index(const ClassTermStats& stats, std::size_t term, std::size_t cls) {
  if (term >= stats.num_terms()) throw DataError("term index " + std::to_string(term) + " out of range");
  if (cls >= stats.k) throw DataError("class index " + std::to_string(cls) + " out of range");
}

double ratio(std::uint64_t num, std::uint64_t den) {
  return static_cast<double>(num) / static_cast<double>(den);
}

}  // namespace

double class_term_weight(const ClassTermStats& stats, std::size_t term, std::size_t cls) {
  check_index(stats, term, cls);
  const auto cf = stats.corpus_frequency[term];
  if (cf == 0) throw DataError("term " + std::to_string(term) + " has corpus frequency 0 (stats/vocabulary mismatch)");
  return ratio(stats.class_freq(term, cls), cf);
}

double class_term_density(const ClassTermStats& stats, std::size_t term, std::size_t cls) {
  check_index(stats, term, cls);
  const auto total = stats.term_total(term);
  if (total == 0) throw DataError("term " + std::to_string(term) + " never occurs (stats/vocabulary mismatch)");
  return ratio(stats.term_freq(term, cls), total);
}

double class_weight(const ClassTermStats& stats, std::size_t cls) {
  if (cls >= stats.k) throw DataError("class index " + std::to_string(cls) + " out of range");
  if (stats.total_docs == 0) throw DataError("class weight of an empty training set");
  return ratio(stats.class_sizes[cls], stats.total_docs);
}

double term_class_relevance(const ClassTermStats& stats, std::size_t term, std::size_t cls) {
  return class_weight(stats, cls) * class_term_weight(stats, term, cls) * class_term_density(stats, term, cls);
}

BayesFactors bayes_factors(const ClassTermStats& stats, std::size_t term, std::size_t cls) {
  check_index(stats, term, cls);
  if (stats.total_words == 0) throw DataError("Bayes factors of a training set with no words");
  const auto occurrences = stats.term_total(term);
  if (occurrences == 0) throw DataError("term " + std::to_string(term) + " has P(t) = 0 (stats/vocabulary mismatch)");
  const auto class_words = stats.words_per_class[cls];
  return {
      .likelihood = class_words == 0 ? 0.0 : ratio(stats.term_freq(term, cls), class_words),
      .prior = ratio(class_words, stats.total_words),
      .evidence = ratio(occurrences, stats.total_words),
  };
}

double bayes_posterior(const ClassTermStats& stats, std::size_t term, std::size_t cls) {
  const auto f = bayes_factors(stats, term, cls);
  return f.likelihood * f.prior / f.evidence;
}

TermClassMatrix::TermClassMatrix(Scheme scheme, std::vector<std::string> terms,
                                 std::vector<std::string> class_names, std::vector<double> scores)
    : scheme_(scheme), terms_(std::move(terms)), class_names_(std::move(class_names)), scores_(std::move(scores)) {
  if (scores_.size() != terms_.size() * class_names_.size())
    throw DataError("relevance table holds " + std::to_string(scores_.size()) + " scores, expected " +
                    std::to_string(terms_.size() * class_names_.size()));
}

std::size_t TermClassMatrix::argmax_class(std::size_t term) const {
  const auto r = row(term);
  std::size_t best = 0;
  for (std::size_t j = 1; j < r.size(); ++j)
    if (r[j] > r[best]) best = j;
  return best;
}

void TermClassMatrix::write_csv(std::ostream& out) const {
  out << "term";
  for (const auto& c : class_names_) out << ',' << csv_field(c);
  out << '\n';
  for (std::size_t i = 0; i < terms_.size(); ++i) {
    out << csv_field(terms_[i]);
    for (const double v : row(i)) out << ',' << format_double(v);
    out << '\n';
  }
}

TermClassMatrix relevance_table(const ClassTermStats& stats, const Vocabulary& vocab, Scheme scheme) {
  if (vocab.size() != stats.num_terms())
    throw DataError("vocabulary has " + std::to_string(vocab.size()) + " terms but stats cover " +
                    std::to_string(stats.num_terms()));
  const std::size_t k = stats.k;
  std::vector<double> scores(stats.num_terms() * k);
  for (std::size_t i = 0; i < stats.num_terms(); ++i) {
    for (std::size_t j = 0; j < k; ++j) {
      scores[i * k + j] =
          scheme == Scheme::tcr ? term_class_relevance(stats, i, j) : bayes_posterior(stats, i, j);
    }
  }
  return TermClassMatrix(scheme, vocab.terms(), stats.class_names, std::move(scores));
}

}  // namespace tcr

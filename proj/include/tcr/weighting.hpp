#pragma once

#include <cstddef>
#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "tcr/class_stats.hpp"
#include "tcr/preprocess.hpp"

namespace tcr {

enum class Scheme {
  tcr,    ///< class weight x class-term weight x class-term density
  bayes,  ///< posterior P(class | term) from word-count probabilities
};

std::string to_string(Scheme scheme);
Scheme parse_scheme(std::string_view name);

// Each factor below throws DataError when its denominator is zero, which for
// a vocabulary built from the same training set means the stats and the
// vocabulary do not belong together.

/// ClassFrequency(t, C) / CorpusFrequency(t).
double class_term_weight(const ClassTermStats& stats, std::size_t term, std::size_t cls);

/// TermFrequency(t, C) / sum over classes of TermFrequency(t, .).
double class_term_density(const ClassTermStats& stats, std::size_t term, std::size_t cls);

/// Size(C) / N.
double class_weight(const ClassTermStats& stats, std::size_t cls);

/// class_weight * class_term_weight * class_term_density.
double term_class_relevance(const ClassTermStats& stats, std::size_t term, std::size_t cls);

/// The three published factors of the Bayes posterior, kept separate so they
/// can be logged and tested on their own.
struct BayesFactors {
  double likelihood;  ///< P(t | C) = TermFrequency(t, C) / words in C (0 for a wordless class)
  double prior;       ///< P(C)     = words in C / all words
  double evidence;    ///< P(t)     = occurrences of t / all words
};

BayesFactors bayes_factors(const ClassTermStats& stats, std::size_t term, std::size_t cls);

/// likelihood * prior / evidence.
double bayes_posterior(const ClassTermStats& stats, std::size_t term, std::size_t cls);

/// |V| x k relevance scores for one scheme, row-major.
class TermClassMatrix {
 public:
  TermClassMatrix() = default;
  TermClassMatrix(Scheme scheme, std::vector<std::string> terms, std::vector<std::string> class_names,
                  std::vector<double> scores);

  Scheme scheme() const { return scheme_; }
  const std::vector<std::string>& terms() const { return terms_; }
  const std::vector<std::string>& class_names() const { return class_names_; }
  std::size_t num_terms() const { return terms_.size(); }
  std::size_t num_classes() const { return class_names_.size(); }

  double at(std::size_t term, std::size_t cls) const { return scores_[term * num_classes() + cls]; }
  std::span<const double> row(std::size_t term) const {
    return {scores_.data() + term * num_classes(), num_classes()};
  }
  const std::vector<double>& scores() const { return scores_; }

  /// Class with the highest score for `term` (lowest index on ties). This is
  /// an exploration aid, not a classifier.
  std::size_t argmax_class(std::size_t term) const;

  /// Header `term,<class names...>`, one row per term.
  void write_csv(std::ostream& out) const;

 private:
  Scheme scheme_ = Scheme::tcr;
  std::vector<std::string> terms_;
  std::vector<std::string> class_names_;
  std::vector<double> scores_;
};

TermClassMatrix relevance_table(const ClassTermStats& stats, const Vocabulary& vocab, Scheme scheme);

}  // namespace tcr

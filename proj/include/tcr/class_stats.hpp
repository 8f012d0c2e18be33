#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "tcr/corpus.hpp"
#include "tcr/preprocess.hpp"

namespace tcr {

/// Every count the relevance formulas consume. Exact integers throughout.
/// Per-term, per-class tables are dense and row-major: entry (i, j) lives at
/// i * k + j.
struct ClassTermStats {
  std::size_t k = 0;
  std::vector<std::string> class_names;
  std::vector<std::uint64_t> class_sizes;       // documents per class
  std::vector<std::uint64_t> class_frequency;   // docs of class j containing term i
  std::vector<std::uint64_t> corpus_frequency;  // docs containing term i
  std::vector<std::uint64_t> term_frequency;    // occurrences of term i in class j
  std::vector<std::uint64_t> words_per_class;   // in-vocabulary tokens in class j
  std::uint64_t total_words = 0;
  std::uint64_t total_docs = 0;

  ClassTermStats() = default;
  ClassTermStats(std::vector<std::string> class_names, std::size_t num_terms);

  std::size_t num_terms() const { return corpus_frequency.size(); }

  std::uint64_t class_freq(std::size_t term, std::size_t cls) const {
    return class_frequency[term * k + cls];
  }
  std::uint64_t term_freq(std::size_t term, std::size_t cls) const {
    return term_frequency[term * k + cls];
  }
  /// Occurrences of `term` across all classes.
  std::uint64_t term_total(std::size_t term) const;

  /// Accumulates one document of class `cls`.
  void add_document(std::size_t cls, const TermCounts& counts);

  /// Field-wise sum; valid when the two builds cover disjoint documents.
  void merge(const ClassTermStats& other);

  /// Throws DataError if any structural invariant fails: sums across
  /// classes, word totals and, when `require_every_term`, corpus_frequency
  /// >= 1 for every term (true whenever the vocabulary came from the same
  /// documents).
  void check_invariants(bool require_every_term = true) const;

  bool operator==(const ClassTermStats&) const = default;
};

/// One pass over `train`.
ClassTermStats build_stats(const LabeledCorpus& train, const Vocabulary& vocab,
                           const PreprocessConfig& config);

/// One pass over pre-counted documents, `labels[d]` being the class of `docs[d]`.
ClassTermStats build_stats(const std::vector<TermCounts>& docs, const std::vector<std::size_t>& labels,
                           const std::vector<std::string>& class_names, std::size_t num_terms);

}  // namespace tcr

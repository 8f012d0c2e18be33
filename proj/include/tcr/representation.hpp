#pragma once

#include <cstddef>
#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "tcr/corpus.hpp"
#include "tcr/preprocess.hpp"
#include "tcr/weighting.hpp"

namespace tcr {

/// How per-class relevance is averaged over a document's terms.
enum class Averaging {
  distinct_terms,  ///< each distinct in-vocabulary term counts once (default)
  token_weighted,  ///< each occurrence counts; for sensitivity runs
};

std::string to_string(Averaging averaging);
Averaging parse_averaging(std::string_view name);

struct FeatureVector {
  std::string doc_id;
  std::vector<double> values;
};

struct FeatureMatrix {
  std::size_t dim = 0;
  std::vector<FeatureVector> rows;
  /// Class index per row; empty for unlabeled input.
  std::vector<std::size_t> labels;
  /// Rows with no in-vocabulary term (mapped to the zero vector).
  std::size_t degenerate_rows = 0;

  std::size_t size() const { return rows.size(); }
  bool empty() const { return rows.empty(); }

  /// `doc_id,label,<class names...>`; label column empty when unlabeled.
  void write_csv(std::ostream& out, const std::vector<std::string>& class_names) const;
};

/// Mean relevance per class over the document's terms. A document with no
/// in-vocabulary term yields the zero vector.
FeatureVector represent_document(const TermCounts& counts, const TermClassMatrix& table,
                                 Averaging averaging = Averaging::distinct_terms);

/// True when represent_document() would map `counts` to the zero vector
/// because it holds no term.
inline bool is_degenerate(const TermCounts& counts) { return counts.counts.empty(); }

/// One row per document in corpus order, labels attached. `vocab` and
/// `table` must come from training data only.
FeatureMatrix represent_corpus(const LabeledCorpus& corpus, const Vocabulary& vocab,
                               const PreprocessConfig& config, const TermClassMatrix& table,
                               Averaging averaging = Averaging::distinct_terms);

FeatureMatrix represent_counts(const std::vector<TermCounts>& docs, const std::vector<std::size_t>& labels,
                               const TermClassMatrix& table, Averaging averaging = Averaging::distinct_terms);

}  // namespace tcr

#include "tcr/representation.hpp"

#include "tcr/error.hpp"
#include "tcr/text.hpp"

namespace tcr {

std::string to_string(Averaging averaging) {
  return averaging == Averaging::token_weighted ? "token_weighted" : "distinct_terms";
}

Averaging parse_averaging(std::string_view name) {
  if (name == "distinct_terms") return Averaging::distinct_terms;
  if (name == "token_weighted") return Averaging::token_weighted;
  throw ConfigError("unknown averaging '" + std::string(name) + "' (expected distinct_terms or token_weighted)");
}

FeatureVector represent_document(const TermCounts& counts, const TermClassMatrix& table, Averaging averaging) {
  const std::size_t k = table.num_classes();
  FeatureVector f{counts.doc_id, std::vector<double>(k, 0.0)};
  double weight_sum = 0.0;
  for (const auto& [term, count] : counts.counts) {
    if (term >= table.num_terms()) throw DataError("term index " + std::to_string(term) + " outside the relevance table");
    const double w = averaging == Averaging::distinct_terms ? 1.0 : static_cast<double>(count);
    const auto r = table.row(term);
    for (std::size_t j = 0; j < k; ++j) f.values[j] += w * r[j];
    weight_sum += w;
  }
  if (weight_sum > 0.0)
    for (auto& v : f.values) v /= weight_sum;
  return f;
}

FeatureMatrix represent_counts(const std::vector<TermCounts>& docs, const std::vector<std::size_t>& labels,
                               const TermClassMatrix& table, Averaging averaging) {
  if (!labels.empty() && labels.size() != docs.size())
    throw DataError("represent_counts: documents and labels differ in length");
  FeatureMatrix m;
  m.dim = table.num_classes();
  m.labels = labels;
  m.rows.reserve(docs.size());
  for (const auto& counts : docs) {
    if (is_degenerate(counts)) ++m.degenerate_rows;
    m.rows.push_back(represent_document(counts, table, averaging));
  }
  return m;
}

FeatureMatrix represent_corpus(const LabeledCorpus& corpus, const Vocabulary& vocab, const PreprocessConfig& config,
                               const TermClassMatrix& table, Averaging averaging) {
  std::vector<TermCounts> docs;
  docs.reserve(corpus.size());
  for (const auto& doc : corpus.documents()) docs.push_back(count_terms(doc, vocab, config));
  return represent_counts(docs, corpus.labels(), table, averaging);
}

void FeatureMatrix::write_csv(std::ostream& out, const std::vector<std::string>& class_names) const {
  out << "doc_id,label";
  for (const auto& c : class_names) out << ',' << csv_field(c);
  out << '\n';
  for (std::size_t r = 0; r < rows.size(); ++r) {
    out << csv_field(rows[r].doc_id) << ',';
    if (!labels.empty()) out << csv_field(class_names.at(labels[r]));
    for (const double v : rows[r].values) out << ',' << format_double(v);
    out << '\n';
  }
}

}  // namespace tcr

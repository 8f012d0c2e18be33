#include "tcr/class_stats.hpp"

#include "tcr/error.hpp"

namespace tcr {

ClassTermStats::ClassTermStats(std::vector<std::string> names, std::size_t num_terms)
    : k(names.size()),
      class_names(std::move(names)),
      class_sizes(k, 0),
      class_frequency(num_terms * k, 0),
      corpus_frequency(num_terms, 0),
      term_frequency(num_terms * k, 0),
      words_per_class(k, 0) {}

std::uint64_t ClassTermStats::term_total(std::size_t term) const {
  std::uint64_t s = 0;
  for (std::size_t j = 0; j < k; ++j) s += term_frequency[term * k + j];
  return s;
}

void ClassTermStats::add_document(std::size_t cls, const TermCounts& counts) {
  if (cls >= k) throw DataError("class index " + std::to_string(cls) + " out of range");
  ++class_sizes[cls];
  ++total_docs;
  for (const auto& [term, count] : counts.counts) {
    if (term >= num_terms()) throw DataError("term index " + std::to_string(term) + " out of range");
    ++class_frequency[term * k + cls];
    ++corpus_frequency[term];
    term_frequency[term * k + cls] += count;
    words_per_class[cls] += count;
    total_words += count;
  }
}

void ClassTermStats::merge(const ClassTermStats& other) {
  if (other.k != k || other.num_terms() != num_terms() || other.class_names != class_names)
    throw DataError("cannot merge stats over different classes or vocabularies");
  auto add = [](std::vector<std::uint64_t>& a, const std::vector<std::uint64_t>& b) {
    for (std::size_t i = 0; i < a.size(); ++i) a[i] += b[i];
  };
  add(class_sizes, other.class_sizes);
  add(class_frequency, other.class_frequency);
  add(corpus_frequency, other.corpus_frequency);
  add(term_frequency, other.term_frequency);
  add(words_per_class, other.words_per_class);
  total_words += other.total_words;
  total_docs += other.total_docs;
}

void ClassTermStats::check_invariants(bool require_every_term) const {
  const std::size_t n = num_terms();
  if (class_names.size() != k || class_sizes.size() != k || words_per_class.size() != k ||
      class_frequency.size() != n * k || term_frequency.size() != n * k)
    throw DataError("stats tables have inconsistent shapes");
  std::vector<std::uint64_t> column_words(k, 0);
  for (std::size_t i = 0; i < n; ++i) {
    std::uint64_t cf = 0;
    for (std::size_t j = 0; j < k; ++j) {
      cf += class_freq(i, j);
      column_words[j] += term_freq(i, j);
      if (class_freq(i, j) > term_freq(i, j) || class_freq(i, j) > class_sizes[j])
        throw DataError("class frequency exceeds its bounds for term " + std::to_string(i));
    }
    if (cf != corpus_frequency[i])
      throw DataError("class frequencies of term " + std::to_string(i) + " do not sum to its corpus frequency");
    if (require_every_term && corpus_frequency[i] == 0) throw DataError("term " + std::to_string(i) + " never occurs in the training set");
  }
  std::uint64_t words = 0, docs = 0;
  for (std::size_t j = 0; j < k; ++j) {
    if (column_words[j] != words_per_class[j])
      throw DataError("term frequencies of class '" + class_names[j] + "' do not sum to its word count");
    words += words_per_class[j];
    docs += class_sizes[j];
  }
  if (words != total_words) throw DataError("words_per_class does not sum to total_words");
  if (docs != total_docs) throw DataError("class_sizes does not sum to total_docs");
}

ClassTermStats build_stats(const std::vector<TermCounts>& docs, const std::vector<std::size_t>& labels,
                           const std::vector<std::string>& class_names, std::size_t num_terms) {
  if (docs.size() != labels.size()) throw DataError("build_stats: documents and labels differ in length");
  ClassTermStats stats(class_names, num_terms);
  for (std::size_t d = 0; d < docs.size(); ++d) stats.add_document(labels[d], docs[d]);
  return stats;
}

ClassTermStats build_stats(const LabeledCorpus& train, const Vocabulary& vocab, const PreprocessConfig& config) {
  ClassTermStats stats(train.class_names(), vocab.size());
  for (std::size_t d = 0; d < train.size(); ++d)
    stats.add_document(train.label(d), count_terms(train.documents()[d], vocab, config));
  return stats;
}

}  // namespace tcr

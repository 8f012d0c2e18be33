#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace tcr {

struct Document {
  std::string id;
  std::string class_label;
  std::string text;
};

/// An immutable, labeled document collection.
///
/// Documents are kept sorted by (class name, id) so that every downstream
/// computation sees the same order regardless of how the corpus was read.
/// `class_names` fixes the class index space; a subset of a corpus (e.g. a
/// split) keeps the parent's class names even if some class ends up empty.
class LabeledCorpus {
 public:
  LabeledCorpus() = default;

  /// Validates ids and labels and sorts the documents. Throws DataError on an
  /// empty or duplicate id, an empty label, or a label not in `class_names`.
  LabeledCorpus(std::vector<Document> documents, std::vector<std::string> class_names);

  /// Class names are the sorted distinct labels of `documents`.
  static LabeledCorpus from_documents(std::vector<Document> documents);

  const std::vector<Document>& documents() const { return documents_; }
  const std::vector<std::string>& class_names() const { return class_names_; }
  std::size_t size() const { return documents_.size(); }
  bool empty() const { return documents_.empty(); }
  std::size_t num_classes() const { return class_names_.size(); }

  /// Class index of document `doc`.
  std::size_t label(std::size_t doc) const { return labels_[doc]; }
  const std::vector<std::size_t>& labels() const { return labels_; }

  std::optional<std::size_t> class_index(std::string_view name) const;

  /// Documents per class, indexed like class_names().
  std::vector<std::size_t> class_sizes() const;

  /// A corpus with the same class names holding the documents at `indices`.
  LabeledCorpus subset(const std::vector<std::size_t>& indices) const;

  /// FNV-1a over class names and every (class, id, text) triple.
  std::string fingerprint() const;

 private:
  std::vector<Document> documents_;
  std::vector<std::string> class_names_;
  std::vector<std::size_t> labels_;
};

enum class CorpusFormat { newsgroups_dir, jsonl };

std::string to_string(CorpusFormat format);
CorpusFormat parse_corpus_format(std::string_view name);

/// Reads a corpus from disk.
///
/// newsgroups_dir: `<root>/<class>/<file>`; ids are `<class>/<file>`.
/// jsonl: one object per line with string fields "id", "class", "text".
/// Text is decoded leniently (invalid UTF-8 replaced by U+FFFD).
/// Throws DataError for a missing path, fewer than two classes, an empty
/// class directory, a malformed line, or a duplicate id.
LabeledCorpus load_corpus(const std::filesystem::path& path, CorpusFormat format);

struct SplitSpec {
  double train_fraction = 0.5;
  std::uint64_t seed = 0;
};

struct Split {
  LabeledCorpus train;
  LabeledCorpus test;
};

/// Training documents taken from a class of `class_size` documents:
/// round-half-up of fraction * size, clamped to [1, size - 1].
std::size_t stratified_train_count(std::size_t class_size, double train_fraction);

/// Seeded stratified split. Each class is permuted with a Fisher-Yates
/// shuffle over one mt19937_64 stream (classes visited in index order) and
/// the first stratified_train_count() documents go to train. Throws
/// ConfigError for a fraction outside (0, 1) and DataError naming any class
/// with fewer than two documents.
Split stratified_split(const LabeledCorpus& corpus, const SplitSpec& spec);

struct SplitIndices {
  std::vector<std::size_t> train;
  std::vector<std::size_t> test;
};

/// The same split as positions into `corpus`, each list ascending.
SplitIndices stratified_split_indices(const LabeledCorpus& corpus, const SplitSpec& spec);

}  // namespace tcr

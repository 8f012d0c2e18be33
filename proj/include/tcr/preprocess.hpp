#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "tcr/corpus.hpp"

namespace tcr {

/// Tokenizer knobs. Every field is echoed into experiment reports.
struct PreprocessConfig {
  bool lowercase = true;
  std::size_t min_token_len = 2;
  bool drop_all_digit_tokens = true;
  /// When set, each document's text up to the first blank line is dropped.
  bool strip_headers = false;
  std::unordered_set<std::string> stopwords;
  /// Provenance of `stopwords`: "smart", "none", or a file path.
  std::string stopword_source = "none";

  /// The documented defaults, including the built-in SMART stopword list.
  static PreprocessConfig defaults();
};

/// The 571-word SMART English stopword list compiled into the library.
const std::unordered_set<std::string>& smart_stopwords();

/// One word per line, UTF-8; blank lines ignored. Throws DataError.
std::unordered_set<std::string> load_stopword_file(const std::filesystem::path& path);

/// Text with the header block (everything before the first blank line)
/// removed. A text without a blank line is returned unchanged.
std::string_view strip_header_block(std::string_view text);

/// Maximal runs of ASCII letters and digits, filtered per `config`.
/// Bytes outside [A-Za-z0-9] (including all non-ASCII bytes) separate tokens.
std::vector<std::string> tokenize(std::string_view text, const PreprocessConfig& config);

class Vocabulary {
 public:
  Vocabulary() = default;
  /// `terms` must be distinct; they are stored sorted.
  Vocabulary(std::vector<std::string> terms, std::size_t min_df);

  const std::vector<std::string>& terms() const { return terms_; }
  std::size_t size() const { return terms_.size(); }
  bool empty() const { return terms_.empty(); }
  std::size_t min_df() const { return min_df_; }
  const std::string& term(std::size_t i) const { return terms_[i]; }

  /// Position of `term`, or npos.
  std::size_t find(std::string_view term) const;
  static constexpr std::size_t npos = static_cast<std::size_t>(-1);

 private:
  std::vector<std::string> terms_;
  std::unordered_map<std::string, std::size_t> index_;
  std::size_t min_df_ = 1;
};

/// Sparse in-vocabulary counts of one document, sorted by term index.
struct TermCounts {
  std::string doc_id;
  std::vector<std::pair<std::uint32_t, std::uint32_t>> counts;

  std::uint64_t total() const;
};

/// Terms with document frequency >= min_df over `train`, sorted. Throws
/// ConfigError when min_df == 0 or train is empty and DataError when no term
/// survives ("empty vocabulary").
Vocabulary build_vocabulary(const LabeledCorpus& train, const PreprocessConfig& config,
                            std::size_t min_df);

/// Same rule over documents tokenized in advance.
Vocabulary build_vocabulary(const std::vector<std::vector<std::string>>& tokenized_docs,
                            std::size_t min_df);

/// Counts of in-vocabulary tokens; out-of-vocabulary tokens are dropped.
TermCounts count_terms(const Document& doc, const Vocabulary& vocab,
                       const PreprocessConfig& config);

TermCounts count_tokens(std::string doc_id, const std::vector<std::string>& tokens,
                        const Vocabulary& vocab);

/// tokenize() applied to a document, honoring strip_headers.
std::vector<std::string> tokenize_document(const Document& doc, const PreprocessConfig& config);

}  // namespace tcr

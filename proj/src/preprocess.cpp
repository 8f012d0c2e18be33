#include "tcr/preprocess.hpp"

#include <algorithm>
#include <fstream>
#include <map>

#include "tcr/error.hpp"

namespace tcr {

namespace detail {
const std::vector<std::string_view>& smart_stopword_data();
}

const std::unordered_set<std::string>& smart_stopwords() {
  static const std::unordered_set<std::string> words = [] {
    std::unordered_set<std::string> s;
    for (const auto w : detail::smart_stopword_data()) s.emplace(w);
    return s;
  }();
  return words;
}

PreprocessConfig PreprocessConfig::defaults() {
  PreprocessConfig c;
  c.stopwords = smart_stopwords();
  c.stopword_source = "smart";
  return c;
}

std::unordered_set<std::string> load_stopword_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot read stopword file '" + path.string() + "'");
  std::unordered_set<std::string> words;
  std::string line;
  while (std::getline(in, line)) {
    const auto b = line.find_first_not_of(" \t\r");
    if (b == std::string::npos) continue;
    const auto e = line.find_last_not_of(" \t\r");
    words.insert(line.substr(b, e - b + 1));
  }
  return words;
}

std::string_view strip_header_block(std::string_view text) {
  // A blank line is "\n\n", optionally with carriage returns.
  for (std::size_t pos = text.find('\n'); pos != std::string_view::npos; pos = text.find('\n', pos + 1)) {
    std::size_t next = pos + 1;
    if (next < text.size() && text[next] == '\r') ++next;
    if (next < text.size() && text[next] == '\n') return text.substr(next + 1);
    if (next == text.size()) return {};
  }
  return text;
}

namespace {

bool is_ascii_alnum(char c) {
  return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9');
}

}  // namespace

std::vector<std::string> tokenize(std::string_view text, const PreprocessConfig& config) {
  std::vector<std::string> tokens;
  std::size_t i = 0;
  const std::size_t n = text.size();
  while (i < n) {
    while (i < n && !is_ascii_alnum(text[i])) ++i;
    const std::size_t begin = i;
    bool all_digits = true;
    while (i < n && is_ascii_alnum(text[i])) {
      if (text[i] < '0' || text[i] > '9') all_digits = false;
      ++i;
    }
    if (i == begin) break;
    const std::size_t len = i - begin;
    if (len < config.min_token_len) continue;
    if (all_digits && config.drop_all_digit_tokens) continue;
    std::string tok(text.substr(begin, len));
    if (config.lowercase) {
      for (auto& c : tok)
        if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
    }
    if (!config.stopwords.empty() && config.stopwords.contains(tok)) continue;
    tokens.push_back(std::move(tok));
  }
  return tokens;
}

std::vector<std::string> tokenize_document(const Document& doc, const PreprocessConfig& config) {
  const std::string_view text = config.strip_headers ? strip_header_block(doc.text) : std::string_view(doc.text);
  return tokenize(text, config);
}

Vocabulary::Vocabulary(std::vector<std::string> terms, std::size_t min_df)
    : terms_(std::move(terms)), min_df_(min_df) {
  std::sort(terms_.begin(), terms_.end());
  if (std::adjacent_find(terms_.begin(), terms_.end()) != terms_.end())
    throw DataError("vocabulary terms must be distinct");
  index_.reserve(terms_.size());
  for (std::size_t i = 0; i < terms_.size(); ++i) index_.emplace(terms_[i], i);
}

std::size_t Vocabulary::find(std::string_view term) const {
  const auto it = index_.find(std::string(term));
  return it == index_.end() ? npos : it->second;
}

std::uint64_t TermCounts::total() const {
  std::uint64_t s = 0;
  for (const auto& [term, count] : counts) s += count;
  return s;
}

Vocabulary build_vocabulary(const std::vector<std::vector<std::string>>& tokenized_docs, std::size_t min_df) {
  if (min_df == 0) throw ConfigError("min_df must be >= 1");
  if (tokenized_docs.empty()) throw ConfigError("cannot build a vocabulary from an empty training set");
  std::unordered_map<std::string_view, std::size_t> df;
  std::unordered_set<std::string_view> seen;
  for (const auto& tokens : tokenized_docs) {
    seen.clear();
    for (const auto& t : tokens)
      if (seen.insert(t).second) ++df[t];
  }
  std::vector<std::string> terms;
  for (const auto& [term, count] : df)
    if (count >= min_df) terms.emplace_back(term);
  if (terms.empty()) throw DataError("empty vocabulary (no term reaches min_df = " + std::to_string(min_df) + ")");
  return Vocabulary(std::move(terms), min_df);
}

Vocabulary build_vocabulary(const LabeledCorpus& train, const PreprocessConfig& config, std::size_t min_df) {
  std::vector<std::vector<std::string>> tokenized;
  tokenized.reserve(train.size());
  for (const auto& doc : train.documents()) tokenized.push_back(tokenize_document(doc, config));
  return build_vocabulary(tokenized, min_df);
}

TermCounts count_tokens(std::string doc_id, const std::vector<std::string>& tokens, const Vocabulary& vocab) {
  std::map<std::uint32_t, std::uint32_t> counts;
  for (const auto& t : tokens) {
    const auto idx = vocab.find(t);
    if (idx != Vocabulary::npos) ++counts[static_cast<std::uint32_t>(idx)];
  }
  TermCounts out;
  out.doc_id = std::move(doc_id);
  out.counts.assign(counts.begin(), counts.end());
  return out;
}

TermCounts count_terms(const Document& doc, const Vocabulary& vocab, const PreprocessConfig& config) {
  return count_tokens(doc.id, tokenize_document(doc, config), vocab);
}

}  // namespace tcr

#include "tcr/corpus.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <set>
#include <sstream>
#include <unordered_set>

#include "json.hpp"
#include "tcr/error.hpp"
#include "tcr/rng.hpp"
#include "tcr/text.hpp"

namespace tcr {

namespace fs = std::filesystem;

LabeledCorpus::LabeledCorpus(std::vector<Document> documents, std::vector<std::string> class_names)
    : documents_(std::move(documents)), class_names_(std::move(class_names)) {
  {
    std::set<std::string> distinct;
    for (const auto& name : class_names_) {
      if (name.empty()) throw DataError("empty class name");
      if (!distinct.insert(name).second) throw DataError("duplicate class name '" + name + "'");
    }
  }
  std::unordered_set<std::string> ids;
  ids.reserve(documents_.size());
  for (const auto& doc : documents_) {
    if (doc.id.empty()) throw DataError("document with empty id");
    if (doc.class_label.empty()) throw DataError("document '" + doc.id + "' has an empty class label");
    if (!ids.insert(doc.id).second) throw DataError("duplicate document id '" + doc.id + "'");
  }
  std::sort(documents_.begin(), documents_.end(), [](const Document& a, const Document& b) {
    if (a.class_label != b.class_label) return a.class_label < b.class_label;
    return a.id < b.id;
  });
  labels_.reserve(documents_.size());
  for (const auto& doc : documents_) {
    auto idx = class_index(doc.class_label);
    if (!idx) throw DataError("document '" + doc.id + "' has unknown class '" + doc.class_label + "'");
    labels_.push_back(*idx);
  }
}

LabeledCorpus LabeledCorpus::from_documents(std::vector<Document> documents) {
  std::set<std::string> names;
  for (const auto& doc : documents) names.insert(doc.class_label);
  return LabeledCorpus(std::move(documents), std::vector<std::string>(names.begin(), names.end()));
}

std::optional<std::size_t> LabeledCorpus::class_index(std::string_view name) const {
  // class_names_ are not necessarily sorted (callers may pass any order).
  for (std::size_t j = 0; j < class_names_.size(); ++j)
    if (class_names_[j] == name) return j;
  return std::nullopt;
}

std::vector<std::size_t> LabeledCorpus::class_sizes() const {
  std::vector<std::size_t> sizes(class_names_.size(), 0);
  for (const auto label : labels_) ++sizes[label];
  return sizes;
}

LabeledCorpus LabeledCorpus::subset(const std::vector<std::size_t>& indices) const {
  LabeledCorpus out;
  out.class_names_ = class_names_;
  std::vector<std::size_t> sorted = indices;
  std::sort(sorted.begin(), sorted.end());
  out.documents_.reserve(sorted.size());
  out.labels_.reserve(sorted.size());
  for (const auto i : sorted) {
    out.documents_.push_back(documents_.at(i));
    out.labels_.push_back(labels_[i]);
  }
  return out;
}

std::string LabeledCorpus::fingerprint() const {
  Fnv1a64 h;
  h.update_u64(class_names_.size());
  for (const auto& name : class_names_) {
    h.update(name);
    h.update_u64(name.size());
  }
  for (const auto& doc : documents_) {
    for (const std::string_view field : {std::string_view(doc.class_label), std::string_view(doc.id),
                                         std::string_view(doc.text)}) {
      h.update_u64(field.size());
      h.update(field);
    }
  }
  return h.hex();
}

std::string to_string(CorpusFormat format) {
  return format == CorpusFormat::jsonl ? "jsonl" : "newsgroups_dir";
}

CorpusFormat parse_corpus_format(std::string_view name) {
  if (name == "newsgroups_dir") return CorpusFormat::newsgroups_dir;
  if (name == "jsonl") return CorpusFormat::jsonl;
  throw ConfigError("unknown corpus format '" + std::string(name) + "' (expected newsgroups_dir or jsonl)");
}

namespace {

std::string read_file_bytes(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot read '" + path.string() + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

bool is_hidden(const fs::path& p) {
  const auto name = p.filename().string();
  return !name.empty() && name.front() == '.';
}

LabeledCorpus load_newsgroups_dir(const fs::path& root) {
  if (!fs::is_directory(root)) throw DataError("'" + root.string() + "' is not a directory");
  std::vector<fs::path> class_dirs;
  for (const auto& entry : fs::directory_iterator(root)) {
    if (entry.is_directory() && !is_hidden(entry.path())) class_dirs.push_back(entry.path());
  }
  std::sort(class_dirs.begin(), class_dirs.end());
  if (class_dirs.size() < 2)
    throw DataError("'" + root.string() + "': fewer than 2 classes (found " +
                    std::to_string(class_dirs.size()) + ")");

  std::vector<Document> docs;
  std::vector<std::string> class_names;
  for (const auto& dir : class_dirs) {
    const std::string cls = dir.filename().string();
    std::vector<fs::path> files;
    for (const auto& entry : fs::directory_iterator(dir)) {
      if (entry.is_regular_file() && !is_hidden(entry.path())) files.push_back(entry.path());
    }
    if (files.empty()) throw DataError("class directory '" + dir.string() + "' is empty");
    std::sort(files.begin(), files.end());
    for (const auto& file : files) {
      docs.push_back({cls + "/" + file.filename().string(), cls, sanitize_utf8(read_file_bytes(file))});
    }
    class_names.push_back(cls);
  }
  return LabeledCorpus(std::move(docs), std::move(class_names));
}

LabeledCorpus load_jsonl(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot read '" + path.string() + "'");
  std::vector<Document> docs;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    const std::string where = path.string() + ":" + std::to_string(line_no);
    nlohmann::json obj;
    try {
      obj = nlohmann::json::parse(sanitize_utf8(line));
    } catch (const nlohmann::json::exception& e) {
      throw DataError(where + ": invalid JSON: " + e.what());
    }
    if (!obj.is_object()) throw DataError(where + ": expected a JSON object");
    for (const char* key : {"id", "class", "text"}) {
      if (!obj.contains(key) || !obj[key].is_string())
        throw DataError(where + ": missing string field '" + key + "'");
    }
    docs.push_back({obj["id"].get<std::string>(), obj["class"].get<std::string>(), obj["text"].get<std::string>()});
  }
  std::set<std::string> names;
  for (const auto& d : docs) names.insert(d.class_label);
  if (names.size() < 2)
    throw DataError("'" + path.string() + "': fewer than 2 classes (found " + std::to_string(names.size()) + ")");
  return LabeledCorpus::from_documents(std::move(docs));
}

}  // namespace

LabeledCorpus load_corpus(const fs::path& path, CorpusFormat format) {
  if (!fs::exists(path)) throw DataError("corpus path '" + path.string() + "' does not exist");
  try {
    return format == CorpusFormat::jsonl ? load_jsonl(path) : load_newsgroups_dir(path);
  } catch (const fs::filesystem_error& e) {
    throw DataError(e.what());
  }
}

std::size_t stratified_train_count(std::size_t class_size, double train_fraction) {
  if (class_size < 2) return 0;
  // The slack keeps decimal fractions such as 0.7 * 5 on the intended side
  // of the .5 boundary despite binary representation error.
  const double exact = train_fraction * static_cast<double>(class_size);
  auto n = static_cast<std::size_t>(std::floor(exact + 0.5 + 1e-9));
  return std::clamp<std::size_t>(n, 1, class_size - 1);
}

SplitIndices stratified_split_indices(const LabeledCorpus& corpus, const SplitSpec& spec) {
  if (!(spec.train_fraction > 0.0 && spec.train_fraction < 1.0))
    throw ConfigError("train_fraction must lie in (0, 1), got " + format_double(spec.train_fraction));
  std::vector<std::vector<std::size_t>> members(corpus.num_classes());
  for (std::size_t d = 0; d < corpus.size(); ++d) members[corpus.label(d)].push_back(d);
  for (std::size_t j = 0; j < members.size(); ++j) {
    if (members[j].size() < 2)
      throw DataError("class '" + corpus.class_names()[j] + "' has fewer than 2 documents");
  }
  Rng rng(spec.seed);
  std::vector<std::size_t> train, test;
  for (auto& docs : members) {
    portable_shuffle(std::span<std::size_t>(docs), rng);
    const std::size_t n_train = stratified_train_count(docs.size(), spec.train_fraction);
    train.insert(train.end(), docs.begin(), docs.begin() + static_cast<std::ptrdiff_t>(n_train));
    test.insert(test.end(), docs.begin() + static_cast<std::ptrdiff_t>(n_train), docs.end());
  }
  std::sort(train.begin(), train.end());
  std::sort(test.begin(), test.end());
  return {std::move(train), std::move(test)};
}

Split stratified_split(const LabeledCorpus& corpus, const SplitSpec& spec) {
  auto [train, test] = stratified_split_indices(corpus, spec);
  return {corpus.subset(train), corpus.subset(test)};
}

}  // namespace tcr

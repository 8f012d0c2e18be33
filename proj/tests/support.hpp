#pragma once

// Shared fixtures and independent oracles for the test suites. Nothing here
// calls into the code paths it is used to check.

#include <unistd.h>

#include <algorithm>
#include <cmath>
#include <span>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <numeric>
#include <random>
#include <string>
#include <vector>

#include "tcr/corpus.hpp"
#include "tcr/preprocess.hpp"
#include "tcr/svm.hpp"

namespace tcr::test {

/// Class A = {A1: "x x y", A2: "x z"}, class B = {B1: "y y y x"}.
inline LabeledCorpus t1_corpus() {
  return LabeledCorpus::from_documents({
      {"A1", "A", "x x y"},
      {"A2", "A", "x z"},
      {"B1", "B", "y y y x"},
  });
}

/// Single-letter tokens kept, nothing else filtered.
inline PreprocessConfig toy_config() {
  PreprocessConfig c;
  c.min_token_len = 1;
  c.drop_all_digit_tokens = false;
  return c;
}

/// Exact rational, enough for hand-oracle arithmetic on toy fixtures.
struct Rational {
  std::int64_t num = 0;
  std::int64_t den = 1;

  Rational(std::int64_t n = 0, std::int64_t d = 1) : num(n), den(d) { normalize(); }
  void normalize() {
    if (den < 0) {
      num = -num;
      den = -den;
    }
    const auto g = std::gcd(num < 0 ? -num : num, den);
    if (g > 1) {
      num /= g;
      den /= g;
    }
  }
  Rational operator*(const Rational& o) const { return {num * o.num, den * o.den}; }
  Rational operator/(const Rational& o) const { return {num * o.den, den * o.num}; }
  Rational operator+(const Rational& o) const { return {num * o.den + o.num * den, den * o.den}; }
  bool operator==(const Rational& o) const { return num == o.num && den == o.den; }
  double value() const { return static_cast<double>(num) / static_cast<double>(den); }
};

/// Naive whitespace split: toy corpora are lowercase single-space words, so
/// this stands in for the tokenizer without calling it.
inline std::vector<std::string> naive_words(const std::string& text) {
  std::vector<std::string> out;
  std::string cur;
  for (const char c : text) {
    if (c == ' ') {
      if (!cur.empty()) out.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  if (!cur.empty()) out.push_back(cur);
  return out;
}

/// Recount-from-scratch oracles over raw documents.
struct NaiveCounts {
  const LabeledCorpus& corpus;

  std::uint64_t class_frequency(const std::string& term, const std::string& cls) const {
    std::uint64_t n = 0;
    for (const auto& d : corpus.documents()) {
      if (d.class_label != cls) continue;
      const auto words = naive_words(d.text);
      if (std::find(words.begin(), words.end(), term) != words.end()) ++n;
    }
    return n;
  }
  std::uint64_t corpus_frequency(const std::string& term) const {
    std::uint64_t n = 0;
    for (const auto& d : corpus.documents()) {
      const auto words = naive_words(d.text);
      if (std::find(words.begin(), words.end(), term) != words.end()) ++n;
    }
    return n;
  }
  std::uint64_t term_frequency(const std::string& term, const std::string& cls) const {
    std::uint64_t n = 0;
    for (const auto& d : corpus.documents()) {
      if (d.class_label != cls) continue;
      for (const auto& w : naive_words(d.text)) n += w == term ? 1 : 0;
    }
    return n;
  }
  std::uint64_t class_size(const std::string& cls) const {
    std::uint64_t n = 0;
    for (const auto& d : corpus.documents()) n += d.class_label == cls ? 1 : 0;
    return n;
  }
  std::uint64_t words_in_class(const std::string& cls) const {
    std::uint64_t n = 0;
    for (const auto& d : corpus.documents())
      if (d.class_label == cls) n += naive_words(d.text).size();
    return n;
  }
};

/// Random toy corpus: up to `max_docs` documents over up to `max_terms`
/// two-letter words ("ta", "tb", ...) and up to `max_classes` classes, every
/// class holding at least `min_per_class` documents and every document at
/// least one word.
inline LabeledCorpus random_corpus(std::mt19937_64& rng, std::size_t max_docs = 10, std::size_t max_terms = 20,
                                   std::size_t max_classes = 4, std::size_t min_per_class = 1) {
  auto pick = [&](std::size_t lo, std::size_t hi) {
    return lo + static_cast<std::size_t>(rng() % (hi - lo + 1));
  };
  const std::size_t k = pick(2, max_classes);
  const std::size_t n_docs = pick(std::max(k * min_per_class, k), std::max(max_docs, k * min_per_class));
  const std::size_t n_terms = pick(1, max_terms);
  std::vector<Document> docs;
  for (std::size_t d = 0; d < n_docs; ++d) {
    const std::size_t cls = d < k * min_per_class ? d % k : pick(0, k - 1);
    const std::size_t len = pick(1, 12);
    std::string text;
    for (std::size_t w = 0; w < len; ++w) {
      if (!text.empty()) text += ' ';
      const std::size_t t = pick(0, n_terms - 1);
      text += 't';
      text += static_cast<char>('a' + t);
    }
    docs.push_back({"d" + std::to_string(d), "c" + std::to_string(cls), text});
  }
  return LabeledCorpus::from_documents(std::move(docs));
}

/// `per_class` documents in each of `classes` classes; class c draws its
/// words only from its own list ("c<c>w<j>"), so the classes share nothing.
inline LabeledCorpus separable_corpus(std::size_t classes, std::size_t per_class, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<Document> docs;
  for (std::size_t c = 0; c < classes; ++c) {
    for (std::size_t d = 0; d < per_class; ++d) {
      const std::size_t len = 5 + rng() % 6;
      std::string text;
      for (std::size_t w = 0; w < len; ++w) {
        if (!text.empty()) text += ' ';
        text += "c" + std::to_string(c) + "w" + static_cast<char>('a' + rng() % 6);
      }
      docs.push_back({"c" + std::to_string(c) + "_" + std::to_string(d), "class" + std::to_string(c), text});
    }
  }
  return LabeledCorpus::from_documents(std::move(docs));
}

/// Kernel written out independently of kernel_eval().
inline double ref_kernel(const KernelSpec& k, const std::vector<double>& a, const std::vector<double>& b) {
  double d = 0.0, sq = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    d += a[i] * b[i];
    sq += (a[i] - b[i]) * (a[i] - b[i]);
  }
  switch (k.kind) {
    case KernelKind::linear: return d;
    case KernelKind::rbf: return std::exp(-k.gamma * sq);
    case KernelKind::polynomial: return std::pow(d + k.coef0, k.degree);
  }
  return 0.0;
}

/// W(a) = sum a_i - 1/2 sum_ij a_i a_j y_i y_j K(x_i, x_j).
inline double dual_objective(const KernelSpec& k, const std::vector<std::vector<double>>& x,
                             const std::vector<int>& y, std::span<const double> a) {
  double w = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    w += a[i];
    for (std::size_t j = 0; j < x.size(); ++j) w -= 0.5 * a[i] * a[j] * y[i] * y[j] * ref_kernel(k, x[i], x[j]);
  }
  return w;
}

/// f(q) = sum a_i y_i K(x_i, q) + b.
inline double ref_decision(const KernelSpec& k, const std::vector<std::vector<double>>& x, const std::vector<int>& y,
                           const BinarySolution& s, const std::vector<double>& q) {
  double f = s.bias;
  for (std::size_t i = 0; i < x.size(); ++i) f += s.alphas[i] * y[i] * ref_kernel(k, x[i], q);
  return f;
}

/// Box constraints, sum a_i y_i = 0 and the KKT conditions at `tolerance`.
/// Returns an empty string when all hold, else the first violation.
inline std::string kkt_violation(const KernelSpec& k, const std::vector<std::vector<double>>& x,
                                 const std::vector<int>& y, const BinarySolution& s, double C, double tolerance) {
  double balance = 0.0;
  const double slack = tolerance + 1e-9;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double a = s.alphas[i];
    if (a < 0.0 || a > C) return "alpha " + std::to_string(i) + " outside [0, C]";
    balance += a * y[i];
    const double m = y[i] * ref_decision(k, x, y, s, x[i]);
    if (a == 0.0 && m < 1.0 - slack) return "alpha " + std::to_string(i) + " = 0 with margin " + std::to_string(m);
    if (a == C && m > 1.0 + slack) return "alpha " + std::to_string(i) + " = C with margin " + std::to_string(m);
    if (a > 0.0 && a < C && std::abs(m - 1.0) > slack)
      return "free alpha " + std::to_string(i) + " with margin " + std::to_string(m);
  }
  if (std::abs(balance) > 1e-9) return "sum alpha y = " + std::to_string(balance);
  return {};
}

/// A fresh directory under the system temp dir, removed on destruction.
class TempDir {
 public:
  explicit TempDir(const std::string& tag) {
    static std::uint64_t counter = 0;
    path_ = std::filesystem::temp_directory_path() /
            ("tcr_test_" + tag + "_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
    std::filesystem::remove_all(path_);
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;
  const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
};

inline void write_file(const std::filesystem::path& p, const std::string& content) {
  std::filesystem::create_directories(p.parent_path());
  std::ofstream out(p, std::ios::binary);
  out << content;
}

inline std::string read_file(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

}  // namespace tcr::test

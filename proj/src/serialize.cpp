#include "tcr/serialize.hpp"

#include <fstream>
#include <set>

#include "tcr/error.hpp"

namespace tcr {

namespace {

template <typename Fn>
auto guarded(const char* what, Fn&& fn) -> decltype(fn()) {
  try {
    return fn();
  } catch (const Json::exception& e) {
    throw DataError(std::string("malformed ") + what + ": " + e.what());
  }
}

}  // namespace

Json to_json(const PreprocessConfig& config) {
  Json j = {
      {"lowercase", config.lowercase},
      {"min_token_len", config.min_token_len},
      {"drop_all_digit_tokens", config.drop_all_digit_tokens},
      {"strip_headers", config.strip_headers},
      {"stopwords", config.stopword_source},
  };
  if (config.stopword_source != "smart" && config.stopword_source != "none") {
    std::set<std::string> sorted(config.stopwords.begin(), config.stopwords.end());
    j["stopword_list"] = std::vector<std::string>(sorted.begin(), sorted.end());
  }
  return j;
}

PreprocessConfig preprocess_config_from_json(const Json& j) {
  return guarded("preprocess config", [&] {
    PreprocessConfig c = PreprocessConfig::defaults();
    if (!j.is_object()) throw DataError("preprocess config must be an object");
    c.lowercase = j.value("lowercase", c.lowercase);
    c.min_token_len = j.value("min_token_len", c.min_token_len);
    c.drop_all_digit_tokens = j.value("drop_all_digit_tokens", c.drop_all_digit_tokens);
    c.strip_headers = j.value("strip_headers", c.strip_headers);
    if (c.min_token_len < 1) throw ConfigError("min_token_len must be >= 1");
    const std::string source = j.value("stopwords", std::string("smart"));
    c.stopword_source = source;
    if (j.contains("stopword_list")) {
      const auto list = j.at("stopword_list").get<std::vector<std::string>>();
      c.stopwords = {list.begin(), list.end()};
    } else if (source == "smart") {
      c.stopwords = smart_stopwords();
    } else if (source == "none") {
      c.stopwords.clear();
    } else {
      c.stopwords = load_stopword_file(source);
    }
    return c;
  });
}

Json to_json(const ClassTermStats& stats, const Vocabulary& vocab) {
  Json terms = Json::array();
  for (std::size_t i = 0; i < stats.num_terms(); ++i) {
    std::vector<std::uint64_t> cf(stats.k), tf(stats.k);
    for (std::size_t j = 0; j < stats.k; ++j) {
      cf[j] = stats.class_freq(i, j);
      tf[j] = stats.term_freq(i, j);
    }
    terms.push_back({{"term", i < vocab.size() ? vocab.term(i) : std::to_string(i)},
                     {"corpus_frequency", stats.corpus_frequency[i]},
                     {"class_frequency", cf},
                     {"term_frequency", tf}});
  }
  return {{"class_names", stats.class_names}, {"class_sizes", stats.class_sizes},
          {"words_per_class", stats.words_per_class}, {"total_words", stats.total_words},
          {"total_docs", stats.total_docs}, {"terms", terms}};
}

Json to_json(const TermClassMatrix& table) {
  Json rows = Json::array();
  for (std::size_t i = 0; i < table.num_terms(); ++i) {
    const auto r = table.row(i);
    rows.push_back(std::vector<double>(r.begin(), r.end()));
  }
  return {{"scheme", to_string(table.scheme())}, {"class_names", table.class_names()},
          {"terms", table.terms()}, {"scores", rows}};
}

TermClassMatrix term_class_matrix_from_json(const Json& j) {
  return guarded("relevance table", [&] {
    auto classes = j.at("class_names").get<std::vector<std::string>>();
    auto terms = j.at("terms").get<std::vector<std::string>>();
    const auto& rows = j.at("scores");
    if (rows.size() != terms.size()) throw DataError("relevance table: scores and terms differ in length");
    std::vector<double> scores;
    scores.reserve(terms.size() * classes.size());
    for (const auto& row : rows) {
      const auto v = row.get<std::vector<double>>();
      if (v.size() != classes.size()) throw DataError("relevance table: row length differs from class count");
      scores.insert(scores.end(), v.begin(), v.end());
    }
    return TermClassMatrix(parse_scheme(j.at("scheme").get<std::string>()), std::move(terms), std::move(classes),
                           std::move(scores));
  });
}

Json to_json(const KernelSpec& kernel) {
  return {{"kind", to_string(kernel.kind)}, {"gamma", kernel.gamma}, {"degree", kernel.degree},
          {"coef0", kernel.coef0}};
}

KernelSpec kernel_spec_from_json(const Json& j) {
  return guarded("kernel spec", [&] {
    KernelSpec k;
    if (j.is_string()) {
      k.kind = parse_kernel_kind(j.get<std::string>());
      return k;
    }
    k.kind = parse_kernel_kind(j.at("kind").get<std::string>());
    k.gamma = j.value("gamma", k.gamma);
    k.degree = j.value("degree", k.degree);
    k.coef0 = j.value("coef0", k.coef0);
    if (k.gamma < 0.0) throw ConfigError("kernel gamma must be positive");
    if (k.degree < 1) throw ConfigError("polynomial degree must be >= 1");
    return k;
  });
}

Json to_json(const SmoSettings& smo) {
  return {{"C", smo.C}, {"tolerance", smo.tolerance}, {"max_passes", smo.max_passes},
          {"max_iterations", smo.max_iterations}};
}

SmoSettings smo_settings_from_json(const Json& j) {
  return guarded("SMO settings", [&] {
    SmoSettings s;
    s.C = j.value("C", s.C);
    s.tolerance = j.value("tolerance", s.tolerance);
    s.max_passes = j.value("max_passes", s.max_passes);
    s.max_iterations = j.value("max_iterations", s.max_iterations);
    if (!(s.C > 0.0)) throw ConfigError("SVM C must be positive");
    if (!(s.tolerance > 0.0)) throw ConfigError("SVM tolerance must be positive");
    return s;
  });
}

Json to_json(const FeatureMatrix& matrix) {
  Json rows = Json::array();
  for (const auto& r : matrix.rows) rows.push_back({{"id", r.doc_id}, {"values", r.values}});
  return {{"dim", matrix.dim}, {"rows", rows}, {"labels", matrix.labels},
          {"degenerate_rows", matrix.degenerate_rows}};
}

FeatureMatrix feature_matrix_from_json(const Json& j) {
  return guarded("feature matrix", [&] {
    FeatureMatrix m;
    m.dim = j.at("dim").get<std::size_t>();
    for (const auto& r : j.at("rows")) {
      FeatureVector f{r.at("id").get<std::string>(), r.at("values").get<std::vector<double>>()};
      if (f.values.size() != m.dim) throw DataError("feature matrix: row length differs from dim");
      m.rows.push_back(std::move(f));
    }
    m.labels = j.value("labels", std::vector<std::size_t>{});
    m.degenerate_rows = j.value("degenerate_rows", std::size_t{0});
    return m;
  });
}

Json to_json(const KnnModel& model) {
  return {{"type", "knn"}, {"k_neighbors", model.k_neighbors()}, {"train", to_json(model.train())}};
}

KnnModel knn_model_from_json(const Json& j) {
  return guarded("k-NN model", [&] {
    return KnnModel(feature_matrix_from_json(j.at("train")), j.at("k_neighbors").get<std::size_t>());
  });
}

Json to_json(const SvmModel& model) {
  Json machines = Json::array();
  for (const auto& m : model.machines()) {
    machines.push_back({{"positive_class", m.positive_class},
                        {"bias", m.bias},
                        {"support_vectors", m.support_vectors},
                        {"coefficients", m.coefficients},
                        {"sweeps", m.sweeps},
                        {"updates", m.updates},
                        {"converged", m.converged}});
  }
  return {{"type", "svm"},
          {"kernel", to_json(model.kernel())},
          {"smo", to_json(model.smo())},
          {"feature_mean", model.feature_mean()},
          {"feature_scale", model.feature_scale()},
          {"machines", machines}};
}

SvmModel svm_model_from_json(const Json& j) {
  return guarded("SVM model", [&] {
    std::vector<BinaryMachine> machines;
    for (const auto& m : j.at("machines")) {
      BinaryMachine b;
      b.positive_class = m.at("positive_class").get<std::size_t>();
      b.bias = m.at("bias").get<double>();
      b.support_vectors = m.at("support_vectors").get<std::vector<std::vector<double>>>();
      b.coefficients = m.at("coefficients").get<std::vector<double>>();
      b.sweeps = m.value("sweeps", std::size_t{0});
      b.updates = m.value("updates", std::size_t{0});
      b.converged = m.value("converged", false);
      machines.push_back(std::move(b));
    }
    return SvmModel(kernel_spec_from_json(j.at("kernel")), smo_settings_from_json(j.at("smo")),
                    j.at("feature_mean").get<std::vector<double>>(), j.at("feature_scale").get<std::vector<double>>(),
                    std::move(machines));
  });
}

Json to_json(const EvaluationReport& r, const std::vector<std::string>& class_names) {
  auto names = [&](const std::vector<std::size_t>& idx) {
    std::vector<std::string> out;
    for (const auto i : idx) out.push_back(i < class_names.size() ? class_names[i] : std::to_string(i));
    return out;
  };
  return {{"k", r.k},
          {"class_names", class_names},
          {"total", r.total},
          {"accuracy", r.accuracy},
          {"macro", {{"precision", r.macro_precision}, {"recall", r.macro_recall}, {"f_measure", r.macro_f_measure}}},
          {"micro", {{"precision", r.micro_precision}, {"recall", r.micro_recall}, {"f_measure", r.micro_f_measure}}},
          {"per_class", {{"precision", r.precision}, {"recall", r.recall}, {"f_measure", r.f_measure}}},
          {"flags", {{"never_predicted", names(r.never_predicted)}, {"absent_in_truth", names(r.absent_in_truth)}}},
          {"confusion", r.confusion}};
}

EvaluationReport evaluation_report_from_json(const Json& j) {
  return guarded("evaluation report", [&] {
    EvaluationReport r;
    r.k = j.at("k").get<std::size_t>();
    r.total = j.at("total").get<std::uint64_t>();
    r.accuracy = j.at("accuracy").get<double>();
    r.macro_precision = j.at("macro").at("precision").get<double>();
    r.macro_recall = j.at("macro").at("recall").get<double>();
    r.macro_f_measure = j.at("macro").at("f_measure").get<double>();
    r.micro_precision = j.at("micro").at("precision").get<double>();
    r.micro_recall = j.at("micro").at("recall").get<double>();
    r.micro_f_measure = j.at("micro").at("f_measure").get<double>();
    r.precision = j.at("per_class").at("precision").get<std::vector<double>>();
    r.recall = j.at("per_class").at("recall").get<std::vector<double>>();
    r.f_measure = j.at("per_class").at("f_measure").get<std::vector<double>>();
    r.confusion = j.at("confusion").get<std::vector<std::vector<std::uint64_t>>>();
    const auto classes = j.at("class_names").get<std::vector<std::string>>();
    auto indices = [&](const Json& list) {
      std::vector<std::size_t> out;
      for (const auto& name : list.get<std::vector<std::string>>()) {
        for (std::size_t c = 0; c < classes.size(); ++c)
          if (classes[c] == name) out.push_back(c);
      }
      return out;
    };
    r.never_predicted = indices(j.at("flags").at("never_predicted"));
    r.absent_in_truth = indices(j.at("flags").at("absent_in_truth"));
    return r;
  });
}

Json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot read '" + path.string() + "'");
  try {
    return Json::parse(in);
  } catch (const Json::exception& e) {
    throw DataError("'" + path.string() + "' is not valid JSON: " + e.what());
  }
}

void write_json_file(const std::filesystem::path& path, const Json& j) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path);
  if (!out) throw DataError("cannot write '" + path.string() + "'");
  out << j.dump(2) << '\n';
}

}  // namespace tcr

#include "tcr/experiment.hpp"

#include <algorithm>
#include <chrono>
#include <fstream>
#include <map>
#include <set>

#include "tcr/class_stats.hpp"
#include "tcr/error.hpp"
#include "tcr/parallel.hpp"
#include "tcr/text.hpp"

#ifndef TCR_VERSION
#define TCR_VERSION "0.0.0"
#endif

namespace tcr {

namespace fs = std::filesystem;

std::string ClassifierSpec::name() const {
  if (kind == Kind::knn) return "knn-k" + std::to_string(knn_k);
  return "svm-" + to_string(kernel.kind);
}

void ExperimentConfig::validate() const {
  if (schemes.empty()) throw ConfigError("config: schemes must not be empty");
  if (classifiers.empty()) throw ConfigError("config: classifiers must not be empty");
  if (train_fractions.empty()) throw ConfigError("config: train_fractions must not be empty");
  if (seeds.empty()) throw ConfigError("config: seeds must not be empty");
  if (min_df == 0) throw ConfigError("config: min_df must be >= 1");
  if (preprocess.min_token_len == 0) throw ConfigError("config: min_token_len must be >= 1");
  for (const double f : train_fractions)
    if (!(f > 0.0 && f < 1.0)) throw ConfigError("config: train fraction " + format_double(f) + " is outside (0, 1)");
  std::set<std::string> names;
  for (const auto& c : classifiers) {
    if (c.kind == ClassifierSpec::Kind::knn && c.knn_k == 0) throw ConfigError("config: knn k must be >= 1");
    if (!names.insert(c.name()).second) throw ConfigError("config: duplicate classifier '" + c.name() + "'");
  }
  if (!(smo.C > 0.0)) throw ConfigError("config: svm C must be positive");
  if (!(smo.tolerance > 0.0)) throw ConfigError("config: svm tolerance must be positive");
  if (smo.max_passes == 0) throw ConfigError("config: svm max_passes must be >= 1");
}

ExperimentConfig ExperimentConfig::from_json(const Json& j) {
  try {
    if (!j.is_object()) throw ConfigError("config must be a JSON object");
    ExperimentConfig c;
    if (j.contains("corpus")) {
      const auto& corpus = j.at("corpus");
      c.corpus_path = corpus.at("path").get<std::string>();
      c.corpus_format = parse_corpus_format(corpus.value("format", std::string("newsgroups_dir")));
    }
    if (j.contains("preprocess")) c.preprocess = preprocess_config_from_json(j.at("preprocess"));
    c.min_df = j.value("min_df", c.min_df);
    if (j.contains("averaging")) c.averaging = parse_averaging(j.at("averaging").get<std::string>());
    if (j.contains("schemes")) {
      c.schemes.clear();
      for (const auto& s : j.at("schemes")) c.schemes.push_back(parse_scheme(s.get<std::string>()));
    }
    std::vector<std::size_t> knn_k{10};
    if (j.contains("knn_k")) knn_k = j.at("knn_k").get<std::vector<std::size_t>>();
    std::vector<KernelSpec> kernels{KernelSpec{}};
    if (j.contains("svm")) {
      const auto& svm = j.at("svm");
      if (svm.contains("kernels")) {
        kernels.clear();
        for (const auto& k : svm.at("kernels")) kernels.push_back(kernel_spec_from_json(k));
      }
      c.smo = smo_settings_from_json(svm);
      c.standardize = svm.value("standardize", c.standardize);
    }
    std::vector<std::string> kinds{"knn", "svm"};
    if (j.contains("classifiers")) kinds = j.at("classifiers").get<std::vector<std::string>>();
    c.classifiers.clear();
    for (const auto& kind : kinds) {
      if (kind == "knn") {
        for (const auto k : knn_k) c.classifiers.push_back({ClassifierSpec::Kind::knn, k, {}});
      } else if (kind == "svm") {
        for (const auto& k : kernels) c.classifiers.push_back({ClassifierSpec::Kind::svm, 10, k});
      } else {
        throw ConfigError("config: unknown classifier '" + kind + "' (expected knn or svm)");
      }
    }
    if (j.contains("train_fractions")) c.train_fractions = j.at("train_fractions").get<std::vector<double>>();
    if (j.contains("seeds")) c.seeds = j.at("seeds").get<std::vector<std::uint64_t>>();
    if (j.contains("output_dir")) c.output_dir = j.at("output_dir").get<std::string>();
    c.threads = j.value("threads", c.threads);
    c.validate();
    return c;
  } catch (const Json::exception& e) {
    throw ConfigError(std::string("malformed config: ") + e.what());
  } catch (const DataError& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
}

Json ExperimentConfig::to_json() const {
  std::vector<std::string> scheme_names;
  for (const auto s : schemes) scheme_names.push_back(tcr::to_string(s));
  Json classifier_list = Json::array();
  for (const auto& c : classifiers) {
    if (c.kind == ClassifierSpec::Kind::knn) {
      classifier_list.push_back({{"name", c.name()}, {"kind", "knn"}, {"k_neighbors", c.knn_k},
                                 {"distance", "euclidean"}});
    } else {
      classifier_list.push_back({{"name", c.name()}, {"kind", "svm"}, {"kernel", tcr::to_json(c.kernel)}});
    }
  }
  Json svm = tcr::to_json(smo);
  svm["standardize"] = standardize;
  svm["multiclass"] = "one_vs_rest";
  return {{"corpus", {{"path", corpus_path.string()}, {"format", tcr::to_string(corpus_format)}}},
          {"preprocess", tcr::to_json(preprocess)},
          {"min_df", min_df},
          {"averaging", tcr::to_string(averaging)},
          {"schemes", scheme_names},
          {"classifiers", classifier_list},
          {"svm", svm},
          {"train_fractions", train_fractions},
          {"seeds", seeds},
          {"output_dir", output_dir.string()},
          {"threads", threads}};
}

std::size_t RunReport::failed_cells() const {
  return static_cast<std::size_t>(std::count_if(cells.begin(), cells.end(), [](const CellResult& c) { return !c.ok; }));
}

namespace {

using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point start) {
  return std::chrono::duration<double, std::milli>(Clock::now() - start).count();
}

struct SplitData {
  std::vector<TermCounts> train_counts;
  std::vector<std::size_t> train_labels;
  std::vector<TermCounts> test_counts;
  std::vector<std::size_t> test_labels;
  std::size_t vocabulary_size = 0;
  ClassTermStats stats;
  Vocabulary vocabulary;
};

SplitData prepare_split(const LabeledCorpus& corpus, const std::vector<std::vector<std::string>>& tokens,
                        const ExperimentConfig& config, double fraction, std::uint64_t seed,
                        const SweepHooks& hooks) {
  const auto split = stratified_split_indices(corpus, {fraction, seed});
  std::vector<std::vector<std::string>> train_tokens;
  train_tokens.reserve(split.train.size());
  for (const auto d : split.train) train_tokens.push_back(tokens[d]);

  SplitData data;
  data.vocabulary = build_vocabulary(train_tokens, config.min_df);
  data.vocabulary_size = data.vocabulary.size();
  for (const auto d : split.train) {
    data.train_counts.push_back(count_tokens(corpus.documents()[d].id, tokens[d], data.vocabulary));
    data.train_labels.push_back(corpus.label(d));
  }
  for (const auto d : split.test) {
    data.test_counts.push_back(count_tokens(corpus.documents()[d].id, tokens[d], data.vocabulary));
    data.test_labels.push_back(corpus.label(d));
  }
  data.stats = build_stats(data.train_counts, data.train_labels, corpus.class_names(), data.vocabulary.size());
  data.stats.check_invariants();

  if (hooks.on_tables) {
    TableProvenance p;
    p.train_fraction = fraction;
    p.seed = seed;
    for (const auto d : split.train) p.vocabulary_doc_ids.push_back(corpus.documents()[d].id);
    for (const auto& c : data.train_counts) p.stats_doc_ids.push_back(c.doc_id);
    for (const auto d : split.test) p.test_doc_ids.push_back(corpus.documents()[d].id);
    hooks.on_tables(p);
  }
  return data;
}

}  // namespace

RunReport run_sweep(const LabeledCorpus& corpus, const ExperimentConfig& config, const SweepHooks& hooks) {
  config.validate();
  const auto run_start = Clock::now();
  RunReport report;
  report.config = config.to_json();
  report.dataset_fingerprint = corpus.fingerprint();
  report.num_documents = corpus.size();
  report.class_names = corpus.class_names();
  report.versions = {{"tcr", TCR_VERSION},
                     {"compiler", __VERSION__},
                     {"cplusplus", __cplusplus},
                     {"nlohmann_json", std::to_string(NLOHMANN_JSON_VERSION_MAJOR) + "." +
                                           std::to_string(NLOHMANN_JSON_VERSION_MINOR) + "." +
                                           std::to_string(NLOHMANN_JSON_VERSION_PATCH)}};

  std::vector<std::vector<std::string>> tokens(corpus.size());
  parallel_for(corpus.size(), config.threads,
               [&](std::size_t d) { tokens[d] = tokenize_document(corpus.documents()[d], config.preprocess); });
  const std::size_t k = corpus.num_classes();

  for (const double fraction : config.train_fractions) {
    for (const std::uint64_t seed : config.seeds) {
      auto make_cell = [&](Scheme scheme, const ClassifierSpec& spec) {
        CellResult cell;
        cell.scheme = scheme;
        cell.classifier = spec.name();
        cell.train_fraction = fraction;
        cell.seed = seed;
        return cell;
      };
      auto fail_all = [&](const std::vector<Scheme>& schemes, const std::string& message) {
        for (const auto scheme : schemes) {
          for (const auto& spec : config.classifiers) {
            auto cell = make_cell(scheme, spec);
            cell.error = message;
            report.cells.push_back(std::move(cell));
          }
        }
      };

      const auto prep_start = Clock::now();
      SplitData data;
      try {
        data = prepare_split(corpus, tokens, config, fraction, seed, hooks);
      } catch (const std::exception& e) {
        fail_all(config.schemes, e.what());
        continue;
      }
      const double split_ms = ms_since(prep_start);

      for (const auto scheme : config.schemes) {
        const auto rep_start = Clock::now();
        FeatureMatrix train_m, test_m;
        try {
          const auto table = relevance_table(data.stats, data.vocabulary, scheme);
          train_m = represent_counts(data.train_counts, data.train_labels, table, config.averaging);
          test_m = represent_counts(data.test_counts, data.test_labels, table, config.averaging);
        } catch (const std::exception& e) {
          fail_all({scheme}, e.what());
          continue;
        }
        const double prepare_ms = split_ms + ms_since(rep_start);

        for (const auto& spec : config.classifiers) {
          auto cell = make_cell(scheme, spec);
          cell.train_docs = train_m.size();
          cell.test_docs = test_m.size();
          cell.vocabulary_size = data.vocabulary_size;
          cell.degenerate_train = train_m.degenerate_rows;
          cell.degenerate_test = test_m.degenerate_rows;
          cell.timings.prepare_ms = prepare_ms;
          try {
            std::vector<std::size_t> predicted;
            auto t = Clock::now();
            if (spec.kind == ClassifierSpec::Kind::knn) {
              const KnnModel model(train_m, spec.knn_k);
              cell.timings.fit_ms = ms_since(t);
              t = Clock::now();
              predicted = model.predict_all(test_m, config.threads);
            } else {
              SvmParams params;
              params.kernel = spec.kernel;
              params.smo = config.smo;
              params.standardize = config.standardize;
              params.seed = seed;
              params.threads = config.threads;
              const auto model = svm_fit(train_m, k, params);
              cell.timings.fit_ms = ms_since(t);
              t = Clock::now();
              predicted = model.predict_all(test_m, config.threads);
            }
            cell.timings.predict_ms = ms_since(t);
            cell.evaluation = evaluate(test_m.labels, predicted, k);
            cell.ok = true;
          } catch (const std::exception& e) {
            cell.error = e.what();
          }
          report.cells.push_back(std::move(cell));
        }
      }
    }
  }
  report.wall_clock_ms = ms_since(run_start);
  return report;
}

RunReport run_sweep(const ExperimentConfig& config, const SweepHooks& hooks) {
  config.validate();
  const auto corpus = load_corpus(config.corpus_path, config.corpus_format);
  return run_sweep(corpus, config, hooks);
}

Json to_json(const RunReport& report) {
  Json cells = Json::array();
  for (const auto& c : report.cells) {
    Json cell = {{"scheme", to_string(c.scheme)},
                 {"classifier", c.classifier},
                 {"train_fraction", c.train_fraction},
                 {"seed", c.seed},
                 {"status", c.ok ? "ok" : "error"},
                 {"train_docs", c.train_docs},
                 {"test_docs", c.test_docs},
                 {"vocabulary_size", c.vocabulary_size},
                 {"degenerate_documents", {{"train", c.degenerate_train}, {"test", c.degenerate_test}}},
                 {"timings_ms",
                  {{"prepare", c.timings.prepare_ms}, {"fit", c.timings.fit_ms}, {"predict", c.timings.predict_ms}}}};
    if (!c.ok) cell["error"] = c.error;
    if (c.evaluation) cell["evaluation"] = to_json(*c.evaluation, report.class_names);
    cells.push_back(std::move(cell));
  }
  return {{"config", report.config},
          {"dataset", {{"fingerprint", report.dataset_fingerprint},
                       {"documents", report.num_documents},
                       {"class_names", report.class_names}}},
          {"versions", report.versions},
          {"wall_clock_ms", report.wall_clock_ms},
          {"failed_cells", report.failed_cells()},
          {"cells", cells}};
}

RunReport run_report_from_json(const Json& j) {
  try {
    RunReport r;
    r.config = j.at("config");
    r.dataset_fingerprint = j.at("dataset").at("fingerprint").get<std::string>();
    r.num_documents = j.at("dataset").at("documents").get<std::size_t>();
    r.class_names = j.at("dataset").at("class_names").get<std::vector<std::string>>();
    r.versions = j.value("versions", Json::object());
    r.wall_clock_ms = j.value("wall_clock_ms", 0.0);
    for (const auto& c : j.at("cells")) {
      CellResult cell;
      cell.scheme = parse_scheme(c.at("scheme").get<std::string>());
      cell.classifier = c.at("classifier").get<std::string>();
      cell.train_fraction = c.at("train_fraction").get<double>();
      cell.seed = c.at("seed").get<std::uint64_t>();
      cell.ok = c.at("status").get<std::string>() == "ok";
      cell.error = c.value("error", std::string());
      cell.train_docs = c.value("train_docs", std::size_t{0});
      cell.test_docs = c.value("test_docs", std::size_t{0});
      cell.vocabulary_size = c.value("vocabulary_size", std::size_t{0});
      if (c.contains("degenerate_documents")) {
        cell.degenerate_train = c["degenerate_documents"].value("train", std::size_t{0});
        cell.degenerate_test = c["degenerate_documents"].value("test", std::size_t{0});
      }
      if (c.contains("timings_ms")) {
        cell.timings.prepare_ms = c["timings_ms"].value("prepare", 0.0);
        cell.timings.fit_ms = c["timings_ms"].value("fit", 0.0);
        cell.timings.predict_ms = c["timings_ms"].value("predict", 0.0);
      }
      if (c.contains("evaluation")) cell.evaluation = evaluation_report_from_json(c.at("evaluation"));
      r.cells.push_back(std::move(cell));
    }
    return r;
  } catch (const Json::exception& e) {
    throw DataError(std::string("malformed run report: ") + e.what());
  }
}

namespace {

std::ofstream open_csv(const fs::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write '" + path.string() + "'");
  return out;
}

std::string fraction_label(double f) { return format_double(f); }

}  // namespace

void write_metric_csvs(const RunReport& report, const fs::path& dir) {
  fs::create_directories(dir / "confusion");
  // (classifier, scheme) groups in first-appearance order.
  std::vector<std::pair<std::string, Scheme>> groups;
  for (const auto& c : report.cells) {
    const std::pair<std::string, Scheme> key{c.classifier, c.scheme};
    if (std::find(groups.begin(), groups.end(), key) == groups.end()) groups.push_back(key);
  }
  struct Metric {
    const char* name;
    double (*get)(const EvaluationReport&);
  };
  const Metric metrics[] = {
      {"accuracy", [](const EvaluationReport& r) { return r.accuracy; }},
      {"precision", [](const EvaluationReport& r) { return r.macro_precision; }},
      {"recall", [](const EvaluationReport& r) { return r.macro_recall; }},
      {"f_measure", [](const EvaluationReport& r) { return r.macro_f_measure; }},
  };
  for (const auto& [classifier, scheme] : groups) {
    const std::string stem = classifier + "_" + to_string(scheme);
    std::map<double, std::vector<const CellResult*>> by_fraction;
    for (const auto& c : report.cells) {
      if (c.classifier != classifier || c.scheme != scheme) continue;
      auto& bucket = by_fraction[c.train_fraction];
      if (c.ok && c.evaluation) bucket.push_back(&c);
    }
    for (const auto& m : metrics) {
      auto out = open_csv(dir / (stem + "_" + m.name + ".csv"));
      out << "train_fraction,mean,min,max,seeds\n";
      for (const auto& [fraction, cells] : by_fraction) {
        out << fraction_label(fraction) << ',';
        if (cells.empty()) {
          out << ",,,0\n";
          continue;
        }
        double sum = 0.0, lo = 1e300, hi = -1e300;
        for (const auto* c : cells) {
          const double v = m.get(*c->evaluation);
          sum += v;
          lo = std::min(lo, v);
          hi = std::max(hi, v);
        }
        out << format_double(sum / static_cast<double>(cells.size())) << ',' << format_double(lo) << ','
            << format_double(hi) << ',' << cells.size() << '\n';
      }
    }
    {
      auto out = open_csv(dir / (stem + "_per_class_f.csv"));
      out << "class";
      for (const auto& [fraction, cells] : by_fraction) out << ',' << fraction_label(fraction);
      out << '\n';
      for (std::size_t cls = 0; cls < report.class_names.size(); ++cls) {
        out << csv_field(report.class_names[cls]);
        for (const auto& [fraction, cells] : by_fraction) {
          out << ',';
          if (cells.empty()) continue;
          double sum = 0.0;
          for (const auto* c : cells) sum += c->evaluation->f_measure.at(cls);
          out << format_double(sum / static_cast<double>(cells.size()));
        }
        out << '\n';
      }
    }
    for (const auto& [fraction, cells] : by_fraction) {
      for (const auto* c : cells) {
        auto out = open_csv(dir / "confusion" /
                            (stem + "_f" + fraction_label(fraction) + "_s" + std::to_string(c->seed) + ".csv"));
        c->evaluation->write_confusion_csv(out, report.class_names);
      }
    }
  }
}

void write_run_outputs(const RunReport& report, const fs::path& dir) {
  fs::create_directories(dir);
  write_json_file(dir / "report.json", to_json(report));
  write_metric_csvs(report, dir / "csv");
}

int sweep_exit_code(const RunReport& report) {
  const auto failed = report.failed_cells();
  if (failed == 0) return 0;
  return failed == report.cells.size() ? 2 : 3;
}

std::size_t TrainedPipeline::predict(const Document& doc) const {
  const auto counts = count_terms(doc, vocabulary, preprocess);
  const auto f = represent_document(counts, table, averaging);
  return std::visit([&](const auto& model) { return model.predict(f.values); }, classifier);
}

std::vector<std::size_t> TrainedPipeline::predict(const LabeledCorpus& corpus, std::size_t threads) const {
  std::vector<std::size_t> out(corpus.size());
  parallel_for(corpus.size(), threads, [&](std::size_t d) { out[d] = predict(corpus.documents()[d]); });
  return out;
}

TrainedPipeline train_pipeline(const LabeledCorpus& train, const TrainOptions& options) {
  if (train.num_classes() < 2) throw ConfigError("training needs at least 2 classes");
  TrainedPipeline p;
  p.preprocess = options.preprocess;
  p.averaging = options.averaging;
  p.vocabulary = build_vocabulary(train, options.preprocess, options.min_df);
  const auto stats = build_stats(train, p.vocabulary, options.preprocess);
  stats.check_invariants();
  p.table = relevance_table(stats, p.vocabulary, options.scheme);
  auto matrix = represent_corpus(train, p.vocabulary, options.preprocess, p.table, options.averaging);
  if (options.classifier.kind == ClassifierSpec::Kind::knn) {
    p.classifier = KnnModel(std::move(matrix), options.classifier.knn_k);
  } else {
    SvmParams params;
    params.kernel = options.classifier.kernel;
    params.smo = options.smo;
    params.standardize = options.standardize;
    params.seed = options.seed;
    params.threads = options.threads;
    p.classifier = svm_fit(matrix, train.num_classes(), params);
  }
  return p;
}

Json to_json(const TrainedPipeline& pipeline) {
  Json classifier = std::visit([](const auto& model) { return to_json(model); }, pipeline.classifier);
  return {{"format", "tcr-pipeline"},
          {"version", 1},
          {"preprocess", to_json(pipeline.preprocess)},
          {"averaging", to_string(pipeline.averaging)},
          {"min_df", pipeline.vocabulary.min_df()},
          {"table", to_json(pipeline.table)},
          {"classifier", classifier}};
}

TrainedPipeline trained_pipeline_from_json(const Json& j) {
  try {
    if (j.value("format", std::string()) != "tcr-pipeline") throw DataError("not a tcr pipeline model file");
    TrainedPipeline p;
    p.preprocess = preprocess_config_from_json(j.at("preprocess"));
    p.averaging = parse_averaging(j.at("averaging").get<std::string>());
    p.table = term_class_matrix_from_json(j.at("table"));
    p.vocabulary = Vocabulary(p.table.terms(), j.value("min_df", std::size_t{1}));
    const auto& c = j.at("classifier");
    const auto type = c.at("type").get<std::string>();
    if (type == "knn") {
      p.classifier = knn_model_from_json(c);
    } else if (type == "svm") {
      p.classifier = svm_model_from_json(c);
    } else {
      throw DataError("unknown classifier type '" + type + "'");
    }
    return p;
  } catch (const Json::exception& e) {
    throw DataError(std::string("malformed model file: ") + e.what());
  }
}

}  // namespace tcr

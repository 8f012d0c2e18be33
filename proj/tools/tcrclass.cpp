// tcrclass: corpus ingestion, sweeps, single-model training and prediction.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>

#include "CLI11.hpp"
#include "tcr/class_stats.hpp"
#include "tcr/error.hpp"
#include "tcr/experiment.hpp"
#include "tcr/text.hpp"

namespace fs = std::filesystem;

namespace {

constexpr int kConfigError = 1;
constexpr int kDataError = 2;

struct PreprocessFlags {
  std::string stopwords = "smart";
  std::size_t min_token_len = 2;
  bool keep_digits = false;
  bool keep_case = false;
  bool strip_headers = false;

  void add_to(CLI::App& cmd) {
    cmd.add_option("--stopwords", stopwords, "smart, none, or a file with one word per line")
        ->capture_default_str();
    cmd.add_option("--min-token-len", min_token_len, "Shortest token kept")->capture_default_str();
    cmd.add_flag("--keep-digits", keep_digits, "Keep all-digit tokens");
    cmd.add_flag("--keep-case", keep_case, "Do not lowercase");
    cmd.add_flag("--strip-headers", strip_headers, "Drop everything up to the first blank line");
  }

  tcr::PreprocessConfig build() const {
    return tcr::preprocess_config_from_json({{"stopwords", stopwords},
                                             {"min_token_len", min_token_len},
                                             {"drop_all_digit_tokens", !keep_digits},
                                             {"lowercase", !keep_case},
                                             {"strip_headers", strip_headers}});
  }
};

struct CorpusFlags {
  std::string path;
  std::string format = "newsgroups_dir";

  void add_to(CLI::App& cmd, const char* name = "--corpus") {
    cmd.add_option(name, path, "Corpus directory or JSONL file")->required();
    cmd.add_option("--format", format, "newsgroups_dir or jsonl")->capture_default_str();
  }
  tcr::LabeledCorpus load() const { return tcr::load_corpus(path, tcr::parse_corpus_format(format)); }
};

int run_ingest(const CorpusFlags& corpus_flags, const PreprocessFlags& pre, std::size_t min_df,
               const std::string& stats_out) {
  const auto corpus = corpus_flags.load();
  const auto config = pre.build();
  std::cout << "documents " << corpus.size() << "\nclasses " << corpus.num_classes() << '\n';
  const auto sizes = corpus.class_sizes();
  for (std::size_t c = 0; c < corpus.num_classes(); ++c)
    std::cout << "  " << corpus.class_names()[c] << ' ' << sizes[c] << '\n';
  std::size_t empty = 0;
  for (const auto& d : corpus.documents()) empty += tcr::tokenize_document(d, config).empty() ? 1 : 0;
  std::cout << "documents without tokens " << empty << '\n';
  const auto vocab = tcr::build_vocabulary(corpus, config, min_df);
  std::cout << "vocabulary " << vocab.size() << " (min_df " << min_df << ")\n";
  std::cout << "fingerprint " << corpus.fingerprint() << '\n';
  if (!stats_out.empty()) {
    const auto stats = tcr::build_stats(corpus, vocab, config);
    stats.check_invariants();
    tcr::write_json_file(stats_out, tcr::to_json(stats, vocab));
  }
  return 0;
}

int run_sweep_command(const std::string& config_path, const std::string& out_override, long threads) {
  tcr::Json raw;
  try {
    raw = tcr::read_json_file(config_path);
  } catch (const tcr::DataError& e) {
    throw tcr::ConfigError(e.what());
  }
  auto config = tcr::ExperimentConfig::from_json(raw);
  if (!out_override.empty()) config.output_dir = out_override;
  if (threads >= 0) config.threads = static_cast<std::size_t>(threads);
  if (config.corpus_path.empty()) throw tcr::ConfigError("config: corpus.path is required");
  const auto corpus = tcr::load_corpus(config.corpus_path, config.corpus_format);
  const auto report = tcr::run_sweep(corpus, config);
  tcr::write_run_outputs(report, config.output_dir);
  for (const auto& c : report.cells) {
    std::cout << c.classifier << ' ' << tcr::to_string(c.scheme) << " fraction " << tcr::format_double(c.train_fraction)
              << " seed " << c.seed << ": ";
    if (c.ok) {
      std::printf("accuracy %.4f macro-F %.4f\n", c.evaluation->accuracy, c.evaluation->macro_f_measure);
    } else {
      std::cout << "FAILED " << c.error << '\n';
    }
  }
  std::cout << "wrote " << (config.output_dir / "report.json").string() << '\n';
  const int code = tcr::sweep_exit_code(report);
  if (code != 0) std::cerr << report.failed_cells() << " of " << report.cells.size() << " cells failed\n";
  return code;
}

struct TrainFlags {
  CorpusFlags corpus;
  PreprocessFlags pre;
  std::size_t min_df = 2;
  std::string averaging = "distinct_terms";
  std::string scheme = "tcr";
  std::string classifier = "knn";
  std::size_t k = 10;
  std::string kernel = "rbf";
  double gamma = 0.0;
  int degree = 3;
  double coef0 = 1.0;
  double C = 1.0;
  double tolerance = 1e-3;
  bool standardize = false;
  std::uint64_t seed = 0;
  std::size_t threads = 0;
  std::string out;
};

int run_train(const TrainFlags& f) {
  tcr::TrainOptions options;
  options.preprocess = f.pre.build();
  options.min_df = f.min_df;
  options.averaging = tcr::parse_averaging(f.averaging);
  options.scheme = tcr::parse_scheme(f.scheme);
  if (f.classifier == "knn") {
    options.classifier.kind = tcr::ClassifierSpec::Kind::knn;
    options.classifier.knn_k = f.k;
  } else {
    options.classifier.kind = tcr::ClassifierSpec::Kind::svm;
    options.classifier.kernel = {tcr::parse_kernel_kind(f.kernel), f.gamma, f.degree, f.coef0};
  }
  options.smo.C = f.C;
  options.smo.tolerance = f.tolerance;
  options.standardize = f.standardize;
  options.seed = f.seed;
  options.threads = f.threads;
  const auto corpus = f.corpus.load();
  const auto pipeline = tcr::train_pipeline(corpus, options);
  tcr::write_json_file(f.out, tcr::to_json(pipeline));
  std::cout << "trained " << options.classifier.name() << " on " << corpus.size() << " documents, "
            << pipeline.vocabulary.size() << " terms, " << corpus.num_classes() << " classes\nwrote " << f.out
            << '\n';
  return 0;
}

int run_predict(const std::string& model_path, const CorpusFlags& corpus_flags, const std::string& out,
                const std::string& eval_out, std::size_t threads) {
  const auto pipeline = tcr::trained_pipeline_from_json(tcr::read_json_file(model_path));
  const auto corpus = corpus_flags.load();
  const auto predicted = pipeline.predict(corpus, threads);
  const auto& names = pipeline.class_names();

  std::ofstream csv(out, std::ios::binary);
  if (!csv) throw tcr::DataError("cannot write '" + out + "'");
  csv << "doc_id,true_class,predicted_class\n";
  for (std::size_t d = 0; d < corpus.size(); ++d) {
    const auto& doc = corpus.documents()[d];
    csv << tcr::csv_field(doc.id) << ',' << tcr::csv_field(doc.class_label) << ',' << tcr::csv_field(names[predicted[d]])
        << '\n';
  }
  std::cout << "wrote " << corpus.size() << " predictions to " << out << '\n';

  std::map<std::string, std::size_t> index;
  for (std::size_t c = 0; c < names.size(); ++c) index[names[c]] = c;
  std::vector<std::size_t> truth;
  for (const auto& doc : corpus.documents()) {
    const auto it = index.find(doc.class_label);
    if (it == index.end()) {
      std::cerr << "class '" << doc.class_label << "' is unknown to the model; skipping evaluation\n";
      return 0;
    }
    truth.push_back(it->second);
  }
  const auto report = tcr::evaluate(truth, predicted, names.size());
  std::printf("accuracy %.4f macro-P %.4f macro-R %.4f macro-F %.4f\n", report.accuracy, report.macro_precision,
              report.macro_recall, report.macro_f_measure);
  if (!eval_out.empty()) tcr::write_json_file(eval_out, tcr::to_json(report, names));
  return 0;
}

int run_report(const std::string& report_path, const std::string& out) {
  const auto report = tcr::run_report_from_json(tcr::read_json_file(report_path));
  tcr::write_metric_csvs(report, out);
  std::cout << "wrote CSVs for " << report.cells.size() << " cells to " << out << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Term-class relevance text classification experiments"};
  app.set_version_flag("--version", TCR_VERSION);
  app.require_subcommand(1);

  auto* ingest = app.add_subcommand("ingest", "Load and validate a corpus, print a summary");
  CorpusFlags ingest_corpus;
  PreprocessFlags ingest_pre;
  std::size_t ingest_min_df = 2;
  std::string stats_out;
  ingest_corpus.add_to(*ingest);
  ingest_pre.add_to(*ingest);
  ingest->add_option("--min-df", ingest_min_df, "Minimum document frequency")->capture_default_str();
  ingest->add_option("--stats-out", stats_out, "Write per-term class counts as JSON");

  auto* sweep = app.add_subcommand("sweep", "Run every cell of an experiment config");
  std::string config_path, sweep_out;
  long sweep_threads = -1;
  sweep->add_option("--config", config_path, "Experiment config JSON")->required();
  sweep->add_option("--out", sweep_out, "Override output_dir");
  sweep->add_option("--threads", sweep_threads, "Override threads (0 = all cores)");

  auto* train = app.add_subcommand("train", "Fit one pipeline and write a model file");
  TrainFlags tf;
  tf.corpus.add_to(*train);
  tf.pre.add_to(*train);
  train->add_option("--min-df", tf.min_df)->capture_default_str();
  train->add_option("--averaging", tf.averaging, "distinct_terms or token_weighted")->capture_default_str();
  train->add_option("--scheme", tf.scheme, "tcr or bayes")->capture_default_str();
  train->add_option("--classifier", tf.classifier)->check(CLI::IsMember({"knn", "svm"}))->capture_default_str();
  train->add_option("--k", tf.k, "k-NN neighbors")->capture_default_str();
  train->add_option("--kernel", tf.kernel, "linear, rbf or polynomial")->capture_default_str();
  train->add_option("--gamma", tf.gamma, "rbf gamma (0 = 1 / number of classes)")->capture_default_str();
  train->add_option("--degree", tf.degree)->capture_default_str();
  train->add_option("--coef0", tf.coef0)->capture_default_str();
  train->add_option("--C", tf.C, "SVM box constraint")->capture_default_str();
  train->add_option("--tolerance", tf.tolerance, "SMO KKT tolerance")->capture_default_str();
  train->add_flag("--standardize", tf.standardize, "z-score features before the SVM");
  train->add_option("--seed", tf.seed)->capture_default_str();
  train->add_option("--threads", tf.threads)->capture_default_str();
  train->add_option("--out", tf.out, "Model file")->required();

  auto* predict = app.add_subcommand("predict", "Classify a corpus with a model file");
  std::string model_path, predict_out, eval_out;
  CorpusFlags predict_corpus;
  std::size_t predict_threads = 0;
  predict->add_option("--model", model_path)->required();
  predict_corpus.add_to(*predict);
  predict->add_option("--out", predict_out, "Predictions CSV")->required();
  predict->add_option("--eval-out", eval_out, "Write the evaluation as JSON");
  predict->add_option("--threads", predict_threads)->capture_default_str();

  auto* report = app.add_subcommand("report", "Re-render metric CSVs from a report.json");
  std::string report_path, report_out;
  report->add_option("--report", report_path)->required();
  report->add_option("--out", report_out, "CSV directory")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kConfigError;
  }

  try {
    if (*ingest) return run_ingest(ingest_corpus, ingest_pre, ingest_min_df, stats_out);
    if (*sweep) return run_sweep_command(config_path, sweep_out, sweep_threads);
    if (*train) return run_train(tf);
    if (*predict) return run_predict(model_path, predict_corpus, predict_out, eval_out, predict_threads);
    if (*report) return run_report(report_path, report_out);
  } catch (const tcr::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kConfigError;
  } catch (const tcr::DataError& e) {
    std::cerr << "data error: " << e.what() << '\n';
    return kDataError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kDataError;
  }
  return kConfigError;
}

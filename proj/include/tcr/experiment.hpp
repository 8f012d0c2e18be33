#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "tcr/corpus.hpp"
#include "tcr/evaluate.hpp"
#include "tcr/knn.hpp"
#include "tcr/preprocess.hpp"
#include "tcr/representation.hpp"
#include "tcr/serialize.hpp"
#include "tcr/svm.hpp"
#include "tcr/weighting.hpp"

namespace tcr {

/// One classifier setting of a sweep: a k-NN neighbor count or an SVM kernel.
struct ClassifierSpec {
  enum class Kind { knn, svm };
  Kind kind = Kind::knn;
  std::size_t knn_k = 10;
  KernelSpec kernel;

  /// "knn-k10", "svm-rbf", ... Used in cell keys and CSV file names.
  std::string name() const;
};

struct ExperimentConfig {
  std::filesystem::path corpus_path;
  CorpusFormat corpus_format = CorpusFormat::newsgroups_dir;
  PreprocessConfig preprocess = PreprocessConfig::defaults();
  std::size_t min_df = 2;
  Averaging averaging = Averaging::distinct_terms;
  std::vector<Scheme> schemes{Scheme::tcr, Scheme::bayes};
  std::vector<ClassifierSpec> classifiers{{ClassifierSpec::Kind::knn, 10, {}}, {ClassifierSpec::Kind::svm, 10, {}}};
  SmoSettings smo;
  bool standardize = false;
  std::vector<double> train_fractions{0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8};
  std::vector<std::uint64_t> seeds{0};
  std::filesystem::path output_dir = "out";
  std::size_t threads = 0;

  /// Throws ConfigError on an empty list or a fraction outside (0, 1).
  void validate() const;

  /// Keys: corpus {path, format}, preprocess, min_df, averaging, schemes,
  /// classifiers (list of "knn"/"svm"), knn_k (list), svm {kernels, C,
  /// tolerance, max_passes, max_iterations, standardize}, train_fractions,
  /// seeds, output_dir, threads. Missing keys take the defaults above
  /// (classifiers default to knn k=10 and svm rbf). Throws ConfigError.
  static ExperimentConfig from_json(const Json& j);
  Json to_json() const;
};

/// Ids of the documents a set of training-derived tables was built from.
struct TableProvenance {
  double train_fraction = 0.0;
  std::uint64_t seed = 0;
  std::vector<std::string> vocabulary_doc_ids;
  std::vector<std::string> stats_doc_ids;
  std::vector<std::string> test_doc_ids;
};

struct SweepHooks {
  std::function<void(const TableProvenance&)> on_tables;
};

struct CellTimings {
  double prepare_ms = 0.0;  // split, vocabulary, stats, relevance table, representation
  double fit_ms = 0.0;
  double predict_ms = 0.0;
};

struct CellResult {
  Scheme scheme = Scheme::tcr;
  std::string classifier;
  double train_fraction = 0.0;
  std::uint64_t seed = 0;
  bool ok = false;
  std::string error;
  std::optional<EvaluationReport> evaluation;
  std::size_t train_docs = 0;
  std::size_t test_docs = 0;
  std::size_t vocabulary_size = 0;
  std::size_t degenerate_train = 0;
  std::size_t degenerate_test = 0;
  CellTimings timings;
};

struct RunReport {
  Json config;
  std::string dataset_fingerprint;
  std::size_t num_documents = 0;
  std::vector<std::string> class_names;
  Json versions;
  std::vector<CellResult> cells;
  double wall_clock_ms = 0.0;

  std::size_t failed_cells() const;
};

/// Loads the configured corpus and runs every (fraction, seed, scheme,
/// classifier) cell. A failing cell records its error; the others run on.
RunReport run_sweep(const ExperimentConfig& config, const SweepHooks& hooks = {});
RunReport run_sweep(const LabeledCorpus& corpus, const ExperimentConfig& config, const SweepHooks& hooks = {});

Json to_json(const RunReport& report);
RunReport run_report_from_json(const Json& j);

/// `<dir>/<classifier>_<scheme>_<metric>.csv` for accuracy, precision,
/// recall and f_measure (one row per fraction: mean, min, max over seeds),
/// `<classifier>_<scheme>_per_class_f.csv` (one row per class, one column
/// per fraction) and `confusion/<cell>.csv`. Output depends only on the
/// metric values, so reruns are byte-identical.
void write_metric_csvs(const RunReport& report, const std::filesystem::path& dir);

/// report.json plus write_metric_csvs() into `<dir>/csv`.
void write_run_outputs(const RunReport& report, const std::filesystem::path& dir);

/// 0 when every cell succeeded, 3 when some failed, 2 when all failed.
int sweep_exit_code(const RunReport& report);

/// Everything needed to classify raw documents: preprocessing, the
/// training vocabulary and relevance table, and the fitted classifier.
struct TrainedPipeline {
  PreprocessConfig preprocess;
  Averaging averaging = Averaging::distinct_terms;
  Vocabulary vocabulary;
  TermClassMatrix table;
  std::variant<KnnModel, SvmModel> classifier;

  std::size_t predict(const Document& doc) const;
  std::vector<std::size_t> predict(const LabeledCorpus& corpus, std::size_t threads = 0) const;
  const std::vector<std::string>& class_names() const { return table.class_names(); }
};

struct TrainOptions {
  PreprocessConfig preprocess = PreprocessConfig::defaults();
  std::size_t min_df = 2;
  Averaging averaging = Averaging::distinct_terms;
  Scheme scheme = Scheme::tcr;
  ClassifierSpec classifier;
  SmoSettings smo;
  bool standardize = false;
  std::uint64_t seed = 0;
  std::size_t threads = 0;
};

TrainedPipeline train_pipeline(const LabeledCorpus& train, const TrainOptions& options);

Json to_json(const TrainedPipeline& pipeline);
TrainedPipeline trained_pipeline_from_json(const Json& j);

}  // namespace tcr

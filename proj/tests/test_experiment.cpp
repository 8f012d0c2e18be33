#include "doctest.h"
#include "support.hpp"
#include "tcr/error.hpp"
#include "tcr/experiment.hpp"

#include <set>

using namespace tcr;
using tcr::test::read_file;
using tcr::test::separable_corpus;
using tcr::test::TempDir;
namespace fs = std::filesystem;

namespace {

ExperimentConfig small_config() {
  ExperimentConfig c;
  c.preprocess = tcr::test::toy_config();
  c.min_df = 1;
  c.schemes = {Scheme::tcr};
  c.classifiers = {{ClassifierSpec::Kind::knn, 1, {}}};
  c.train_fractions = {0.5};
  c.seeds = {0};
  c.threads = 1;
  return c;
}

std::map<std::string, std::string> read_tree(const fs::path& root) {
  std::map<std::string, std::string> files;
  for (const auto& e : fs::recursive_directory_iterator(root))
    if (e.is_regular_file()) files[fs::relative(e.path(), root).generic_string()] = read_file(e.path());
  return files;
}

}  // namespace

TEST_CASE("a single-combination config yields exactly one cell") {
  const auto corpus = LabeledCorpus::from_documents({
      {"a1", "A", "x x y"},
      {"a2", "A", "x z"},
      {"b1", "B", "y y w"},
      {"b2", "B", "w y"},
  });
  const auto report = run_sweep(corpus, small_config());
  REQUIRE(report.cells.size() == 1);
  const auto& cell = report.cells[0];
  CHECK(cell.ok);
  CHECK(cell.classifier == "knn-k1");
  CHECK(cell.train_docs == 2);
  CHECK(cell.test_docs == 2);
  CHECK(cell.evaluation->total == 2);
  CHECK(sweep_exit_code(report) == 0);
  CHECK(report.num_documents == 4);
  CHECK(report.dataset_fingerprint == corpus.fingerprint());
}

TEST_CASE("default fractions, two schemes and two classifiers give 32 cells") {
  const auto corpus = separable_corpus(3, 40, 1);
  ExperimentConfig config;
  config.min_df = 1;
  config.threads = 1;
  const auto report = run_sweep(corpus, config);
  CHECK(report.cells.size() == 32);
  CHECK(report.failed_cells() == 0);
  std::set<std::tuple<double, std::string, std::string>> keys;
  for (const auto& c : report.cells) {
    keys.insert({c.train_fraction, c.classifier, to_string(c.scheme)});
    CHECK(c.evaluation->accuracy == 1.0);
  }
  CHECK(keys.size() == 32);

  TempDir a("sweep_a"), b("sweep_b"), c("sweep_c");
  write_run_outputs(report, a.path());
  write_run_outputs(run_sweep(corpus, config), b.path());
  const auto first = read_tree(a.path() / "csv");
  CHECK(first == read_tree(b.path() / "csv"));
  CHECK(first.count("knn-k10_tcr_accuracy.csv") == 1);
  CHECK(first.count("svm-rbf_bayes_f_measure.csv") == 1);
  CHECK(first.count("svm-rbf_bayes_per_class_f.csv") == 1);
  CHECK(first.count("confusion/knn-k10_tcr_f0.3_s0.csv") == 1);
  const auto& acc = first.at("knn-k10_tcr_accuracy.csv");
  CHECK(acc.rfind("train_fraction,mean,min,max,seeds\n0.1,1,1,1,1\n0.2,", 0) == 0);
  CHECK(first.at("knn-k10_tcr_per_class_f.csv").rfind("class,0.1,0.2,0.3,0.4,0.5,0.6,0.7,0.8\nclass0,1,", 0) == 0);

  // report.json alone is enough to re-render the same CSVs.
  const auto reloaded = run_report_from_json(read_json_file(a.path() / "report.json"));
  write_metric_csvs(reloaded, c.path());
  CHECK(read_tree(c.path()) == first);
}

TEST_CASE("tables are built from the training split only") {
  const auto corpus = separable_corpus(3, 12, 2);
  auto config = small_config();
  config.preprocess = PreprocessConfig::defaults();
  config.train_fractions = {0.25, 0.5, 0.75};
  config.seeds = {0, 1};
  config.schemes = {Scheme::tcr, Scheme::bayes};
  std::vector<TableProvenance> seen;
  const auto report = run_sweep(corpus, config, {[&](const TableProvenance& p) { seen.push_back(p); }});
  REQUIRE(seen.size() == 6);
  std::size_t cell = 0;
  for (const auto& p : seen) {
    const std::set<std::string> train(p.vocabulary_doc_ids.begin(), p.vocabulary_doc_ids.end());
    CHECK(std::set<std::string>(p.stats_doc_ids.begin(), p.stats_doc_ids.end()) == train);
    for (const auto& id : p.test_doc_ids) CHECK(train.count(id) == 0);
    CHECK(train.size() + p.test_doc_ids.size() == corpus.size());

    // The recorded vocabulary size matches one rebuilt from the training ids alone.
    std::vector<Document> docs;
    for (const auto& d : corpus.documents())
      if (train.count(d.id)) docs.push_back(d);
    const auto vocab = build_vocabulary(LabeledCorpus::from_documents(docs), config.preprocess, config.min_df);
    for (std::size_t s = 0; s < 2; ++s, ++cell) {
      CHECK(report.cells[cell].vocabulary_size == vocab.size());
      CHECK(report.cells[cell].train_docs == train.size());
    }
  }
}

TEST_CASE("failing cells are recorded and the sweep continues") {
  const auto corpus = separable_corpus(2, 10, 3);
  auto config = small_config();
  config.preprocess = PreprocessConfig::defaults();
  config.train_fractions = {0.2, 0.8};
  // 4 training rows at 0.2 and 16 at 0.8: k = 10 only fits the second.
  config.classifiers = {{ClassifierSpec::Kind::knn, 10, {}}};
  const auto partial = run_sweep(corpus, config);
  REQUIRE(partial.cells.size() == 2);
  CHECK_FALSE(partial.cells[0].ok);
  CHECK(partial.cells[0].error.find("k") != std::string::npos);
  CHECK(partial.cells[1].ok);
  CHECK(sweep_exit_code(partial) == 3);
  const auto j = to_json(partial);
  CHECK(j["failed_cells"] == 1);
  CHECK(j["cells"][0]["status"] == "error");

  TempDir dir("partial");
  write_run_outputs(partial, dir.path());
  const auto acc = read_file(dir.path() / "csv" / "knn-k10_tcr_accuracy.csv");
  CHECK(acc == "train_fraction,mean,min,max,seeds\n0.2,,,,0\n0.8,1,1,1,1\n");

  config.classifiers = {{ClassifierSpec::Kind::knn, 100, {}}};
  CHECK(sweep_exit_code(run_sweep(corpus, config)) == 2);

  // A split that cannot be drawn fails every cell of that fraction.
  const auto tiny = LabeledCorpus::from_documents({{"a", "A", "xx yy"}, {"b", "A", "yy"}, {"c", "B", "zz"}});
  config.classifiers = {{ClassifierSpec::Kind::knn, 1, {}}};
  const auto failed = run_sweep(tiny, config);
  CHECK(failed.cells.size() == 2);
  CHECK(failed.failed_cells() == 2);
  CHECK(failed.cells[0].error.find("B") != std::string::npos);
}

TEST_CASE("config parsing") {
  const auto c = ExperimentConfig::from_json(Json::parse(R"({
    "corpus": {"path": "data/ng", "format": "jsonl"},
    "preprocess": {"stopwords": "none", "min_token_len": 3},
    "min_df": 1,
    "schemes": ["bayes"],
    "classifiers": ["knn", "svm"],
    "knn_k": [1, 5],
    "svm": {"kernels": ["linear", {"kind": "polynomial", "degree": 2}], "C": 10, "standardize": true},
    "train_fractions": [0.3, 0.7],
    "seeds": [4, 5],
    "output_dir": "runs/x"
  })"));
  CHECK(c.corpus_format == CorpusFormat::jsonl);
  CHECK(c.preprocess.stopwords.empty());
  CHECK(c.preprocess.min_token_len == 3);
  CHECK(c.schemes == std::vector<Scheme>{Scheme::bayes});
  REQUIRE(c.classifiers.size() == 4);
  CHECK(c.classifiers[1].name() == "knn-k5");
  CHECK(c.classifiers[3].name() == "svm-polynomial");
  CHECK(c.classifiers[3].kernel.degree == 2);
  CHECK(c.smo.C == 10.0);
  CHECK(c.standardize);
  CHECK(c.seeds == std::vector<std::uint64_t>{4, 5});

  const auto d = ExperimentConfig::from_json(Json::object());
  CHECK(d.classifiers.size() == 2);
  CHECK(d.train_fractions.size() == 8);
  CHECK(d.preprocess.stopword_source == "smart");
  // The echoed config parses back to the same cell layout.
  const auto echo = ExperimentConfig::from_json(Json::parse(R"({"train_fractions": [0.5]})")).to_json();
  CHECK(echo["classifiers"][0]["name"] == "knn-k10");

  for (const char* bad : {R"({"train_fractions": [1.0]})", R"({"train_fractions": []})", R"({"schemes": []})",
                          R"({"schemes": ["idf"]})", R"({"classifiers": ["tree"]})", R"({"min_df": "two"})",
                          R"({"svm": {"C": -1}})", R"({"knn_k": [0]})", R"([1, 2])"}) {
    CAPTURE(bad);
    CHECK_THROWS_AS(ExperimentConfig::from_json(Json::parse(bad)), ConfigError);
  }
}

TEST_CASE("trained pipelines classify raw documents and survive a model file round trip") {
  const auto corpus = separable_corpus(3, 20, 4);
  const auto split = stratified_split(corpus, {0.5, 7});
  for (const auto kind : {ClassifierSpec::Kind::knn, ClassifierSpec::Kind::svm}) {
    TrainOptions options;
    options.classifier.kind = kind;
    options.classifier.knn_k = 5;
    options.smo.C = 10.0;
    options.threads = 1;
    const auto pipeline = train_pipeline(split.train, options);
    const auto predicted = pipeline.predict(split.test, 1);
    for (std::size_t d = 0; d < split.test.size(); ++d) CHECK(predicted[d] == split.test.label(d));

    TempDir dir("model");
    write_json_file(dir.path() / "model.json", to_json(pipeline));
    const auto restored = trained_pipeline_from_json(read_json_file(dir.path() / "model.json"));
    CHECK(restored.class_names() == pipeline.class_names());
    CHECK(restored.predict(split.test, 1) == predicted);
    CHECK(restored.predict(Document{"q", "", "c2wa c2wb c2wa"}) == 2);
  }
  CHECK_THROWS_AS(trained_pipeline_from_json(Json::parse(R"({"format": "other"})")), DataError);
}

#pragma once

#include <filesystem>

#include "json.hpp"
#include "tcr/class_stats.hpp"
#include "tcr/evaluate.hpp"
#include "tcr/knn.hpp"
#include "tcr/preprocess.hpp"
#include "tcr/svm.hpp"
#include "tcr/weighting.hpp"

namespace tcr {

using Json = nlohmann::json;

// JSON views of the library types. Readers throw DataError on malformed input.

Json to_json(const PreprocessConfig& config);
/// Accepts "stopwords": "smart" | "none" | <path>, every other field optional.
PreprocessConfig preprocess_config_from_json(const Json& j);

/// Per-term class counts, for inspection.
Json to_json(const ClassTermStats& stats, const Vocabulary& vocab);

Json to_json(const TermClassMatrix& table);
TermClassMatrix term_class_matrix_from_json(const Json& j);

Json to_json(const KernelSpec& kernel);
KernelSpec kernel_spec_from_json(const Json& j);

Json to_json(const SmoSettings& smo);
SmoSettings smo_settings_from_json(const Json& j);

Json to_json(const FeatureMatrix& matrix);
FeatureMatrix feature_matrix_from_json(const Json& j);

Json to_json(const KnnModel& model);
KnnModel knn_model_from_json(const Json& j);

Json to_json(const SvmModel& model);
SvmModel svm_model_from_json(const Json& j);

Json to_json(const EvaluationReport& report, const std::vector<std::string>& class_names);
EvaluationReport evaluation_report_from_json(const Json& j);

Json read_json_file(const std::filesystem::path& path);
/// Pretty-printed with a trailing newline.
void write_json_file(const std::filesystem::path& path, const Json& j);

}  // namespace tcr

#pragma once

#include <cstddef>
#include <cstdint>
#include <ostream>
#include <span>
#include <string>
#include <vector>

namespace tcr {

/// Confusion matrix and the metrics derived from it.
///
/// Precision, recall and F of a class whose denominator is zero are 0; such
/// classes are listed in the corresponding flag vector. Macro figures are
/// unweighted means over all k classes.
struct EvaluationReport {
  std::size_t k = 0;
  std::vector<std::vector<std::uint64_t>> confusion;  // [true][predicted]
  std::uint64_t total = 0;
  double accuracy = 0.0;
  std::vector<double> precision;
  std::vector<double> recall;
  std::vector<double> f_measure;
  double macro_precision = 0.0;
  double macro_recall = 0.0;
  double macro_f_measure = 0.0;
  double micro_precision = 0.0;
  double micro_recall = 0.0;
  double micro_f_measure = 0.0;
  std::vector<std::size_t> never_predicted;  // precision denominator 0
  std::vector<std::size_t> absent_in_truth;  // recall denominator 0

  /// `true\predicted,<class names...>` then one row per true class.
  void write_confusion_csv(std::ostream& out, const std::vector<std::string>& class_names) const;
  /// `class,precision,recall,f_measure`.
  void write_per_class_csv(std::ostream& out, const std::vector<std::string>& class_names) const;
};

/// Throws ConfigError on a length mismatch, empty input, k == 0, or a class
/// index outside [0, k).
EvaluationReport evaluate(std::span<const std::size_t> y_true, std::span<const std::size_t> y_pred,
                          std::size_t k);

}  // namespace tcr

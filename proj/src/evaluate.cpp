#include "tcr/evaluate.hpp"

#include "tcr/error.hpp"
#include "tcr/text.hpp"

namespace tcr {

EvaluationReport evaluate(std::span<const std::size_t> y_true, std::span<const std::size_t> y_pred, std::size_t k) {
  if (y_true.size() != y_pred.size())
    throw ConfigError("evaluate: " + std::to_string(y_true.size()) + " true labels but " +
                      std::to_string(y_pred.size()) + " predictions");
  if (y_true.empty()) throw ConfigError("evaluate: no predictions");
  if (k == 0) throw ConfigError("evaluate: k must be >= 1");

  EvaluationReport r;
  r.k = k;
  r.confusion.assign(k, std::vector<std::uint64_t>(k, 0));
  for (std::size_t d = 0; d < y_true.size(); ++d) {
    if (y_true[d] >= k || y_pred[d] >= k)
      throw ConfigError("evaluate: class index out of range at position " + std::to_string(d));
    ++r.confusion[y_true[d]][y_pred[d]];
  }
  r.total = y_true.size();

  std::vector<std::uint64_t> row_sum(k, 0), col_sum(k, 0);
  std::uint64_t correct = 0;
  for (std::size_t a = 0; a < k; ++a) {
    for (std::size_t b = 0; b < k; ++b) {
      row_sum[a] += r.confusion[a][b];
      col_sum[b] += r.confusion[a][b];
    }
    correct += r.confusion[a][a];
  }
  r.accuracy = static_cast<double>(correct) / static_cast<double>(r.total);

  r.precision.assign(k, 0.0);
  r.recall.assign(k, 0.0);
  r.f_measure.assign(k, 0.0);
  for (std::size_t c = 0; c < k; ++c) {
    const auto tp = static_cast<double>(r.confusion[c][c]);
    if (col_sum[c] == 0) {
      r.never_predicted.push_back(c);
    } else {
      r.precision[c] = tp / static_cast<double>(col_sum[c]);
    }
    if (row_sum[c] == 0) {
      r.absent_in_truth.push_back(c);
    } else {
      r.recall[c] = tp / static_cast<double>(row_sum[c]);
    }
    const double pr = r.precision[c] + r.recall[c];
    r.f_measure[c] = pr > 0.0 ? 2.0 * r.precision[c] * r.recall[c] / pr : 0.0;
    r.macro_precision += r.precision[c];
    r.macro_recall += r.recall[c];
    r.macro_f_measure += r.f_measure[c];
  }
  const double kd = static_cast<double>(k);
  r.macro_precision /= kd;
  r.macro_recall /= kd;
  r.macro_f_measure /= kd;

  // Pooled over classes: every prediction is one TP or one FP, and every
  // true label one TP or one FN, so both denominators equal the total.
  r.micro_precision = static_cast<double>(correct) / static_cast<double>(r.total);
  r.micro_recall = r.micro_precision;
  r.micro_f_measure = r.micro_precision;
  return r;
}

void EvaluationReport::write_confusion_csv(std::ostream& out, const std::vector<std::string>& class_names) const {
  out << "true\\predicted";
  for (std::size_t b = 0; b < k; ++b) out << ',' << csv_field(class_names.at(b));
  out << '\n';
  for (std::size_t a = 0; a < k; ++a) {
    out << csv_field(class_names.at(a));
    for (std::size_t b = 0; b < k; ++b) out << ',' << confusion[a][b];
    out << '\n';
  }
}

void EvaluationReport::write_per_class_csv(std::ostream& out, const std::vector<std::string>& class_names) const {
  out << "class,precision,recall,f_measure\n";
  for (std::size_t c = 0; c < k; ++c) {
    out << csv_field(class_names.at(c)) << ',' << format_double(precision[c]) << ',' << format_double(recall[c]) << ','
        << format_double(f_measure[c]) << '\n';
  }
}

}  // namespace tcr

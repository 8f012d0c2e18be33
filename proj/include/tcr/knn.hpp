#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "tcr/representation.hpp"

namespace tcr {

/// Brute-force k-nearest-neighbor classifier, Euclidean distance.
///
/// The k nearest rows are taken by (distance, training-row index), so equal
/// distances favor earlier rows. The majority class among them wins; when
/// several classes tie on votes, the tied class of the nearest neighbor wins.
class KnnModel {
 public:
  KnnModel() = default;
  /// Throws ConfigError if `train` is empty or unlabeled, or if
  /// k_neighbors is 0 or exceeds the number of training rows.
  KnnModel(FeatureMatrix train, std::size_t k_neighbors = 10);

  std::size_t predict(std::span<const double> query) const;
  std::size_t predict(const FeatureVector& query) const { return predict(query.values); }

  /// Predictions for every row of `queries`; `threads` = 0 uses all cores.
  std::vector<std::size_t> predict_all(const FeatureMatrix& queries, std::size_t threads = 0) const;

  const FeatureMatrix& train() const { return train_; }
  std::size_t k_neighbors() const { return k_; }
  std::size_t num_classes() const { return num_classes_; }

 private:
  FeatureMatrix train_;
  std::size_t k_ = 10;
  std::size_t num_classes_ = 0;
};

}  // namespace tcr

#include "tcr/knn.hpp"

#include <algorithm>

#include "tcr/error.hpp"
#include "tcr/parallel.hpp"

namespace tcr {

KnnModel::KnnModel(FeatureMatrix train, std::size_t k_neighbors) : train_(std::move(train)), k_(k_neighbors) {
  if (train_.empty()) throw ConfigError("k-NN needs a non-empty training matrix");
  if (train_.labels.size() != train_.rows.size()) throw ConfigError("k-NN training matrix must be labeled");
  if (k_ == 0) throw ConfigError("k_neighbors must be >= 1");
  if (k_ > train_.rows.size())
    throw ConfigError("k_neighbors = " + std::to_string(k_) + " exceeds the " + std::to_string(train_.rows.size()) +
                      " training rows");
  for (const auto& row : train_.rows)
    if (row.values.size() != train_.dim) throw ConfigError("k-NN training rows differ in length");
  num_classes_ = *std::max_element(train_.labels.begin(), train_.labels.end()) + 1;
}

std::size_t KnnModel::predict(std::span<const double> query) const {
  if (query.size() != train_.dim)
    throw ConfigError("query has " + std::to_string(query.size()) + " features, model expects " +
                      std::to_string(train_.dim));
  // Squared distance orders rows exactly like Euclidean distance.
  std::vector<std::pair<double, std::size_t>> dist(train_.rows.size());
  for (std::size_t r = 0; r < train_.rows.size(); ++r) {
    const auto& x = train_.rows[r].values;
    double d = 0.0;
    for (std::size_t f = 0; f < query.size(); ++f) {
      const double diff = x[f] - query[f];
      d += diff * diff;
    }
    dist[r] = {d, r};
  }
  const auto kth = dist.begin() + static_cast<std::ptrdiff_t>(k_);
  std::partial_sort(dist.begin(), kth, dist.end());

  std::vector<std::size_t> votes(num_classes_, 0);
  for (auto it = dist.begin(); it != kth; ++it) ++votes[train_.labels[it->second]];
  const std::size_t top = *std::max_element(votes.begin(), votes.end());
  // Neighbors are in nearness order, so the first with a top-voted class
  // settles vote ties.
  for (auto it = dist.begin(); it != kth; ++it) {
    const std::size_t cls = train_.labels[it->second];
    if (votes[cls] == top) return cls;
  }
  return train_.labels[dist.front().second];
}

std::vector<std::size_t> KnnModel::predict_all(const FeatureMatrix& queries, std::size_t threads) const {
  std::vector<std::size_t> out(queries.rows.size());
  parallel_for(out.size(), threads, [&](std::size_t i) { out[i] = predict(queries.rows[i].values); });
  return out;
}

}  // namespace tcr

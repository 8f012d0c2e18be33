#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "tcr/representation.hpp"

namespace tcr {

enum class KernelKind { linear, rbf, polynomial };

std::string to_string(KernelKind kind);
KernelKind parse_kernel_kind(std::string_view name);

struct KernelSpec {
  KernelKind kind = KernelKind::rbf;
  /// rbf width; 0 means "1 / feature dimension", resolved at fit time.
  double gamma = 0.0;
  int degree = 3;
  double coef0 = 1.0;

  /// Copy with gamma resolved for `dim` features. Throws ConfigError when
  /// gamma < 0 or degree < 1.
  KernelSpec resolved(std::size_t dim) const;
  bool operator==(const KernelSpec&) const = default;
};

/// linear: x.y; rbf: exp(-gamma |x - y|^2); polynomial: (x.y + coef0)^degree.
/// Throws ConfigError on a length mismatch or an unresolved rbf gamma.
double kernel_eval(const KernelSpec& spec, std::span<const double> x, std::span<const double> y);

struct SmoSettings {
  double C = 1.0;
  /// KKT tolerance on y * f(x) - 1.
  double tolerance = 1e-3;
  /// Consecutive full sweeps without an accepted update needed to stop.
  std::size_t max_passes = 5;
  /// Hard cap on sweeps (full or non-bound) per binary machine.
  std::size_t max_iterations = 10000;
};

/// Called after every accepted pair update with the full dual vector and
/// the current bias. Used for instrumentation; keep threads = 1 when set.
using SmoObserver = std::function<void(std::size_t machine, std::span<const double> alphas, double bias)>;

/// Dual solution of one binary problem.
struct BinarySolution {
  std::vector<double> alphas;
  double bias = 0.0;
  std::size_t sweeps = 0;
  std::size_t updates = 0;
  bool converged = false;
};

/// Sequential minimal optimization on `rows` (each of the same length) with
/// labels +1 / -1. Decision function: f(x) = sum_i alpha_i y_i K(x_i, x) + b.
///
/// The first index is chosen by alternating full and non-bound sweeps over
/// KKT violators. The second index maximizes |E1 - E2| among non-bound
/// points, falling back to non-bound and then all points from a seeded
/// random start.
BinarySolution smo_solve(const std::vector<std::vector<double>>& rows, const std::vector<int>& labels,
                         const KernelSpec& kernel, const SmoSettings& settings, std::uint64_t seed,
                         const SmoObserver& observer = {}, std::size_t machine = 0);

/// Support vectors and coefficients (alpha_i * y_i) of one class-vs-rest machine.
struct BinaryMachine {
  std::size_t positive_class = 0;
  std::vector<std::vector<double>> support_vectors;
  std::vector<double> coefficients;
  double bias = 0.0;
  std::size_t sweeps = 0;
  std::size_t updates = 0;
  bool converged = false;

  double decision(const KernelSpec& kernel, std::span<const double> x) const;
};

struct SvmParams {
  KernelSpec kernel;
  SmoSettings smo;
  /// z-score each feature with training statistics before fitting.
  bool standardize = false;
  std::uint64_t seed = 0;
  /// Machines trained concurrently; 0 uses all cores.
  std::size_t threads = 0;
};

/// One-vs-rest multiclass SVM.
class SvmModel {
 public:
  SvmModel() = default;
  SvmModel(KernelSpec kernel, SmoSettings smo, std::vector<double> feature_mean, std::vector<double> feature_scale,
           std::vector<BinaryMachine> machines);

  /// Decision value of every machine on `query`.
  std::vector<double> decision_values(std::span<const double> query) const;

  /// Class with the largest decision value; lower index on ties.
  std::size_t predict(std::span<const double> query) const;
  std::size_t predict(const FeatureVector& query) const { return predict(query.values); }
  std::vector<std::size_t> predict_all(const FeatureMatrix& queries, std::size_t threads = 0) const;

  const KernelSpec& kernel() const { return kernel_; }
  const SmoSettings& smo() const { return smo_; }
  const std::vector<BinaryMachine>& machines() const { return machines_; }
  const std::vector<double>& feature_mean() const { return mean_; }
  const std::vector<double>& feature_scale() const { return scale_; }
  std::size_t dim() const { return mean_.size(); }

  /// Input after the model's feature standardization (identity when off).
  std::vector<double> transform(std::span<const double> query) const;

 private:
  KernelSpec kernel_;
  SmoSettings smo_;
  std::vector<double> mean_;
  std::vector<double> scale_;
  std::vector<BinaryMachine> machines_;
};

/// Trains one machine per class (that class +1, the rest -1). Machine c
/// draws its random choices from seed + c. Throws ConfigError for fewer than
/// two classes present, an unlabeled matrix, C <= 0 or tolerance <= 0.
SvmModel svm_fit(const FeatureMatrix& train, std::size_t num_classes, const SvmParams& params,
                 const SmoObserver& observer = {});

}  // namespace tcr

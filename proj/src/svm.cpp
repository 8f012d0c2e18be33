#include "tcr/svm.hpp"

#include <algorithm>
#include <cmath>

#include "tcr/error.hpp"
#include "tcr/parallel.hpp"
#include "tcr/rng.hpp"

namespace tcr {

std::string to_string(KernelKind kind) {
  switch (kind) {
    case KernelKind::linear: return "linear";
    case KernelKind::rbf: return "rbf";
    case KernelKind::polynomial: return "polynomial";
  }
  return "rbf";
}

KernelKind parse_kernel_kind(std::string_view name) {
  if (name == "linear") return KernelKind::linear;
  if (name == "rbf") return KernelKind::rbf;
  if (name == "polynomial" || name == "poly") return KernelKind::polynomial;
  throw ConfigError("unknown kernel '" + std::string(name) + "' (expected linear, rbf or polynomial)");
}

KernelSpec KernelSpec::resolved(std::size_t dim) const {
  if (gamma < 0.0) throw ConfigError("kernel gamma must be positive");
  if (degree < 1) throw ConfigError("polynomial degree must be >= 1");
  KernelSpec out = *this;
  if (out.gamma == 0.0) out.gamma = 1.0 / static_cast<double>(std::max<std::size_t>(dim, 1));
  return out;
}

namespace {

double dot(std::span<const double> x, std::span<const double> y) {
  double s = 0.0;
  for (std::size_t f = 0; f < x.size(); ++f) s += x[f] * y[f];
  return s;
}

double int_pow(double base, int exponent) {
  double r = 1.0;
  for (int e = 0; e < exponent; ++e) r *= base;
  return r;
}

double kernel_unchecked(const KernelSpec& spec, std::span<const double> x, std::span<const double> y) {
  switch (spec.kind) {
    case KernelKind::linear: return dot(x, y);
    case KernelKind::rbf: {
      double d = 0.0;
      for (std::size_t f = 0; f < x.size(); ++f) {
        const double diff = x[f] - y[f];
        d += diff * diff;
      }
      return std::exp(-spec.gamma * d);
    }
    case KernelKind::polynomial: return int_pow(dot(x, y) + spec.coef0, spec.degree);
  }
  return 0.0;
}

}  // namespace

double kernel_eval(const KernelSpec& spec, std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size())
    throw ConfigError("kernel arguments differ in length (" + std::to_string(x.size()) + " vs " +
                      std::to_string(y.size()) + ")");
  if (spec.kind == KernelKind::rbf && !(spec.gamma > 0.0)) throw ConfigError("rbf kernel needs gamma > 0");
  if (spec.kind == KernelKind::polynomial && spec.degree < 1) throw ConfigError("polynomial degree must be >= 1");
  return kernel_unchecked(spec, x, y);
}

namespace {

// Platt-style SMO over a dense error cache E_i = f(x_i) - y_i.
class SmoSolver {
 public:
  SmoSolver(const std::vector<std::vector<double>>& rows, const std::vector<int>& labels, const KernelSpec& kernel,
            const SmoSettings& settings, std::uint64_t seed, const SmoObserver& observer, std::size_t machine)
      : x_(rows),
        y_(labels),
        kernel_(kernel),
        C_(settings.C),
        tol_(settings.tolerance),
        settings_(settings),
        rng_(seed),
        observer_(observer),
        machine_(machine),
        n_(rows.size()),
        alpha_(n_, 0.0),
        error_(n_),
        diag_(n_),
        row1_(n_),
        row2_(n_) {
    for (std::size_t i = 0; i < n_; ++i) {
      error_[i] = -static_cast<double>(y_[i]);
      diag_[i] = kernel_unchecked(kernel_, x_[i], x_[i]);
    }
  }

  BinarySolution run() {
    bool examine_all = true;
    std::size_t quiet_full_sweeps = 0;
    BinarySolution out;
    while (out.sweeps < settings_.max_iterations) {
      std::size_t changed = 0;
      for (std::size_t i = 0; i < n_; ++i) {
        if (examine_all || !at_bound(i)) changed += examine(i) ? 1 : 0;
      }
      ++out.sweeps;
      if (examine_all) {
        if (changed == 0) {
          if (++quiet_full_sweeps >= settings_.max_passes) {
            out.converged = true;
            break;
          }
        } else {
          quiet_full_sweeps = 0;
        }
        examine_all = false;
      } else if (changed == 0) {
        examine_all = true;
      }
    }
    out.alphas = alpha_;
    out.bias = b_;
    out.updates = updates_;
    return out;
  }

 private:
  bool at_bound(std::size_t i) const { return alpha_[i] <= 0.0 || alpha_[i] >= C_; }

  double kernel(std::size_t i, std::size_t j) const { return kernel_unchecked(kernel_, x_[i], x_[j]); }

  bool examine(std::size_t i2) {
    const double r2 = error_[i2] * y_[i2];
    const bool violates = (r2 < -tol_ && alpha_[i2] < C_) || (r2 > tol_ && alpha_[i2] > 0.0);
    if (!violates) return false;

    // Second choice: the non-bound point maximizing |E1 - E2|.
    std::size_t best = n_;
    double best_gap = -1.0;
    std::size_t free_count = 0;
    for (std::size_t i = 0; i < n_; ++i) {
      if (at_bound(i)) continue;
      ++free_count;
      const double gap = std::abs(error_[i] - error_[i2]);
      if (gap > best_gap) {
        best_gap = gap;
        best = i;
      }
    }
    if (free_count > 1 && best != n_ && take_step(best, i2)) return true;

    std::size_t start = static_cast<std::size_t>(uniform_below(rng_, n_));
    for (std::size_t off = 0; off < n_; ++off) {
      const std::size_t i1 = (start + off) % n_;
      if (!at_bound(i1) && take_step(i1, i2)) return true;
    }
    start = static_cast<std::size_t>(uniform_below(rng_, n_));
    for (std::size_t off = 0; off < n_; ++off) {
      const std::size_t i1 = (start + off) % n_;
      if (take_step(i1, i2)) return true;
    }
    return false;
  }

  double snap(double a) const {
    const double eps = 1e-13 * C_;
    if (a < eps) return 0.0;
    if (a > C_ - eps) return C_;
    return a;
  }

  bool take_step(std::size_t i1, std::size_t i2) {
    if (i1 == i2) return false;
    const double a1 = alpha_[i1], a2 = alpha_[i2];
    const double y1 = y_[i1], y2 = y_[i2];
    const double e1 = error_[i1], e2 = error_[i2];
    const double s = y1 * y2;
    double lo, hi;
    if (s < 0) {
      lo = std::max(0.0, a2 - a1);
      hi = std::min(C_, C_ + a2 - a1);
    } else {
      lo = std::max(0.0, a2 + a1 - C_);
      hi = std::min(C_, a2 + a1);
    }
    if (hi - lo < 1e-14 * C_) return false;

    const double k11 = diag_[i1], k22 = diag_[i2], k12 = kernel(i1, i2);
    const double eta = k11 + k22 - 2.0 * k12;
    // Dual gain of moving alpha2 by d: y2 d (E1 - E2) - eta d^2 / 2.
    auto gain = [&](double d) { return y2 * d * (e1 - e2) - 0.5 * eta * d * d; };
    double a2_new;
    if (eta > 0.0) {
      a2_new = std::clamp(a2 + y2 * (e1 - e2) / eta, lo, hi);
    } else {
      const double g_lo = gain(lo - a2), g_hi = gain(hi - a2);
      if (g_lo > g_hi + kMinGain) {
        a2_new = lo;
      } else if (g_hi > g_lo + kMinGain) {
        a2_new = hi;
      } else {
        return false;
      }
    }
    a2_new = snap(a2_new);
    if (std::abs(a2_new - a2) < kMinStep * (a2_new + a2 + kMinStep)) return false;
    if (gain(a2_new - a2) <= 0.0) return false;
    const double a1_new = snap(a1 + s * (a2 - a2_new));

    const double d1 = y1 * (a1_new - a1), d2 = y2 * (a2_new - a2);
    const double b1 = b_ - e1 - d1 * k11 - d2 * k12;
    const double b2 = b_ - e2 - d1 * k12 - d2 * k22;
    double b_new;
    if (a1_new > 0.0 && a1_new < C_) {
      b_new = b1;
    } else if (a2_new > 0.0 && a2_new < C_) {
      b_new = b2;
    } else {
      b_new = 0.5 * (b1 + b2);
    }
    const double db = b_new - b_;

    for (std::size_t t = 0; t < n_; ++t) {
      row1_[t] = t == i1 ? k11 : t == i2 ? k12 : kernel(i1, t);
      row2_[t] = t == i2 ? k22 : t == i1 ? k12 : kernel(i2, t);
    }
    for (std::size_t t = 0; t < n_; ++t) error_[t] += d1 * row1_[t] + d2 * row2_[t] + db;

    alpha_[i1] = a1_new;
    alpha_[i2] = a2_new;
    b_ = b_new;
    ++updates_;
    if (observer_) observer_(machine_, alpha_, b_);
    return true;
  }

  static constexpr double kMinStep = 1e-12;
  static constexpr double kMinGain = 1e-15;

  const std::vector<std::vector<double>>& x_;
  const std::vector<int>& y_;
  KernelSpec kernel_;
  double C_;
  double tol_;
  SmoSettings settings_;
  Rng rng_;
  const SmoObserver& observer_;
  std::size_t machine_;
  std::size_t n_;
  std::vector<double> alpha_;
  std::vector<double> error_;
  std::vector<double> diag_;
  std::vector<double> row1_;
  std::vector<double> row2_;
  double b_ = 0.0;
  std::size_t updates_ = 0;
};

}  // namespace

BinarySolution smo_solve(const std::vector<std::vector<double>>& rows, const std::vector<int>& labels,
                         const KernelSpec& kernel, const SmoSettings& settings, std::uint64_t seed,
                         const SmoObserver& observer, std::size_t machine) {
  if (rows.empty()) throw ConfigError("SMO needs at least one training row");
  if (rows.size() != labels.size()) throw ConfigError("SMO rows and labels differ in length");
  if (!(settings.C > 0.0)) throw ConfigError("SVM C must be positive");
  if (!(settings.tolerance > 0.0)) throw ConfigError("SVM tolerance must be positive");
  if (settings.max_passes == 0) throw ConfigError("SVM max_passes must be >= 1");
  bool has_pos = false, has_neg = false;
  for (const int y : labels) {
    if (y == 1) has_pos = true;
    else if (y == -1) has_neg = true;
    else throw ConfigError("SMO labels must be +1 or -1");
  }
  if (!has_pos || !has_neg) throw ConfigError("SMO needs both a positive and a negative example");
  for (const auto& r : rows)
    if (r.size() != rows.front().size()) throw ConfigError("SMO rows differ in length");
  const KernelSpec k = kernel.resolved(rows.front().size());
  return SmoSolver(rows, labels, k, settings, seed, observer, machine).run();
}

double BinaryMachine::decision(const KernelSpec& kernel, std::span<const double> x) const {
  double f = bias;
  for (std::size_t s = 0; s < support_vectors.size(); ++s)
    f += coefficients[s] * kernel_unchecked(kernel, support_vectors[s], x);
  return f;
}

SvmModel::SvmModel(KernelSpec kernel, SmoSettings smo, std::vector<double> feature_mean,
                   std::vector<double> feature_scale, std::vector<BinaryMachine> machines)
    : kernel_(kernel), smo_(smo), mean_(std::move(feature_mean)), scale_(std::move(feature_scale)),
      machines_(std::move(machines)) {
  if (mean_.size() != scale_.size()) throw DataError("SVM feature mean and scale differ in length");
  if (machines_.empty()) throw DataError("SVM model has no machines");
  for (const auto& m : machines_) {
    if (m.support_vectors.size() != m.coefficients.size())
      throw DataError("SVM machine has mismatched support vectors and coefficients");
    for (const auto& sv : m.support_vectors)
      if (sv.size() != mean_.size()) throw DataError("SVM support vector has the wrong dimension");
  }
}

std::vector<double> SvmModel::transform(std::span<const double> query) const {
  if (query.size() != mean_.size())
    throw ConfigError("query has " + std::to_string(query.size()) + " features, model expects " +
                      std::to_string(mean_.size()));
  std::vector<double> z(query.size());
  for (std::size_t f = 0; f < z.size(); ++f) z[f] = (query[f] - mean_[f]) * scale_[f];
  return z;
}

std::vector<double> SvmModel::decision_values(std::span<const double> query) const {
  const auto z = transform(query);
  std::vector<double> out(machines_.size());
  for (std::size_t c = 0; c < machines_.size(); ++c) out[c] = machines_[c].decision(kernel_, z);
  return out;
}

std::size_t SvmModel::predict(std::span<const double> query) const {
  const auto values = decision_values(query);
  std::size_t best = 0;
  for (std::size_t c = 1; c < values.size(); ++c)
    if (values[c] > values[best]) best = c;
  return machines_[best].positive_class;
}

std::vector<std::size_t> SvmModel::predict_all(const FeatureMatrix& queries, std::size_t threads) const {
  std::vector<std::size_t> out(queries.rows.size());
  parallel_for(out.size(), threads, [&](std::size_t i) { out[i] = predict(queries.rows[i].values); });
  return out;
}

SvmModel svm_fit(const FeatureMatrix& train, std::size_t num_classes, const SvmParams& params,
                 const SmoObserver& observer) {
  if (train.labels.size() != train.rows.size() || train.empty())
    throw ConfigError("SVM training matrix must be non-empty and labeled");
  if (num_classes < 2) throw ConfigError("SVM needs at least 2 classes");
  std::vector<std::size_t> per_class(num_classes, 0);
  for (const auto label : train.labels) {
    if (label >= num_classes) throw ConfigError("SVM training label out of range");
    ++per_class[label];
  }
  for (std::size_t c = 0; c < num_classes; ++c)
    if (per_class[c] == 0) throw ConfigError("SVM training data has no example of class " + std::to_string(c));

  const std::size_t dim = train.dim;
  std::vector<double> mean(dim, 0.0), scale(dim, 1.0);
  if (params.standardize) {
    const double n = static_cast<double>(train.rows.size());
    for (const auto& r : train.rows)
      for (std::size_t f = 0; f < dim; ++f) mean[f] += r.values[f] / n;
    for (std::size_t f = 0; f < dim; ++f) {
      double var = 0.0;
      for (const auto& r : train.rows) var += (r.values[f] - mean[f]) * (r.values[f] - mean[f]) / n;
      scale[f] = var > 0.0 ? 1.0 / std::sqrt(var) : 1.0;
    }
  }
  std::vector<std::vector<double>> rows;
  rows.reserve(train.rows.size());
  for (const auto& r : train.rows) {
    if (r.values.size() != dim) throw ConfigError("SVM training rows differ in length");
    std::vector<double> z(dim);
    for (std::size_t f = 0; f < dim; ++f) z[f] = (r.values[f] - mean[f]) * scale[f];
    rows.push_back(std::move(z));
  }
  const KernelSpec kernel = params.kernel.resolved(dim);

  std::vector<BinaryMachine> machines(num_classes);
  parallel_for(num_classes, params.threads, [&](std::size_t c) {
    std::vector<int> y(rows.size());
    for (std::size_t i = 0; i < rows.size(); ++i) y[i] = train.labels[i] == c ? 1 : -1;
    const auto sol = smo_solve(rows, y, kernel, params.smo, params.seed + c, observer, c);
    BinaryMachine& m = machines[c];
    m.positive_class = c;
    m.bias = sol.bias;
    m.sweeps = sol.sweeps;
    m.updates = sol.updates;
    m.converged = sol.converged;
    for (std::size_t i = 0; i < rows.size(); ++i) {
      if (sol.alphas[i] > 0.0) {
        m.support_vectors.push_back(rows[i]);
        m.coefficients.push_back(sol.alphas[i] * y[i]);
      }
    }
  });
  return SvmModel(kernel, params.smo, std::move(mean), std::move(scale), std::move(machines));
}

}  // namespace tcr

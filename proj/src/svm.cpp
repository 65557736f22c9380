#include "hww2v/svm.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <list>
#include <string>

#include "hww2v/errors.hpp"
#include "hww2v/parallel.hpp"

namespace hww2v {
namespace {

constexpr double kTau = 1e-12;

// Rows of Q_ij = y_i y_j K(x_i, x_j), computed on demand and kept in an LRU
// cache bounded by a byte budget.
class KernelRows {
 public:
  KernelRows(std::span<const FeatureVector> x, std::span<const int> y, const KernelSpec& spec, unsigned workers)
      : x_(x), y_(y), spec_(spec), workers_(workers), slots_(x.size()), norms_(x.size()) {
    const std::size_t n = x.size();
    for (std::size_t i = 0; i < n; ++i) norms_[i] = x[i].squared_norm();
    const std::size_t row_bytes = std::max<std::size_t>(1, n * sizeof(double));
    capacity_ = std::max<std::size_t>(2, spec.cache_mb * 1024 * 1024 / row_bytes);
    if (!x.empty()) scatter_.assign(x.front().dense_offset, 0.0);
  }

  double diagonal(std::size_t i) const {
    return spec_.kind == KernelKind::Linear ? norms_[i] : 1.0;
  }

  const std::vector<double>& row(std::size_t i) {
    if (auto& slot = slots_[i]) {
      lru_.splice(lru_.begin(), lru_, *slot);
      return lru_.front().values;
    }
    if (lru_.size() >= capacity_) {
      slots_[lru_.back().index].reset();
      lru_.pop_back();
    }
    lru_.push_front({i, compute(i)});
    slots_[i] = lru_.begin();
    return lru_.front().values;
  }

 private:
  struct Entry {
    std::size_t index;
    std::vector<double> values;
  };

  std::vector<double> compute(std::size_t i) {
    const auto& xi = x_[i];
    for (const auto& e : xi.sparse) scatter_[e.index] = e.value;
    std::vector<double> out(x_.size());
    parallel_for(x_.size(), workers_, [&](std::size_t j) {
      const auto& xj = x_[j];
      double s = 0.0;
      for (const auto& e : xj.sparse) s += scatter_[e.index] * e.value;
      const double* a = xi.dense.data();
      const double* b = xj.dense.data();
      for (std::size_t k = 0; k < xi.dense.size(); ++k) s += a[k] * b[k];
      const double k_ij = spec_.kind == KernelKind::Linear ? s : rbf_from_dot(spec_.gamma, norms_[i], norms_[j], s);
      out[j] = static_cast<double>(y_[i] * y_[j]) * k_ij;
    });
    for (const auto& e : xi.sparse) scatter_[e.index] = 0.0;
    return out;
  }

  std::span<const FeatureVector> x_;
  std::span<const int> y_;
  KernelSpec spec_;
  unsigned workers_;
  std::list<Entry> lru_;
  std::vector<std::optional<std::list<Entry>::iterator>> slots_;
  std::vector<double> norms_;
  std::vector<double> scatter_;
  std::size_t capacity_ = 2;
};

bool in_up(int y, double a, double C) { return (y == 1 && a < C) || (y == -1 && a > 0); }
bool in_low(int y, double a, double C) { return (y == 1 && a > 0) || (y == -1 && a < C); }

double dual_from_gradient(std::span<const double> alpha, std::span<const double> grad) {
  // f = 1/2 a'Qa - e'a = 1/2 a'G - 1/2 e'a, and the dual objective is -f.
  double s = 0.0;
  for (std::size_t i = 0; i < alpha.size(); ++i) s += alpha[i] * (1.0 - grad[i]);
  return 0.5 * s;
}

double equality_residual(std::span<const double> alpha, std::span<const int> y) {
  double s = 0.0;
  for (std::size_t i = 0; i < alpha.size(); ++i) s += alpha[i] * y[i];
  return std::abs(s);
}

}  // namespace

double svm_dual_objective(std::span<const FeatureVector> features, std::span<const int> y,
                          std::span<const double> alpha, const KernelSpec& kernel) {
  double linear = 0.0, quad = 0.0;
  for (std::size_t i = 0; i < features.size(); ++i) {
    linear += alpha[i];
    if (alpha[i] == 0.0) continue;
    for (std::size_t j = 0; j < features.size(); ++j) {
      if (alpha[j] == 0.0) continue;
      quad += alpha[i] * alpha[j] * y[i] * y[j] * kernel_eval(kernel, features[i], features[j]);
    }
  }
  return linear - 0.5 * quad;
}

SvmModel svm_train(std::span<const FeatureVector> features, std::span<const Polarity> labels,
                   const SvmOptions& options, SvmReport* report) {
  if (features.size() != labels.size()) throw ConfigError("features and labels differ in length");
  if (features.empty()) throw ConfigError("cannot train an SVM on an empty set");
  if (!(options.C > 0)) throw ConfigError("C must be > 0");
  if (!(options.tol > 0)) throw ConfigError("tol must be > 0");
  if (options.kernel.kind == KernelKind::Rbf && !(options.kernel.gamma > 0)) {
    throw ConfigError("RBF kernel needs gamma > 0");
  }
  for (const auto& x : features) {
    if (!x.same_layout(features.front())) throw ConfigError("inconsistent feature layouts");
  }

  const std::size_t n = features.size();
  const double C = options.C;
  std::vector<int> y(n);
  for (std::size_t i = 0; i < n; ++i) y[i] = to_sign(labels[i]);

  KernelRows rows(features, y, options.kernel, options.workers);
  std::vector<double> alpha(n, 0.0);
  std::vector<double> grad(n, -1.0);
  const std::uint64_t max_iter =
      options.max_iter ? options.max_iter : std::max<std::uint64_t>(10'000'000, 100 * static_cast<std::uint64_t>(n));

  const bool history = report && report->record_history;
  if (history) {
    report->dual_objective.assign(1, 0.0);
    report->equality_residual.assign(1, 0.0);
  }

  std::uint64_t iter = 0;
  bool converged = false;
  double violation = 0.0;
  while (true) {
    double g_max = -std::numeric_limits<double>::infinity();
    double g_min = std::numeric_limits<double>::infinity();
    std::size_t i = n, j = n;
    for (std::size_t t = 0; t < n; ++t) {
      const double v = -y[t] * grad[t];
      if (in_up(y[t], alpha[t], C) && v > g_max) {
        g_max = v;
        i = t;
      }
      if (in_low(y[t], alpha[t], C) && v < g_min) {
        g_min = v;
        j = t;
      }
    }
    violation = (i == n || j == n) ? 0.0 : g_max - g_min;
    if (violation < options.tol) {
      converged = true;
      break;
    }
    if (iter >= max_iter) break;
    ++iter;

    const auto& qi = rows.row(i);
    const std::vector<double> qi_copy = qi;  // the next row() call may evict it
    const auto& qj = rows.row(j);
    const double old_ai = alpha[i];
    const double old_aj = alpha[j];
    double ai = old_ai, aj = old_aj;

    if (y[i] != y[j]) {
      double quad = rows.diagonal(i) + rows.diagonal(j) + 2.0 * qi_copy[j];
      if (quad <= 0) quad = kTau;
      const double delta = (-grad[i] - grad[j]) / quad;
      const double diff = ai - aj;
      ai += delta;
      aj += delta;
      if (diff > 0) {
        if (aj < 0) {
          aj = 0;
          ai = diff;
        }
      } else if (ai < 0) {
        ai = 0;
        aj = -diff;
      }
      if (diff > 0) {
        if (ai > C) {
          ai = C;
          aj = C - diff;
        }
      } else if (aj > C) {
        aj = C;
        ai = C + diff;
      }
    } else {
      double quad = rows.diagonal(i) + rows.diagonal(j) - 2.0 * qi_copy[j];
      if (quad <= 0) quad = kTau;
      const double delta = (grad[i] - grad[j]) / quad;
      const double sum = ai + aj;
      ai -= delta;
      aj += delta;
      if (sum > C) {
        if (ai > C) {
          ai = C;
          aj = sum - C;
        }
      } else if (aj < 0) {
        aj = 0;
        ai = sum;
      }
      if (sum > C) {
        if (aj > C) {
          aj = C;
          ai = sum - C;
        }
      } else if (ai < 0) {
        ai = 0;
        aj = sum;
      }
    }
    alpha[i] = ai;
    alpha[j] = aj;
    const double di = ai - old_ai;
    const double dj = aj - old_aj;
    for (std::size_t t = 0; t < n; ++t) grad[t] += qi_copy[t] * di + qj[t] * dj;

    if (history) {
      report->dual_objective.push_back(dual_from_gradient(alpha, grad));
      report->equality_residual.push_back(equality_residual(alpha, y));
    }
  }

  // Bias from free support vectors, else the midpoint of the feasible range.
  double ub = std::numeric_limits<double>::infinity();
  double lb = -std::numeric_limits<double>::infinity();
  double free_sum = 0.0;
  std::size_t free_count = 0;
  for (std::size_t t = 0; t < n; ++t) {
    const double yg = y[t] * grad[t];
    if (alpha[t] >= C) {
      if (y[t] == -1) ub = std::min(ub, yg);
      else lb = std::max(lb, yg);
    } else if (alpha[t] <= 0) {
      if (y[t] == 1) ub = std::min(ub, yg);
      else lb = std::max(lb, yg);
    } else {
      ++free_count;
      free_sum += yg;
    }
  }
  double rho = 0.0;
  if (free_count > 0) {
    rho = free_sum / static_cast<double>(free_count);
  } else if (std::isfinite(ub) && std::isfinite(lb)) {
    rho = 0.5 * (ub + lb);
  } else if (std::isfinite(ub)) {
    rho = ub;
  } else if (std::isfinite(lb)) {
    rho = lb;
  }

  SvmModel model;
  model.kernel = options.kernel;
  model.C = C;
  model.bias = -rho;
  model.converged = converged;
  model.iterations = iter;
  for (std::size_t t = 0; t < n; ++t) {
    if (alpha[t] > 0) {
      model.support_vectors.push_back(features[t]);
      model.alpha.push_back(alpha[t]);
      model.labels.push_back(y[t]);
    }
  }
  if (report) {
    report->alpha = alpha;
    report->max_violation = violation;
  }
  return model;
}

double svm_decision(const SvmModel& model, const FeatureVector& x) {
  if (!model.support_vectors.empty() && !x.same_layout(model.support_vectors.front())) {
    throw ConfigError("feature dimension " + std::to_string(x.dim) + " does not match model " +
                      std::to_string(model.support_vectors.front().dim));
  }
  const double xx = model.kernel.kind == KernelKind::Rbf ? x.squared_norm() : 0.0;
  double f = model.bias;
  for (std::size_t s = 0; s < model.support_vectors.size(); ++s) {
    const auto& sv = model.support_vectors[s];
    const double d = dot(sv, x);
    const double k = model.kernel.kind == KernelKind::Linear ? d : rbf_from_dot(model.kernel.gamma, sv.squared_norm(), xx, d);
    f += model.alpha[s] * model.labels[s] * k;
  }
  return f;
}

Polarity svm_predict(const SvmModel& model, const FeatureVector& x) {
  return svm_decision(model, x) >= 0.0 ? Polarity::Positive : Polarity::Negative;
}

}  // namespace hww2v

#include "hww2v/maxent.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "hww2v/errors.hpp"
#include "hww2v/naive_bayes.hpp"

namespace hww2v {
namespace {

double score(const std::vector<double>& w, double b, const FeatureVector& x) {
  double s = b;
  for (const auto& e : x.sparse) s += w[e.index] * e.value;
  const double* wd = w.data() + x.dense_offset;
  for (std::size_t k = 0; k < x.dense.size(); ++k) s += wd[k] * x.dense[k];
  return s;
}

void add_scaled(double* g, const FeatureVector& x, double coef) {
  for (const auto& e : x.sparse) g[e.index] += coef * e.value;
  double* gd = g + x.dense_offset;
  for (std::size_t k = 0; k < x.dense.size(); ++k) gd[k] += coef * x.dense[k];
}

double inf_norm(const std::vector<double>& v) {
  double m = 0.0;
  for (const double x : v) m = std::max(m, std::abs(x));
  return m;
}

double dot(const std::vector<double>& a, const std::vector<double>& b) {
  return std::inner_product(a.begin(), a.end(), b.begin(), 0.0);
}

}  // namespace

std::vector<double> MaxEntModel::parameters() const {
  std::vector<double> theta;
  theta.reserve(2 * (static_cast<std::size_t>(dim) + 1));
  for (std::size_t c = 0; c < 2; ++c) {
    theta.insert(theta.end(), weights[c].begin(), weights[c].end());
    theta.push_back(bias[c]);
  }
  return theta;
}

void MaxEntModel::set_parameters(std::span<const double> theta) {
  const std::size_t stride = static_cast<std::size_t>(dim) + 1;
  if (theta.size() != 2 * stride) throw ConfigError("parameter vector has wrong length");
  for (std::size_t c = 0; c < 2; ++c) {
    weights[c].assign(theta.begin() + static_cast<std::ptrdiff_t>(c * stride),
                      theta.begin() + static_cast<std::ptrdiff_t>(c * stride + dim));
    bias[c] = theta[c * stride + dim];
  }
}

double maxent_objective(const MaxEntModel& model, std::span<const FeatureVector> features,
                        std::span<const Polarity> labels, std::vector<double>* gradient) {
  const std::size_t stride = static_cast<std::size_t>(model.dim) + 1;
  if (gradient) gradient->assign(2 * stride, 0.0);
  double ll = 0.0;
  for (std::size_t i = 0; i < features.size(); ++i) {
    const auto& x = features[i];
    const double s0 = score(model.weights[0], model.bias[0], x);
    const double s1 = score(model.weights[1], model.bias[1], x);
    const double hi = std::max(s0, s1);
    const double log_z = hi + std::log(std::exp(s0 - hi) + std::exp(s1 - hi));
    const std::size_t y = class_slot(labels[i]);
    ll += (y == 1 ? s1 : s0) - log_z;
    if (gradient) {
      const double p1 = std::exp(s1 - log_z);
      const double r1 = (y == 1 ? 1.0 : 0.0) - p1;  // residual for the positive class
      double* g = gradient->data();
      add_scaled(g, x, -r1);
      g[model.dim] += -r1;
      add_scaled(g + stride, x, r1);
      g[stride + model.dim] += r1;
    }
  }
  double penalty = 0.0;
  for (std::size_t c = 0; c < 2; ++c) {
    for (std::uint32_t k = 0; k < model.dim; ++k) {
      const double w = model.weights[c][k];
      penalty += w * w;
      if (gradient) (*gradient)[c * stride + k] -= model.l2 * w;
    }
  }
  return ll - 0.5 * model.l2 * penalty;
}

MaxEntModel maxent_train(std::span<const FeatureVector> features, std::span<const Polarity> labels,
                         const MaxEntOptions& options, MaxEntTrace* trace) {
  if (features.size() != labels.size()) throw ConfigError("features and labels differ in length");
  if (features.empty()) throw ConfigError("cannot train MaxEnt on an empty set");
  if (options.max_iter < 1) throw ConfigError("max_iter must be >= 1");
  if (!(options.tol > 0)) throw ConfigError("tol must be > 0");
  if (options.l2 < 0) throw ConfigError("l2 strength must be >= 0");

  MaxEntModel model;
  model.dim = features.front().dim;
  for (const auto& x : features) {
    if (x.dim != model.dim) throw ConfigError("inconsistent feature dimensions");
  }
  model.l2 = options.l2;
  model.weights = {std::vector<double>(model.dim, 0.0), std::vector<double>(model.dim, 0.0)};

  std::vector<double> theta = model.parameters();
  std::vector<double> grad, next_grad;
  double f = maxent_objective(model, features, labels, &grad);
  if (trace) trace->objective.assign(1, f);

  // Limited-memory BFGS direction with Armijo backtracking. Plain gradient
  // steps stall on pooled embedding sums, whose columns differ in scale by
  // several orders of magnitude.
  constexpr std::size_t kMemory = 10;
  constexpr double kArmijo = 1e-4;
  std::vector<std::vector<double>> s_hist, y_hist;
  std::vector<double> rho_hist;
  std::vector<double> direction(theta.size()), candidate(theta.size());
  std::vector<double> alpha(kMemory);

  std::uint32_t it = 0;
  for (; it < options.max_iter; ++it) {
    if (inf_norm(grad) < options.tol) {
      model.converged = true;
      break;
    }
    direction = grad;
    const std::size_t m = s_hist.size();
    for (std::size_t j = m; j-- > 0;) {
      alpha[j] = rho_hist[j] * dot(s_hist[j], direction);
      for (std::size_t k = 0; k < direction.size(); ++k) direction[k] -= alpha[j] * y_hist[j][k];
    }
    double gamma = 1.0 / std::sqrt(std::max(dot(grad, grad), 1e-300));
    if (m > 0) gamma = 1.0 / (rho_hist[m - 1] * dot(y_hist[m - 1], y_hist[m - 1]));
    for (double& d : direction) d *= gamma;
    for (std::size_t j = 0; j < m; ++j) {
      const double beta = rho_hist[j] * dot(y_hist[j], direction);
      for (std::size_t k = 0; k < direction.size(); ++k) direction[k] += (alpha[j] - beta) * s_hist[j][k];
    }
    double slope = dot(grad, direction);
    if (!(slope > 0)) {
      // Lost the ascent property; restart from a scaled gradient step.
      s_hist.clear();
      y_hist.clear();
      rho_hist.clear();
      const double scale = 1.0 / std::sqrt(std::max(dot(grad, grad), 1e-300));
      for (std::size_t k = 0; k < direction.size(); ++k) direction[k] = scale * grad[k];
      slope = dot(grad, direction);
    }

    double step = 1.0;
    double next_f = 0.0;
    bool accepted = false;
    while (step > 1e-30) {
      for (std::size_t k = 0; k < theta.size(); ++k) candidate[k] = theta[k] + step * direction[k];
      model.set_parameters(candidate);
      next_f = maxent_objective(model, features, labels, &next_grad);
      if (std::isfinite(next_f) && next_f >= f + kArmijo * step * slope) {
        accepted = true;
        break;
      }
      step *= 0.5;
    }
    if (!accepted) {
      model.set_parameters(theta);
      break;  // no ascent possible at machine precision
    }
    // Curvature pair for the negated (convex) objective.
    std::vector<double> s(theta.size()), y(theta.size());
    for (std::size_t k = 0; k < theta.size(); ++k) {
      s[k] = candidate[k] - theta[k];
      y[k] = grad[k] - next_grad[k];
    }
    const double sy = dot(s, y);
    if (sy > 1e-12 * dot(s, s)) {
      if (s_hist.size() == kMemory) {
        s_hist.erase(s_hist.begin());
        y_hist.erase(y_hist.begin());
        rho_hist.erase(rho_hist.begin());
      }
      s_hist.push_back(std::move(s));
      y_hist.push_back(std::move(y));
      rho_hist.push_back(1.0 / sy);
    }
    theta.swap(candidate);
    grad.swap(next_grad);
    f = next_f;
    if (trace) trace->objective.push_back(f);
  }
  if (!std::isfinite(f)) throw ValidationError("MaxEnt objective is not finite");
  model.set_parameters(theta);
  model.iterations = it;
  model.gradient_norm = inf_norm(grad);
  if (model.gradient_norm < options.tol) model.converged = true;
  return model;
}

std::array<double, 2> maxent_predict_proba(const MaxEntModel& model, const FeatureVector& x) {
  if (x.dim != model.dim) {
    throw ConfigError("feature dimension " + std::to_string(x.dim) + " does not match model " + std::to_string(model.dim));
  }
  const double s0 = score(model.weights[0], model.bias[0], x);
  const double s1 = score(model.weights[1], model.bias[1], x);
  const double hi = std::max(s0, s1);
  const double e0 = std::exp(s0 - hi);
  const double e1 = std::exp(s1 - hi);
  return {e0 / (e0 + e1), e1 / (e0 + e1)};
}

double maxent_decision(const MaxEntModel& model, const FeatureVector& x) {
  if (x.dim != model.dim) {
    throw ConfigError("feature dimension " + std::to_string(x.dim) + " does not match model " + std::to_string(model.dim));
  }
  return score(model.weights[1], model.bias[1], x) - score(model.weights[0], model.bias[0], x);
}

Polarity maxent_predict(const MaxEntModel& model, const FeatureVector& x) {
  return maxent_decision(model, x) >= 0.0 ? Polarity::Positive : Polarity::Negative;
}

}  // namespace hww2v

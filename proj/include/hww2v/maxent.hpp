#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <vector>

#include "hww2v/corpus_io.hpp"
#include "hww2v/hybrid.hpp"

namespace hww2v {

struct MaxEntOptions {
  double l2 = 1.0;  // penalty (l2 / 2) * |lambda|^2 on the feature weights
  std::uint32_t max_iter = 1000;
  double tol = 1e-3;  // on the infinity norm of the gradient
};

/// Two-class maximum entropy model. Each class c has a weight vector over the
/// document features plus an unregularized bias, so that
/// P(c | d) = exp(lambda_c . x_d + b_c) / Z(d).
struct MaxEntModel {
  std::uint32_t dim = 0;
  std::array<std::vector<double>, 2> weights;  // [negative, positive]
  std::array<double, 2> bias{};
  double l2 = 1.0;
  bool converged = false;
  std::uint32_t iterations = 0;
  double gradient_norm = 0.0;  // infinity norm at the returned parameters

  /// Flattened parameters [w_neg, b_neg, w_pos, b_pos].
  std::vector<double> parameters() const;
  void set_parameters(std::span<const double> theta);

  bool operator==(const MaxEntModel&) const = default;
};

/// Objective values at every accepted step, starting with the initial point.
struct MaxEntTrace {
  std::vector<double> objective;
};

/// Maximizes the L2-regularized conditional log-likelihood by batch gradient
/// ascent with Barzilai-Borwein trial steps and Armijo backtracking.
MaxEntModel maxent_train(std::span<const FeatureVector> features, std::span<const Polarity> labels,
                         const MaxEntOptions& options, MaxEntTrace* trace = nullptr);

/// Regularized log-likelihood and its gradient with respect to parameters().
double maxent_objective(const MaxEntModel& model, std::span<const FeatureVector> features,
                        std::span<const Polarity> labels, std::vector<double>* gradient = nullptr);

/// [P(negative | x), P(positive | x)], computed with log-sum-exp.
std::array<double, 2> maxent_predict_proba(const MaxEntModel& model, const FeatureVector& x);

/// log P(positive | x) - log P(negative | x).
double maxent_decision(const MaxEntModel& model, const FeatureVector& x);

/// Ties go to Positive.
Polarity maxent_predict(const MaxEntModel& model, const FeatureVector& x);

}  // namespace hww2v

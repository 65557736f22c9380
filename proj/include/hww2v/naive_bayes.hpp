#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <vector>

#include "hww2v/corpus_io.hpp"
#include "hww2v/hybrid.hpp"

namespace hww2v {

/// Class slot used by the per-class arrays of the classifiers.
constexpr std::size_t class_slot(Polarity p) noexcept { return p == Polarity::Positive ? 1 : 0; }

/// Multinomial Naive Bayes with add-one smoothing, stored in log space.
/// Feature values act as (possibly fractional) term counts.
struct NaiveBayesModel {
  std::uint32_t dim = 0;
  std::array<double, 2> log_prior{};                // [negative, positive]
  std::array<std::vector<double>, 2> log_cond;      // log P(t_k | c), length dim

  /// log P(c) + sum_k f_k log P(t_k | c)
  double log_score(Polarity c, const FeatureVector& x) const;

  bool operator==(const NaiveBayesModel&) const = default;
};

/// Throws ValidationError on a negative feature value.
NaiveBayesModel nb_train(std::span<const FeatureVector> features, std::span<const Polarity> labels);

/// Log-score difference (positive minus negative).
double nb_decision(const NaiveBayesModel& model, const FeatureVector& x);

/// MAP class; ties go to Positive.
Polarity nb_predict(const NaiveBayesModel& model, const FeatureVector& x);

}  // namespace hww2v

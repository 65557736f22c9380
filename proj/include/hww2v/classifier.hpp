#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <variant>

#include "hww2v/corpus_io.hpp"
#include "hww2v/hybrid.hpp"
#include "hww2v/maxent.hpp"
#include "hww2v/naive_bayes.hpp"
#include "hww2v/svm.hpp"

namespace hww2v {

enum class ClassifierKind { NaiveBayes, MaxEnt, SvmLinear, SvmRbf };

/// Flag names: nb, maxent, svm-linear, svm-rbf.
std::string_view to_string(ClassifierKind k) noexcept;
ClassifierKind parse_classifier(std::string_view name);

struct ClassifierConfig {
  ClassifierKind kind = ClassifierKind::NaiveBayes;
  double C = 1.0;
  double gamma = 0.0;  // 0 picks scale_gamma() on the training set
  double l2 = 1.0;
  double tol = 1e-3;
  std::uint64_t max_iter = 0;  // 0 keeps each trainer's default
  std::size_t cache_mb = 1024;
  unsigned workers = 1;
  // Tune C (and gamma for RBF) on a stratified 80/20 split of the training set.
  bool svm_grid = false;

  void validate() const;
};

using ClassifierModel = std::variant<NaiveBayesModel, MaxEntModel, SvmModel>;

struct TrainedClassifier {
  ClassifierKind kind = ClassifierKind::NaiveBayes;
  std::optional<FeatureShift> shift;  // Naive Bayes only
  ClassifierModel model;
  bool converged = true;

  bool operator==(const TrainedClassifier&) const = default;
};

TrainedClassifier train_classifier(std::span<const FeatureVector> features, std::span<const Polarity> labels,
                                   const ClassifierConfig& config);

/// Positive values favour Positive; the shift is applied internally.
double decision_value(const TrainedClassifier& clf, const FeatureVector& x);

/// Decision value >= 0 maps to Positive.
Polarity predict(const TrainedClassifier& clf, const FeatureVector& x);

}  // namespace hww2v

#include "hww2v/naive_bayes.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "hww2v/errors.hpp"

namespace hww2v {

double NaiveBayesModel::log_score(Polarity c, const FeatureVector& x) const {
  if (x.dim != dim) throw ConfigError("feature dimension " + std::to_string(x.dim) + " does not match model " + std::to_string(dim));
  const auto& cond = log_cond[class_slot(c)];
  double s = log_prior[class_slot(c)];
  for (const auto& e : x.sparse) s += e.value * cond[e.index];
  for (std::size_t k = 0; k < x.dense.size(); ++k) {
    if (x.dense[k] != 0.0) s += x.dense[k] * cond[x.dense_offset + k];
  }
  return s;
}

NaiveBayesModel nb_train(std::span<const FeatureVector> features, std::span<const Polarity> labels) {
  if (features.size() != labels.size()) throw ConfigError("features and labels differ in length");
  if (features.empty()) throw ConfigError("cannot train Naive Bayes on an empty set");

  NaiveBayesModel m;
  m.dim = features.front().dim;
  std::array<std::vector<double>, 2> mass{std::vector<double>(m.dim, 0.0), std::vector<double>(m.dim, 0.0)};
  std::array<double, 2> docs{0.0, 0.0};

  for (std::size_t i = 0; i < features.size(); ++i) {
    const auto& x = features[i];
    if (x.dim != m.dim) throw ConfigError("inconsistent feature dimensions");
    auto& n = mass[class_slot(labels[i])];
    docs[class_slot(labels[i])] += 1.0;
    for (const auto& e : x.sparse) {
      if (e.value < 0) throw ValidationError("Naive Bayes needs nonnegative features; apply a FeatureShift first");
      n[e.index] += e.value;
    }
    for (std::size_t k = 0; k < x.dense.size(); ++k) {
      if (x.dense[k] < 0) throw ValidationError("Naive Bayes needs nonnegative features; apply a FeatureShift first");
      n[x.dense_offset + k] += x.dense[k];
    }
  }

  const double total_docs = docs[0] + docs[1];
  for (std::size_t c = 0; c < 2; ++c) {
    m.log_prior[c] = docs[c] > 0 ? std::log(docs[c] / total_docs) : -std::numeric_limits<double>::infinity();
    double total = 0.0;
    for (const double v : mass[c]) total += v;
    const double denom = std::log(total + static_cast<double>(m.dim));
    m.log_cond[c].resize(m.dim);
    for (std::uint32_t k = 0; k < m.dim; ++k) m.log_cond[c][k] = std::log(mass[c][k] + 1.0) - denom;
  }
  return m;
}

double nb_decision(const NaiveBayesModel& model, const FeatureVector& x) {
  return model.log_score(Polarity::Positive, x) - model.log_score(Polarity::Negative, x);
}

Polarity nb_predict(const NaiveBayesModel& model, const FeatureVector& x) {
  return model.log_score(Polarity::Positive, x) >= model.log_score(Polarity::Negative, x) ? Polarity::Positive
                                                                                         : Polarity::Negative;
}

}  // namespace hww2v

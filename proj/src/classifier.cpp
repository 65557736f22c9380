#include "hww2v/classifier.hpp"

#include <array>
#include <limits>
#include <string>
#include <vector>

#include "hww2v/errors.hpp"
#include "hww2v/kernel.hpp"

namespace hww2v {
namespace {

SvmOptions svm_options(const ClassifierConfig& config, std::span<const FeatureVector> features) {
  SvmOptions o;
  o.C = config.C;
  o.tol = config.tol;
  o.max_iter = config.max_iter;
  o.workers = config.workers;
  o.kernel.cache_mb = config.cache_mb;
  if (config.kind == ClassifierKind::SvmRbf) {
    o.kernel.kind = KernelKind::Rbf;
    o.kernel.gamma = config.gamma > 0 ? config.gamma : scale_gamma(features);
  }
  return o;
}

// Every fifth document of each class goes to the holdout side.
void holdout_split(std::span<const Polarity> labels, std::vector<std::size_t>& fit,
                   std::vector<std::size_t>& held) {
  std::array<std::size_t, 2> seen{0, 0};
  for (std::size_t i = 0; i < labels.size(); ++i) {
    const std::size_t c = class_slot(labels[i]);
    (seen[c]++ % 5 == 4 ? held : fit).push_back(i);
  }
}

SvmOptions tune_svm(const ClassifierConfig& config, std::span<const FeatureVector> features,
                    std::span<const Polarity> labels) {
  std::vector<std::size_t> fit_idx, held_idx;
  holdout_split(labels, fit_idx, held_idx);
  SvmOptions best = svm_options(config, features);
  if (held_idx.empty() || fit_idx.empty()) return best;

  std::vector<FeatureVector> fx;
  std::vector<Polarity> fy;
  for (const auto i : fit_idx) {
    fx.push_back(features[i]);
    fy.push_back(labels[i]);
  }
  std::vector<double> gammas{0.0};
  if (config.kind == ClassifierKind::SvmRbf) gammas = {scale_gamma(fx), 0.01, 0.001};

  double best_acc = -1.0;
  for (const double C : {0.1, 1.0, 10.0}) {
    for (const double g : gammas) {
      ClassifierConfig trial = config;
      trial.C = C;
      trial.gamma = g;
      const SvmOptions opts = svm_options(trial, fx);
      const SvmModel m = svm_train(fx, fy, opts);
      std::size_t hits = 0;
      for (const auto i : held_idx) hits += svm_predict(m, features[i]) == labels[i];
      const double acc = static_cast<double>(hits) / static_cast<double>(held_idx.size());
      if (acc > best_acc) {
        best_acc = acc;
        best = opts;
        // scale gamma is re-estimated on the full training set below
        if (config.kind == ClassifierKind::SvmRbf && g == gammas.front()) best.kernel.gamma = scale_gamma(features);
      }
    }
  }
  return best;
}

}  // namespace

std::string_view to_string(ClassifierKind k) noexcept {
  switch (k) {
    case ClassifierKind::NaiveBayes: return "nb";
    case ClassifierKind::MaxEnt: return "maxent";
    case ClassifierKind::SvmLinear: return "svm-linear";
    case ClassifierKind::SvmRbf: return "svm-rbf";
  }
  return "?";
}

ClassifierKind parse_classifier(std::string_view name) {
  for (const auto k : {ClassifierKind::NaiveBayes, ClassifierKind::MaxEnt, ClassifierKind::SvmLinear,
                       ClassifierKind::SvmRbf}) {
    if (name == to_string(k)) return k;
  }
  throw ConfigError("unknown classifier '" + std::string(name) + "' (expected nb, maxent, svm-linear or svm-rbf)");
}

void ClassifierConfig::validate() const {
  if (!(C > 0)) throw ConfigError("C must be > 0");
  if (gamma < 0) throw ConfigError("gamma must be >= 0 (0 = scale)");
  if (l2 < 0) throw ConfigError("l2 must be >= 0");
  if (!(tol > 0)) throw ConfigError("tol must be > 0");
  if (kind == ClassifierKind::MaxEnt && max_iter > std::numeric_limits<std::uint32_t>::max()) {
    throw ConfigError("max_iter too large for MaxEnt");
  }
}

TrainedClassifier train_classifier(std::span<const FeatureVector> features, std::span<const Polarity> labels,
                                   const ClassifierConfig& config) {
  config.validate();
  TrainedClassifier out;
  out.kind = config.kind;
  switch (config.kind) {
    case ClassifierKind::NaiveBayes: {
      FeatureShift shift = FeatureShift::fit(features);
      std::vector<FeatureVector> shifted(features.begin(), features.end());
      for (auto& x : shifted) shift.apply(x);
      out.model = nb_train(shifted, labels);
      out.shift = std::move(shift);
      break;
    }
    case ClassifierKind::MaxEnt: {
      MaxEntOptions o;
      o.l2 = config.l2;
      o.tol = config.tol;
      if (config.max_iter) o.max_iter = static_cast<std::uint32_t>(config.max_iter);
      MaxEntModel m = maxent_train(features, labels, o);
      out.converged = m.converged;
      out.model = std::move(m);
      break;
    }
    case ClassifierKind::SvmLinear:
    case ClassifierKind::SvmRbf: {
      const SvmOptions o = config.svm_grid ? tune_svm(config, features, labels) : svm_options(config, features);
      SvmModel m = svm_train(features, labels, o);
      out.converged = m.converged;
      out.model = std::move(m);
      break;
    }
  }
  return out;
}

double decision_value(const TrainedClassifier& clf, const FeatureVector& x) {
  switch (clf.kind) {
    case ClassifierKind::NaiveBayes: {
      FeatureVector shifted = x;
      if (clf.shift) clf.shift->apply(shifted);
      return nb_decision(std::get<NaiveBayesModel>(clf.model), shifted);
    }
    case ClassifierKind::MaxEnt:
      return maxent_decision(std::get<MaxEntModel>(clf.model), x);
    case ClassifierKind::SvmLinear:
    case ClassifierKind::SvmRbf:
      return svm_decision(std::get<SvmModel>(clf.model), x);
  }
  return 0.0;
}

Polarity predict(const TrainedClassifier& clf, const FeatureVector& x) {
  return decision_value(clf, x) >= 0.0 ? Polarity::Positive : Polarity::Negative;
}

}  // namespace hww2v

#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "hww2v/corpus_io.hpp"
#include "hww2v/hybrid.hpp"
#include "hww2v/kernel.hpp"

namespace hww2v {

struct SvmOptions {
  double C = 1.0;
  KernelSpec kernel;
  double tol = 1e-3;  // stop when the maximal KKT violation drops below tol
  // Pair updates before giving up; 0 picks max(10'000'000, 100 * n).
  std::uint64_t max_iter = 0;
  unsigned workers = 1;  // threads used to fill kernel rows
};

struct SvmModel {
  KernelSpec kernel;
  double C = 1.0;
  std::vector<FeatureVector> support_vectors;
  std::vector<double> alpha;   // a_i in (0, C], one per support vector
  std::vector<int> labels;     // y_i in {-1, +1}
  double bias = 0.0;
  bool converged = false;
  std::uint64_t iterations = 0;

  bool operator==(const SvmModel&) const = default;
};

/// Solver diagnostics. `alpha` covers every training point.
struct SvmReport {
  std::vector<double> alpha;
  double max_violation = 0.0;
  std::vector<double> dual_objective;     // filled when record_history
  std::vector<double> equality_residual;  // |sum a_i y_i| per step, when record_history
  bool record_history = false;
};

/// Dual objective sum a_i - 1/2 sum_ij a_i a_j y_i y_j K(x_i, x_j).
double svm_dual_objective(std::span<const FeatureVector> features, std::span<const int> y,
                          std::span<const double> alpha, const KernelSpec& kernel);

/// SMO on the dual with maximal-violating-pair selection and an LRU cache of
/// kernel rows.
SvmModel svm_train(std::span<const FeatureVector> features, std::span<const Polarity> labels,
                   const SvmOptions& options, SvmReport* report = nullptr);

/// sum a_i y_i K(x_i, x) + bias
double svm_decision(const SvmModel& model, const FeatureVector& x);

/// Sign of the decision value; 0 maps to Positive.
Polarity svm_predict(const SvmModel& model, const FeatureVector& x);

}  // namespace hww2v

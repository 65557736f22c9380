#include "hww2v/kernel.hpp"

#include <cmath>

namespace hww2v {

std::string_view to_string(KernelKind k) noexcept { return k == KernelKind::Rbf ? "rbf" : "linear"; }

double kernel_eval(const KernelSpec& spec, const FeatureVector& x, const FeatureVector& z) {
  const double xz = dot(x, z);
  if (spec.kind == KernelKind::Linear) return xz;
  return rbf_from_dot(spec.gamma, x.squared_norm(), z.squared_norm(), xz);
}

double scale_gamma(std::span<const FeatureVector> training) {
  if (training.empty()) return 1.0;
  const double features = training.front().dim;
  if (features == 0) return 1.0;
  double sum = 0.0, sumsq = 0.0;
  for (const auto& v : training) {
    for (const auto& e : v.sparse) sum += e.value;
    for (const double d : v.dense) sum += d;
    sumsq += v.squared_norm();
  }
  const double count = features * static_cast<double>(training.size());
  const double mean = sum / count;
  const double var = sumsq / count - mean * mean;
  if (!(var > 0.0)) return 1.0 / features;
  return 1.0 / (features * var);
}

}  // namespace hww2v

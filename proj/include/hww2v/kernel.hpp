#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <string_view>

#include "hww2v/hybrid.hpp"

namespace hww2v {

enum class KernelKind { Linear, Rbf };

struct KernelSpec {
  KernelKind kind = KernelKind::Linear;
  double gamma = 0.0;  // RBF only; must be > 0 once training starts
  std::size_t cache_mb = 1024;

  bool operator==(const KernelSpec&) const = default;
};

std::string_view to_string(KernelKind k) noexcept;

/// Linear: x.z. RBF: exp(-gamma * |x - z|^2).
double kernel_eval(const KernelSpec& spec, const FeatureVector& x, const FeatureVector& z);

/// RBF form using precomputed squared norms.
inline double rbf_from_dot(double gamma, double xx, double zz, double xz) {
  const double d2 = xx + zz - 2.0 * xz;
  return std::exp(-gamma * (d2 > 0.0 ? d2 : 0.0));
}

/// 1 / (n_features * Var(X)), the variance taken over every entry of the
/// training matrix (zeros included). Falls back to 1 / n_features for a
/// constant matrix.
double scale_gamma(std::span<const FeatureVector> training);

}  // namespace hww2v

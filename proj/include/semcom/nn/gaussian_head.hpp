#pragma once

#include <span>
#include <vector>

#include "semcom/common.hpp"

namespace semcom::nn {

inline constexpr double kLogStdMin = -5.0;
inline constexpr double kLogStdMax = 2.0;
inline constexpr double kSquashEpsilon = 1e-6;

/// Diagonal Gaussian read from a network output laid out as [mean | log_std].
struct GaussianHead {
  std::vector<double> mean;
  std::vector<double> log_std;       // clamped to [kLogStdMin, kLogStdMax]
  std::vector<bool> log_std_active;  // false where the clamp saturated

  /// Splits a 2*dim output row. Throws StateError on odd length.
  static GaussianHead from_output(std::span<const double> net_output);
  int dim() const { return static_cast<int>(mean.size()); }
};

/// a = tanh(mean + std * noise) and its log-density, including the tanh
/// change-of-variables term sum log(1 - a^2 + eps).
struct SquashedSample {
  std::vector<double> noise;
  std::vector<double> pre_tanh;
  std::vector<double> action;
  double log_prob = 0.0;
};

SquashedSample squash_with_noise(const GaussianHead& head, std::span<const double> noise);
SquashedSample sample_squashed_gaussian(const GaussianHead& head, Rng& rng);
/// Deterministic evaluation action tanh(mean).
std::vector<double> squashed_mean(const GaussianHead& head);

/// Gradient with respect to the [mean | log_std] network output of
///   sum_i grad_action[i] * a_i + grad_log_prob * log_prob
/// holding the noise fixed (reparameterization).
std::vector<double> squashed_backward(const GaussianHead& head, const SquashedSample& sample,
                                      std::span<const double> grad_action, double grad_log_prob);

}  // namespace semcom::nn

#include "semcom/nn/gaussian_head.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace semcom::nn {

GaussianHead GaussianHead::from_output(std::span<const double> net_output) {
  if (net_output.size() % 2 != 0) throw StateError("gaussian head: output length must be even");
  const std::size_t dim = net_output.size() / 2;
  GaussianHead h;
  h.mean.assign(net_output.begin(), net_output.begin() + dim);
  h.log_std.resize(dim);
  h.log_std_active.resize(dim);
  for (std::size_t i = 0; i < dim; ++i) {
    const double raw = net_output[dim + i];
    h.log_std_active[i] = raw > kLogStdMin && raw < kLogStdMax;
    h.log_std[i] = std::isnan(raw) ? kLogStdMin : std::clamp(raw, kLogStdMin, kLogStdMax);
  }
  return h;
}

SquashedSample squash_with_noise(const GaussianHead& head, std::span<const double> noise) {
  const std::size_t dim = head.mean.size();
  if (noise.size() != dim) throw StateError("gaussian head: noise length mismatch");
  static const double kHalfLog2Pi = 0.5 * std::log(2.0 * std::numbers::pi);
  SquashedSample s;
  s.noise.assign(noise.begin(), noise.end());
  s.pre_tanh.resize(dim);
  s.action.resize(dim);
  double lp = 0.0;
  for (std::size_t i = 0; i < dim; ++i) {
    const double sd = std::exp(head.log_std[i]);
    s.pre_tanh[i] = head.mean[i] + sd * noise[i];
    s.action[i] = std::tanh(s.pre_tanh[i]);
    lp += -0.5 * noise[i] * noise[i] - head.log_std[i] - kHalfLog2Pi;
    lp -= std::log(1.0 - s.action[i] * s.action[i] + kSquashEpsilon);
  }
  s.log_prob = lp;
  return s;
}

SquashedSample sample_squashed_gaussian(const GaussianHead& head, Rng& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  std::vector<double> noise(head.mean.size());
  for (auto& z : noise) z = normal(rng);
  return squash_with_noise(head, noise);
}

std::vector<double> squashed_mean(const GaussianHead& head) {
  std::vector<double> a(head.mean.size());
  for (std::size_t i = 0; i < a.size(); ++i) a[i] = std::tanh(head.mean[i]);
  return a;
}

std::vector<double> squashed_backward(const GaussianHead& head, const SquashedSample& sample,
                                      std::span<const double> grad_action, double grad_log_prob) {
  const std::size_t dim = head.mean.size();
  std::vector<double> grad(2 * dim, 0.0);
  for (std::size_t i = 0; i < dim; ++i) {
    const double a = sample.action[i];
    const double one_minus = 1.0 - a * a;
    // d/du of -log(1 - tanh(u)^2 + eps)
    const double dcorr_du = 2.0 * a * one_minus / (one_minus + kSquashEpsilon);
    const double g_u = grad_action[i] * one_minus + grad_log_prob * dcorr_du;
    const double sd = std::exp(head.log_std[i]);
    grad[i] = g_u;
    // u = mean + exp(log_std) * noise, and log_prob has a direct -log_std term.
    const double g_log_std = g_u * sd * sample.noise[i] - grad_log_prob;
    grad[dim + i] = head.log_std_active[i] ? g_log_std : 0.0;
  }
  return grad;
}

}  // namespace semcom::nn

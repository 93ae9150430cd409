#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace semcom::nn {

struct AdamState {
  std::vector<double> first_moment;
  std::vector<double> second_moment;
  std::int64_t step = 0;
  double learning_rate = 3e-4;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;

  AdamState() = default;
  AdamState(std::size_t num_params, double lr)
      : first_moment(num_params, 0.0), second_moment(num_params, 0.0), learning_rate(lr) {}
};

/// Bias-corrected Adam update. Throws StateError on a shape mismatch.
void adam_step(std::span<double> params, std::span<const double> grads, AdamState& state);

}  // namespace semcom::nn

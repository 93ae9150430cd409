#pragma once

#include <memory>
#include <string>

#include "semcom/env_mdp.hpp"

namespace semcom::agents {

/// Uniformly random maximal matching over users with work, uniform depths.
class RandomPolicy : public Policy {
 public:
  Action act(const SemanticEnv& env, std::span<const double> observation, Rng& rng) override;
};

/// Random maximal matching, every task started at one fixed depth.
class FixedDepthPolicy : public Policy {
 public:
  explicit FixedDepthPolicy(int depth) : depth_(depth) {}
  Action act(const SemanticEnv& env, std::span<const double> observation, Rng& rng) override;
  int depth() const { return depth_; }

 private:
  int depth_;
};

/// Oldest head-of-line task first: each user takes its highest-gain free BS,
/// then the cheapest depth (in psi) predicted to finish within L_max at the
/// current rate with PSNR above the threshold. If no depth is predicted
/// feasible, the one with the lowest predicted psi-plus-hinge cost is used.
class GreedyPolicy : public Policy {
 public:
  Action act(const SemanticEnv& env, std::span<const double> observation, Rng& rng) override;
};

/// Parses "random", "greedy" or "fixed:<d>". Throws ConfigError otherwise.
std::unique_ptr<Policy> make_baseline(const std::string& kind, int max_depth);
bool is_baseline(const std::string& kind);

}  // namespace semcom::agents

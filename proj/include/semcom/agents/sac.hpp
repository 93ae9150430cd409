#pragma once

#include <random>
#include <span>
#include <string>
#include <vector>

#include "semcom/agents/replay_buffer.hpp"
#include "semcom/env_mdp.hpp"
#include "semcom/nn/adam.hpp"
#include "semcom/nn/mlp.hpp"

namespace semcom::agents {

struct SacConfig {
  std::vector<int> hidden = {128, 128};
  double gamma = 0.95;
  double tau = 0.005;    // target smoothing
  double alpha = 0.2;    // fixed entropy temperature
  double learning_rate = 3e-4;
  int batch_size = 256;
  std::size_t replay_capacity = 100000;
  int warmup_steps = 1000;
  int updates_per_step = 1;
  double reward_scale = 1.0;  // rewards are multiplied by this before storage

  void validate() const;
};

struct SacLosses {
  double critic1 = 0.0;
  double critic2 = 0.0;
  double actor = 0.0;
  double mean_q = 0.0;
  double entropy = 0.0;  // -mean log pi
};

/// Soft actor-critic with twin critics, target critics and a tanh-squashed
/// Gaussian policy over the raw action box [-1, 1]^d.
class SacAgent {
 public:
  SacAgent(int observation_dim, int action_dim, SacConfig cfg, Rng& init_rng);

  /// explore: reparameterized sample; otherwise tanh(mean).
  std::vector<double> select(std::span<const double> observation, bool explore, Rng& rng) const;

  /// One gradient step on both critics, then the actor, then the targets.
  /// Throws StateError on an empty batch or inconsistent widths.
  SacLosses update(std::span<const Transition* const> batch, Rng& rng);

  /// y = r + gamma * (1 - done) * (min(Qt1, Qt2)(s', a') - alpha * log pi(a'|s')),
  /// a' sampled fresh from the current policy.
  std::vector<double> critic_targets(std::span<const Transition* const> batch, Rng& rng) const;

  /// 0.5 * mean (Q_which(x) - y)^2 over rows x = observation | action.
  /// Accumulates the parameter gradient into `grad` unless it is empty.
  double critic_objective(int which, const nn::Matrix& input, std::span<const double> targets,
                          std::span<double> grad) const;
  /// One Adam step of critic `which` (0 or 1) on critic_objective. Returns
  /// the loss before the step.
  double fit_critic(int which, const nn::Matrix& input, std::span<const double> targets);

  struct ActorStats {
    double mean_q = 0.0;
    double mean_log_prob = 0.0;
  };
  /// mean(alpha * log pi(a|s) - min(Q1, Q2)(s, a)), a = tanh(mu + sigma * noise).
  /// Accumulates d/d(actor params) into `grad` unless it is empty.
  double actor_objective(const nn::Matrix& obs, const nn::Matrix& noise, std::span<double> grad,
                         ActorStats* stats = nullptr) const;

  /// target <- tau * online + (1 - tau) * target, entry-wise.
  void soft_update(double tau);

  const SacConfig& config() const { return cfg_; }
  int observation_dim() const { return obs_dim_; }
  int action_dim() const { return act_dim_; }
  const nn::Mlp& actor() const { return actor_; }
  const nn::Mlp& critic(int i) const { return i == 0 ? critic1_ : critic2_; }
  const nn::Mlp& target(int i) const { return i == 0 ? target1_ : target2_; }
  nn::Mlp& mutable_actor() { return actor_; }
  nn::Mlp& mutable_critic(int i) { return i == 0 ? critic1_ : critic2_; }
  nn::Mlp& mutable_target(int i) { return i == 0 ? target1_ : target2_; }

  void set_backend(nn::Backend b);

  /// Writes actor/critic/target networks into `dir` (created if needed).
  void save(const std::string& dir) const;
  /// Loads networks written by save(); throws ConfigError on a shape mismatch.
  void load(const std::string& dir);

 private:
  nn::Matrix joint_input(const nn::Matrix& obs, const nn::Matrix& act) const;

  int obs_dim_;
  int act_dim_;
  SacConfig cfg_;
  nn::Mlp actor_;
  nn::Mlp critic1_, critic2_;
  nn::Mlp target1_, target2_;
  nn::AdamState actor_opt_, critic1_opt_, critic2_opt_;
};

/// Policy adapter: SAC action projected onto the feasible set.
class SacPolicy : public Policy {
 public:
  SacPolicy(const SacAgent& agent, bool explore) : agent_(agent), explore_(explore) {}
  Action act(const SemanticEnv& env, std::span<const double> observation, Rng& rng) override;

 private:
  const SacAgent& agent_;
  bool explore_;
};

}  // namespace semcom::agents

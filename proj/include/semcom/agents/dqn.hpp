#pragma once

#include <span>
#include <string>
#include <vector>

#include "semcom/agents/replay_buffer.hpp"
#include "semcom/env_mdp.hpp"
#include "semcom/nn/adam.hpp"
#include "semcom/nn/mlp.hpp"

namespace semcom::agents {

struct DqnConfig {
  std::vector<int> hidden = {128, 128};
  double gamma = 0.95;
  double learning_rate = 3e-4;
  int batch_size = 256;
  std::size_t replay_capacity = 100000;
  int warmup_steps = 1000;
  int updates_per_step = 1;
  int target_sync_interval = 1000;  // env steps between hard target copies
  double epsilon_start = 1.0;
  double epsilon_end = 0.05;
  int epsilon_decay_steps = 20000;
  std::size_t max_joint_actions = 10000;
  double reward_scale = 1.0;

  void validate() const;
};

/// Every maximum one-to-one BS/user matching crossed with every per-user
/// depth tuple. Index = matching * I^N + depth tuple (user 0 most significant).
class JointActionSpace {
 public:
  /// Throws ConfigError when the joint count exceeds `limit`.
  JointActionSpace(int num_bs, int num_users, int max_depth, std::size_t limit);

  /// P(max(M,N), min(M,N)) * I^N, computed without enumerating.
  static double count(int num_bs, int num_users, int max_depth);

  std::size_t size() const { return matchings_.size() * depth_tuples_; }
  std::size_t num_matchings() const { return matchings_.size(); }
  std::size_t depth_tuples() const { return depth_tuples_; }
  /// Per user: serving BS or -1.
  const std::vector<std::vector<int>>& matchings() const { return matchings_; }

  Action decode(std::size_t index) const;

 private:
  int num_bs_;
  int num_users_;
  int max_depth_;
  std::size_t depth_tuples_ = 1;
  std::vector<std::vector<int>> matchings_;
};

struct DqnTransition {
  std::vector<double> observation;
  std::size_t action = 0;
  double reward = 0.0;
  std::vector<double> next_observation;
  bool done = false;
};

struct DqnLosses {
  double td_loss = 0.0;
  double mean_q = 0.0;
};

class DqnAgent {
 public:
  DqnAgent(int observation_dim, JointActionSpace space, DqnConfig cfg, Rng& init_rng);

  /// epsilon-greedy; the greedy branch takes the lowest index among ties.
  std::size_t select(std::span<const double> observation, double epsilon, Rng& rng) const;
  std::size_t greedy(std::span<const double> observation) const;
  /// Linear decay from epsilon_start to epsilon_end over epsilon_decay_steps.
  double epsilon_at(std::int64_t step) const;

  /// y = r + gamma * (1 - done) * max_a Q_target(s', a); squared TD loss.
  DqnLosses update(std::span<const DqnTransition* const> batch);
  void sync_target();

  const DqnConfig& config() const { return cfg_; }
  const JointActionSpace& space() const { return space_; }
  const nn::Mlp& q_network() const { return q_; }
  const nn::Mlp& target_network() const { return target_; }
  nn::Mlp& mutable_q_network() { return q_; }
  int observation_dim() const { return obs_dim_; }

  void save(const std::string& dir) const;
  void load(const std::string& dir);

 private:
  int obs_dim_;
  JointActionSpace space_;
  DqnConfig cfg_;
  nn::Mlp q_;
  nn::Mlp target_;
  nn::AdamState opt_;
};

class DqnPolicy : public Policy {
 public:
  DqnPolicy(const DqnAgent& agent, double epsilon) : agent_(agent), epsilon_(epsilon) {}
  Action act(const SemanticEnv& env, std::span<const double> observation, Rng& rng) override;

 private:
  const DqnAgent& agent_;
  double epsilon_;
};

}  // namespace semcom::agents

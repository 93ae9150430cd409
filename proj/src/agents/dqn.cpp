#include "semcom/agents/dqn.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <functional>

namespace semcom::agents {

void DqnConfig::validate() const {
  if (!(gamma >= 0.0 && gamma < 1.0)) throw ConfigError("dqn.gamma must lie in [0, 1)");
  if (!(learning_rate > 0.0)) throw ConfigError("dqn.learning_rate must be > 0");
  if (batch_size < 1) throw ConfigError("dqn.batch_size must be >= 1");
  if (replay_capacity < 1) throw ConfigError("dqn.replay_capacity must be >= 1");
  if (warmup_steps < 0) throw ConfigError("dqn.warmup_steps must be >= 0");
  if (updates_per_step < 0) throw ConfigError("dqn.updates_per_step must be >= 0");
  if (target_sync_interval < 1) throw ConfigError("dqn.target_sync_interval must be >= 1");
  if (!(epsilon_start >= 0.0 && epsilon_start <= 1.0) || !(epsilon_end >= 0.0 && epsilon_end <= 1.0)) {
    throw ConfigError("dqn epsilon bounds must lie in [0, 1]");
  }
  if (epsilon_decay_steps < 0) throw ConfigError("dqn.epsilon_decay_steps must be >= 0");
  if (!(reward_scale > 0.0)) throw ConfigError("dqn.reward_scale must be > 0");
  for (int h : hidden) {
    if (h < 1) throw ConfigError("dqn.hidden widths must be positive");
  }
}

double JointActionSpace::count(int num_bs, int num_users, int max_depth) {
  const int hi = std::max(num_bs, num_users);
  const int lo = std::min(num_bs, num_users);
  double matchings = 1.0;
  for (int i = 0; i < lo; ++i) matchings *= hi - i;
  return matchings * std::pow(static_cast<double>(max_depth), num_users);
}

JointActionSpace::JointActionSpace(int num_bs, int num_users, int max_depth, std::size_t limit)
    : num_bs_(num_bs), num_users_(num_users), max_depth_(max_depth) {
  const double total = count(num_bs, num_users, max_depth);
  if (total > static_cast<double>(limit)) {
    throw ConfigError("dqn: joint action space has " + std::to_string(static_cast<long long>(total)) +
                      " actions, above the limit of " + std::to_string(limit) +
                      "; use the sac agent for this configuration");
  }
  for (int n = 0; n < num_users; ++n) depth_tuples_ *= static_cast<std::size_t>(max_depth);

  const int target = std::min(num_bs, num_users);
  std::vector<int> current(num_users, -1);
  std::vector<bool> used(num_bs, false);
  std::function<void(int, int)> rec = [&](int user, int matched) {
    if (user == num_users) {
      if (matched == target) matchings_.push_back(current);
      return;
    }
    for (int m = 0; m < num_bs; ++m) {
      if (used[m]) continue;
      used[m] = true;
      current[user] = m;
      rec(user + 1, matched + 1);
      used[m] = false;
    }
    current[user] = -1;
    // Leaving this user out only helps when enough users remain to fill the matching.
    if (num_users - user - 1 >= target - matched) rec(user + 1, matched);
  };
  rec(0, 0);
}

Action JointActionSpace::decode(std::size_t index) const {
  if (index >= size()) throw StateError("joint action index out of range");
  const auto& matching = matchings_[index / depth_tuples_];
  std::size_t tuple = index % depth_tuples_;
  Action a{AssociationMatrix(num_bs_, num_users_), std::vector<int>(num_users_, 1)};
  for (int n = num_users_ - 1; n >= 0; --n) {
    a.depth[n] = static_cast<int>(tuple % max_depth_) + 1;
    tuple /= max_depth_;
  }
  for (int n = 0; n < num_users_; ++n) {
    if (matching[n] >= 0) a.assoc.link(matching[n], n);
  }
  return a;
}

namespace {

std::vector<int> layer_dims(int in, const std::vector<int>& hidden, int out) {
  std::vector<int> dims{in};
  dims.insert(dims.end(), hidden.begin(), hidden.end());
  dims.push_back(out);
  return dims;
}

std::size_t argmax(std::span<const double> v) {
  return static_cast<std::size_t>(std::max_element(v.begin(), v.end()) - v.begin());
}

}  // namespace

DqnAgent::DqnAgent(int observation_dim, JointActionSpace space, DqnConfig cfg, Rng& init_rng)
    : obs_dim_(observation_dim), space_(std::move(space)), cfg_(std::move(cfg)) {
  cfg_.validate();
  q_ = nn::Mlp::initialized(layer_dims(obs_dim_, cfg_.hidden, static_cast<int>(space_.size())),
                            nn::Activation::Relu, nn::Activation::Identity, init_rng);
  target_ = q_;
  opt_ = nn::AdamState(q_.num_parameters(), cfg_.learning_rate);
}

std::size_t DqnAgent::greedy(std::span<const double> observation) const {
  return argmax(q_.forward(observation));
}

std::size_t DqnAgent::select(std::span<const double> observation, double epsilon, Rng& rng) const {
  std::uniform_real_distribution<double> coin(0.0, 1.0);
  if (epsilon > 0.0 && coin(rng) < epsilon) {
    std::uniform_int_distribution<std::size_t> pick(0, space_.size() - 1);
    return pick(rng);
  }
  return greedy(observation);
}

double DqnAgent::epsilon_at(std::int64_t step) const {
  if (cfg_.epsilon_decay_steps <= 0 || step >= cfg_.epsilon_decay_steps) return cfg_.epsilon_end;
  const double frac = static_cast<double>(step) / cfg_.epsilon_decay_steps;
  return cfg_.epsilon_start + frac * (cfg_.epsilon_end - cfg_.epsilon_start);
}

DqnLosses DqnAgent::update(std::span<const DqnTransition* const> batch) {
  if (batch.empty()) throw StateError("dqn update: empty batch");
  const int rows = static_cast<int>(batch.size());
  nn::Matrix obs(rows, obs_dim_), next(rows, obs_dim_);
  for (int r = 0; r < rows; ++r) {
    if (static_cast<int>(batch[r]->observation.size()) != obs_dim_ ||
        static_cast<int>(batch[r]->next_observation.size()) != obs_dim_) {
      throw StateError("dqn update: observation width mismatch");
    }
    std::copy(batch[r]->observation.begin(), batch[r]->observation.end(), obs.row(r).begin());
    std::copy(batch[r]->next_observation.begin(), batch[r]->next_observation.end(),
              next.row(r).begin());
  }
  const nn::Matrix q_next = target_.forward(next);
  nn::Mlp::Cache cache;
  const nn::Matrix q = q_.forward(obs, &cache);
  nn::Matrix grad(rows, q.cols);
  DqnLosses out;
  for (int r = 0; r < rows; ++r) {
    const auto& t = *batch[r];
    const auto next_row = q_next.row(r);
    const double best = *std::max_element(next_row.begin(), next_row.end());
    const double y = t.reward + cfg_.gamma * (t.done ? 0.0 : 1.0) * best;
    const double diff = q(r, static_cast<int>(t.action)) - y;
    out.td_loss += 0.5 * diff * diff;
    out.mean_q += q(r, static_cast<int>(t.action));
    grad(r, static_cast<int>(t.action)) = diff / rows;
  }
  std::vector<double> grads(q_.num_parameters(), 0.0);
  q_.backward(cache, grad, grads, false);
  nn::adam_step(q_.mutable_parameters(), grads, opt_);
  out.td_loss /= rows;
  out.mean_q /= rows;
  return out;
}

void DqnAgent::sync_target() { target_.copy_parameters_from(q_); }

void DqnAgent::save(const std::string& dir) const {
  std::filesystem::create_directories(dir);
  q_.save_file(dir + "/q.mlp");
  target_.save_file(dir + "/q_target.mlp");
}

void DqnAgent::load(const std::string& dir) {
  for (auto [net, name] : {std::pair{&q_, "q.mlp"}, std::pair{&target_, "q_target.mlp"}}) {
    nn::Mlp loaded = nn::Mlp::load_file(dir + "/" + name);
    if (!loaded.same_architecture(*net)) {
      throw ConfigError(std::string("checkpoint ") + name + " does not match the configured network");
    }
    *net = std::move(loaded);
  }
}

Action DqnPolicy::act(const SemanticEnv&, std::span<const double> observation, Rng& rng) {
  return agent_.space().decode(agent_.select(observation, epsilon_, rng));
}

}  // namespace semcom::agents

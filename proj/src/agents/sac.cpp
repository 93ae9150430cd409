#include "semcom/agents/sac.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>

#include "semcom/nn/gaussian_head.hpp"

namespace semcom::agents {

namespace {

std::vector<int> layer_dims(int in, const std::vector<int>& hidden, int out) {
  std::vector<int> dims{in};
  dims.insert(dims.end(), hidden.begin(), hidden.end());
  dims.push_back(out);
  return dims;
}

nn::Matrix stack_rows(std::span<const Transition* const> batch, bool next, int width) {
  nn::Matrix m(static_cast<int>(batch.size()), width);
  for (int r = 0; r < m.rows; ++r) {
    const auto& src = next ? batch[r]->next_observation : batch[r]->observation;
    if (static_cast<int>(src.size()) != width) throw StateError("sac: observation width mismatch");
    std::copy(src.begin(), src.end(), m.row(r).begin());
  }
  return m;
}

}  // namespace

void SacConfig::validate() const {
  if (!(gamma >= 0.0 && gamma < 1.0)) throw ConfigError("sac.gamma must lie in [0, 1)");
  if (!(tau > 0.0 && tau <= 1.0)) throw ConfigError("sac.tau must lie in (0, 1]");
  if (!(alpha >= 0.0)) throw ConfigError("sac.alpha must be >= 0");
  if (!(learning_rate > 0.0)) throw ConfigError("sac.learning_rate must be > 0");
  if (batch_size < 1) throw ConfigError("sac.batch_size must be >= 1");
  if (replay_capacity < 1) throw ConfigError("sac.replay_capacity must be >= 1");
  if (warmup_steps < 0) throw ConfigError("sac.warmup_steps must be >= 0");
  if (updates_per_step < 0) throw ConfigError("sac.updates_per_step must be >= 0");
  if (!(reward_scale > 0.0)) throw ConfigError("sac.reward_scale must be > 0");
  for (int h : hidden) {
    if (h < 1) throw ConfigError("sac.hidden widths must be positive");
  }
}

SacAgent::SacAgent(int observation_dim, int action_dim, SacConfig cfg, Rng& init_rng)
    : obs_dim_(observation_dim), act_dim_(action_dim), cfg_(std::move(cfg)) {
  cfg_.validate();
  using nn::Activation;
  actor_ = nn::Mlp::initialized(layer_dims(obs_dim_, cfg_.hidden, 2 * act_dim_), Activation::Relu,
                                Activation::Identity, init_rng);
  const auto critic_dims = layer_dims(obs_dim_ + act_dim_, cfg_.hidden, 1);
  critic1_ = nn::Mlp::initialized(critic_dims, Activation::Relu, Activation::Identity, init_rng);
  critic2_ = nn::Mlp::initialized(critic_dims, Activation::Relu, Activation::Identity, init_rng);
  target1_ = critic1_;
  target2_ = critic2_;
  actor_opt_ = nn::AdamState(actor_.num_parameters(), cfg_.learning_rate);
  critic1_opt_ = nn::AdamState(critic1_.num_parameters(), cfg_.learning_rate);
  critic2_opt_ = nn::AdamState(critic2_.num_parameters(), cfg_.learning_rate);
}

void SacAgent::set_backend(nn::Backend b) {
  for (nn::Mlp* net : {&actor_, &critic1_, &critic2_, &target1_, &target2_}) net->set_backend(b);
}

std::vector<double> SacAgent::select(std::span<const double> observation, bool explore,
                                     Rng& rng) const {
  const auto out = actor_.forward(observation);
  const auto head = nn::GaussianHead::from_output(out);
  if (!explore) return nn::squashed_mean(head);
  return nn::sample_squashed_gaussian(head, rng).action;
}

nn::Matrix SacAgent::joint_input(const nn::Matrix& obs, const nn::Matrix& act) const {
  nn::Matrix x(obs.rows, obs_dim_ + act_dim_);
  for (int r = 0; r < obs.rows; ++r) {
    auto dst = x.row(r);
    std::copy(obs.row(r).begin(), obs.row(r).end(), dst.begin());
    std::copy(act.row(r).begin(), act.row(r).end(), dst.begin() + obs_dim_);
  }
  return x;
}

std::vector<double> SacAgent::critic_targets(std::span<const Transition* const> batch,
                                             Rng& rng) const {
  const int rows = static_cast<int>(batch.size());
  const nn::Matrix next_obs = stack_rows(batch, true, obs_dim_);
  const nn::Matrix heads = actor_.forward(next_obs);
  nn::Matrix next_act(rows, act_dim_);
  std::vector<double> next_logp(rows);
  for (int r = 0; r < rows; ++r) {
    const auto head = nn::GaussianHead::from_output(heads.row(r));
    const auto s = nn::sample_squashed_gaussian(head, rng);
    std::copy(s.action.begin(), s.action.end(), next_act.row(r).begin());
    next_logp[r] = s.log_prob;
  }
  const nn::Matrix x = joint_input(next_obs, next_act);
  const nn::Matrix q1 = target1_.forward(x);
  const nn::Matrix q2 = target2_.forward(x);
  std::vector<double> y(rows);
  for (int r = 0; r < rows; ++r) {
    const Transition& t = *batch[r];
    const double soft_v = std::min(q1(r, 0), q2(r, 0)) - cfg_.alpha * next_logp[r];
    y[r] = t.reward + cfg_.gamma * (t.done ? 0.0 : 1.0) * soft_v;
  }
  return y;
}

double SacAgent::critic_objective(int which, const nn::Matrix& input,
                                  std::span<const double> targets, std::span<double> grad) const {
  if (input.rows != static_cast<int>(targets.size()) || input.cols != obs_dim_ + act_dim_) {
    throw StateError("critic_objective: input and targets disagree");
  }
  const nn::Mlp& net = critic(which);
  const int rows = input.rows;
  nn::Mlp::Cache cache;
  const nn::Matrix q = net.forward(input, &cache);
  nn::Matrix g(rows, 1);
  double loss = 0.0;
  for (int r = 0; r < rows; ++r) {
    const double diff = q(r, 0) - targets[r];
    loss += 0.5 * diff * diff;
    g(r, 0) = diff / rows;
  }
  if (!grad.empty()) net.backward(cache, g, grad, false);
  return loss / rows;
}

double SacAgent::fit_critic(int which, const nn::Matrix& input, std::span<const double> targets) {
  nn::Mlp& net = which == 0 ? critic1_ : critic2_;
  nn::AdamState& opt = which == 0 ? critic1_opt_ : critic2_opt_;
  std::vector<double> grads(net.num_parameters(), 0.0);
  const double loss = critic_objective(which, input, targets, grads);
  nn::adam_step(net.mutable_parameters(), grads, opt);
  return loss;
}

double SacAgent::actor_objective(const nn::Matrix& obs, const nn::Matrix& noise,
                                 std::span<double> grad, ActorStats* stats) const {
  const int rows = obs.rows;
  if (obs.cols != obs_dim_ || noise.rows != rows || noise.cols != act_dim_ || rows == 0) {
    throw StateError("actor_objective: observation and noise shapes disagree");
  }
  const double inv_rows = 1.0 / rows;
  nn::Mlp::Cache actor_cache;
  const nn::Matrix heads_out = actor_.forward(obs, &actor_cache);
  std::vector<nn::GaussianHead> heads;
  std::vector<nn::SquashedSample> samples;
  heads.reserve(rows);
  samples.reserve(rows);
  nn::Matrix new_act(rows, act_dim_);
  for (int r = 0; r < rows; ++r) {
    heads.push_back(nn::GaussianHead::from_output(heads_out.row(r)));
    samples.push_back(nn::squash_with_noise(heads.back(), noise.row(r)));
    std::copy(samples.back().action.begin(), samples.back().action.end(), new_act.row(r).begin());
  }
  const nn::Matrix xa = joint_input(obs, new_act);
  nn::Mlp::Cache c1_cache, c2_cache;
  const nn::Matrix q1 = critic1_.forward(xa, &c1_cache);
  const nn::Matrix q2 = critic2_.forward(xa, &c2_cache);
  nn::Matrix g1(rows, 1), g2(rows, 1);
  double loss = 0.0, mean_q = 0.0, mean_logp = 0.0;
  for (int r = 0; r < rows; ++r) {
    const bool first = q1(r, 0) <= q2(r, 0);
    const double qmin = first ? q1(r, 0) : q2(r, 0);
    (first ? g1 : g2)(r, 0) = -inv_rows;
    loss += cfg_.alpha * samples[r].log_prob - qmin;
    mean_q += qmin;
    mean_logp += samples[r].log_prob;
  }
  if (stats) {
    stats->mean_q = mean_q * inv_rows;
    stats->mean_log_prob = mean_logp * inv_rows;
  }
  if (grad.empty()) return loss * inv_rows;

  const nn::Matrix gx1 = critic1_.backward(c1_cache, g1, {});
  const nn::Matrix gx2 = critic2_.backward(c2_cache, g2, {});
  nn::Matrix grad_heads(rows, 2 * act_dim_);
  std::vector<double> grad_a(act_dim_);
  for (int r = 0; r < rows; ++r) {
    for (int j = 0; j < act_dim_; ++j) grad_a[j] = gx1(r, obs_dim_ + j) + gx2(r, obs_dim_ + j);
    const auto g = nn::squashed_backward(heads[r], samples[r], grad_a, cfg_.alpha * inv_rows);
    std::copy(g.begin(), g.end(), grad_heads.row(r).begin());
  }
  actor_.backward(actor_cache, grad_heads, grad, false);
  return loss * inv_rows;
}

SacLosses SacAgent::update(std::span<const Transition* const> batch, Rng& rng) {
  if (batch.empty()) throw StateError("sac update: empty batch");
  const int rows = static_cast<int>(batch.size());
  SacLosses losses;

  const nn::Matrix obs = stack_rows(batch, false, obs_dim_);
  nn::Matrix act(rows, act_dim_);
  for (int r = 0; r < rows; ++r) {
    if (static_cast<int>(batch[r]->action.size()) != act_dim_) {
      throw StateError("sac update: action width mismatch");
    }
    std::copy(batch[r]->action.begin(), batch[r]->action.end(), act.row(r).begin());
  }

  // Critics: minimize 0.5 * (Q - y)^2 over the batch.
  const auto y = critic_targets(batch, rng);
  const nn::Matrix x = joint_input(obs, act);
  losses.critic1 = fit_critic(0, x, y);
  losses.critic2 = fit_critic(1, x, y);

  // Actor: one noise row per sample, drawn in the same order as
  // sample_squashed_gaussian would.
  nn::Matrix noise(rows, act_dim_);
  for (int r = 0; r < rows; ++r) {
    std::normal_distribution<double> normal(0.0, 1.0);
    for (int j = 0; j < act_dim_; ++j) noise(r, j) = normal(rng);
  }
  std::vector<double> actor_grads(actor_.num_parameters(), 0.0);
  ActorStats stats;
  losses.actor = actor_objective(obs, noise, actor_grads, &stats);
  nn::adam_step(actor_.mutable_parameters(), actor_grads, actor_opt_);

  soft_update(cfg_.tau);

  losses.mean_q = stats.mean_q;
  losses.entropy = -stats.mean_log_prob;
  return losses;
}

void SacAgent::soft_update(double tau) {
  auto blend = [tau](nn::Mlp& target, const nn::Mlp& online) {
    auto dst = target.mutable_parameters();
    const auto src = online.parameters();
    if (tau == 1.0) {
      std::copy(src.begin(), src.end(), dst.begin());
      return;
    }
    for (std::size_t i = 0; i < dst.size(); ++i) dst[i] = tau * src[i] + (1.0 - tau) * dst[i];
  };
  blend(target1_, critic1_);
  blend(target2_, critic2_);
}

void SacAgent::save(const std::string& dir) const {
  std::filesystem::create_directories(dir);
  actor_.save_file(dir + "/actor.mlp");
  critic1_.save_file(dir + "/critic1.mlp");
  critic2_.save_file(dir + "/critic2.mlp");
  target1_.save_file(dir + "/target1.mlp");
  target2_.save_file(dir + "/target2.mlp");
}

void SacAgent::load(const std::string& dir) {
  auto load_into = [&](nn::Mlp& net, const std::string& name) {
    nn::Mlp loaded = nn::Mlp::load_file(dir + "/" + name);
    if (!loaded.same_architecture(net)) {
      throw ConfigError("checkpoint " + name + " does not match the configured network shape");
    }
    loaded.set_backend(net.backend());
    net = std::move(loaded);
  };
  load_into(actor_, "actor.mlp");
  load_into(critic1_, "critic1.mlp");
  load_into(critic2_, "critic2.mlp");
  load_into(target1_, "target1.mlp");
  load_into(target2_, "target2.mlp");
}

Action SacPolicy::act(const SemanticEnv& env, std::span<const double> observation, Rng& rng) {
  const auto raw = agent_.select(observation, explore_, rng);
  return env.project(raw);
}

}  // namespace semcom::agents

#include "semcom/env_mdp.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>

namespace semcom {

namespace {

// Floor for the start-of-service SINR in dB; keeps PSNR finite on a zero fade.
constexpr double kMinSnrDb = -50.0;
constexpr std::uint64_t kCalibrationSeed = 0x5eed5ca1eULL;

double max_gflops(const DepthProfile& p) { return p.entries.back().gflops; }
double max_payload(const DepthProfile& p) {
  return static_cast<double>(p.entries.front().payload_bits);
}

// Waiting age in units of L_max, saturating so a long backlog cannot blow up
// the network inputs.
double age_feature(std::int64_t age, double l_max) {
  return std::min(static_cast<double>(age) / l_max, kAgeFeatureCap);
}

bool all_tasks_done(const EnvState& s, const ArrivalProcess& arrival) {
  for (std::size_t n = 0; n < s.queues.size(); ++n) {
    if (s.generated[n] < arrival.cap_per_user || s.queues[n].has_work()) return false;
  }
  return true;
}

}  // namespace

void EnvConfig::validate() const {
  network.validate();
  validate_profile(profile);
  arrival.validate();
  if (l_max < 1) throw ConfigError("env.l_max must be >= 1");
  if (!std::isfinite(psnr_min_db)) throw ConfigError("env.psnr_min_db must be finite");
  if (max_slots < 1) throw ConfigError("env.max_slots must be >= 1");
  if (!std::isfinite(channel_scale)) throw ConfigError("env.channel_scale must be finite");
}

double calibrate_channel_scale(const NetworkConfig& cfg, int samples) {
  Rng rng(kCalibrationSeed);
  std::vector<double> gains;
  gains.reserve(samples);
  while (static_cast<int>(gains.size()) < samples) {
    const auto placement = place_nodes(rng, cfg);
    const auto ch = draw_channel(rng, placement, cfg);
    for (double g : ch.power_gain) {
      if (static_cast<int>(gains.size()) < samples) gains.push_back(g);
    }
  }
  const auto k = static_cast<std::size_t>(0.99 * (gains.size() - 1));
  std::nth_element(gains.begin(), gains.begin() + k, gains.end());
  return std::max(std::log1p(gains[k]), 1e-12);
}

int observation_dim(const EnvConfig& cfg) {
  const int m = cfg.network.num_bs;
  const int n = cfg.network.num_users;
  return m * n + 4 * n + 2;
}

int raw_action_dim(const EnvConfig& cfg) {
  return cfg.network.num_bs * cfg.network.num_users + cfg.network.num_users;
}

std::vector<double> observe(const EnvState& state, const EnvConfig& cfg) {
  const int m_count = cfg.network.num_bs;
  const int n_count = cfg.network.num_users;
  std::vector<double> obs;
  obs.reserve(observation_dim(cfg));

  const double scale = cfg.channel_scale > 0.0 ? cfg.channel_scale : 1.0;
  for (int m = 0; m < m_count; ++m) {
    for (int n = 0; n < n_count; ++n) {
      const double g = state.channel.power_gain.empty() ? 0.0 : state.channel.gain(m, n);
      obs.push_back(std::log1p(g) / scale);
    }
  }

  const double payload_scale = max_payload(cfg.profile);
  const double l_max = static_cast<double>(cfg.l_max);
  for (int n = 0; n < n_count; ++n) {
    static const UserQueue kEmpty{};
    const UserQueue& q = state.queues.empty() ? kEmpty : state.queues[n];
    obs.push_back(std::min(static_cast<double>(q.pending.size()) / 10.0, 1.0));
    if (q.serving) {
      obs.push_back(static_cast<double>(q.serving->payload_remaining_bits) / payload_scale);
      obs.push_back(age_feature(state.slot - q.serving->arrival_slot, l_max));
      obs.push_back(1.0);
    } else {
      obs.push_back(0.0);
      obs.push_back(q.pending.empty() ? 0.0
                                      : age_feature(state.slot - q.pending.front().arrival_slot, l_max));
      obs.push_back(0.0);
    }
  }

  obs.push_back(state.slot_compute / (n_count * max_gflops(cfg.profile)));
  obs.push_back(state.slot_comm / (n_count * payload_scale));
  return obs;
}

int depth_from_raw(double v, int max_depth) {
  if (std::isnan(v)) v = 0.0;
  v = std::clamp(v, -1.0, 1.0);
  const int bin = static_cast<int>(std::floor((v + 1.0) / 2.0 * max_depth)) + 1;
  return std::clamp(bin, 1, max_depth);
}

Action project_action(std::span<const double> raw, const EnvState& state, const EnvConfig& cfg) {
  const int m_count = cfg.network.num_bs;
  const int n_count = cfg.network.num_users;
  if (static_cast<int>(raw.size()) != raw_action_dim(cfg)) {
    throw StateError("project_action: raw action has wrong length");
  }

  struct Candidate {
    double score;
    int bs;
    int user;
  };
  std::vector<Candidate> candidates;
  candidates.reserve(static_cast<std::size_t>(m_count) * n_count);
  for (int m = 0; m < m_count; ++m) {
    for (int n = 0; n < n_count; ++n) {
      const bool eligible = !state.queues.empty() && state.queues[n].has_work();
      if (!eligible) continue;
      double s = raw[static_cast<std::size_t>(m) * n_count + n];
      if (std::isnan(s)) s = -1.0;
      candidates.push_back({std::clamp(s, -1.0, 1.0), m, n});
    }
  }
  // Stable sort keeps the (bs, user) row-major order among equal scores.
  std::stable_sort(candidates.begin(), candidates.end(),
                   [](const Candidate& a, const Candidate& b) { return a.score > b.score; });

  Action action{AssociationMatrix(m_count, n_count), std::vector<int>(n_count, 1)};
  std::vector<bool> bs_used(m_count, false);
  std::vector<bool> user_used(n_count, false);
  for (const auto& c : candidates) {
    if (bs_used[c.bs] || user_used[c.user]) continue;
    action.assoc.link(c.bs, c.user);
    bs_used[c.bs] = true;
    user_used[c.user] = true;
  }

  const int max_depth = cfg.profile.max_depth();
  for (int n = 0; n < n_count; ++n) {
    action.depth[n] = depth_from_raw(raw[static_cast<std::size_t>(m_count) * n_count + n],
                                     max_depth);
  }
  return action;
}

SemanticEnv::SemanticEnv(EnvConfig cfg) : cfg_(std::move(cfg)) {
  cfg_.validate();
  if (cfg_.channel_scale <= 0.0) cfg_.channel_scale = calibrate_channel_scale(cfg_.network);
}

std::vector<double> SemanticEnv::reset(Rng& rng) {
  state_ = EnvState{};
  state_.placement = place_nodes(rng, cfg_.network);
  state_.channel = draw_channel(rng, state_.placement, cfg_.network, 0);
  state_.queues.assign(cfg_.network.num_users, UserQueue{});
  state_.generated.assign(cfg_.network.num_users, 0);
  initialized_ = true;
  return observe();
}

std::vector<double> SemanticEnv::restore(EnvState state) {
  const int m = cfg_.network.num_bs, n = cfg_.network.num_users;
  if (state.channel.num_bs != m || state.channel.num_users != n ||
      state.channel.power_gain.size() != static_cast<std::size_t>(m) * n ||
      static_cast<int>(state.queues.size()) != n || static_cast<int>(state.generated.size()) != n) {
    throw StateError("restore: state shape does not match the environment config");
  }
  state_ = std::move(state);
  initialized_ = true;
  return observe();
}

StepResult SemanticEnv::step(const Action& action, Rng& rng) {
  if (!initialized_) throw StateError("step: reset() has not been called");
  if (state_.done()) throw StateError("step: episode is finished");
  const int m_count = cfg_.network.num_bs;
  const int n_count = cfg_.network.num_users;
  if (action.assoc.num_bs() != m_count || action.assoc.num_users() != n_count ||
      static_cast<int>(action.depth.size()) != n_count || !action.assoc.feasible()) {
    throw StateError("step: action is malformed or violates the one-to-one constraints");
  }

  StepResult result;
  StepInfo& info = result.info;
  info.slot = state_.slot;

  // Links to users without work carry nothing and the BS stays silent.
  AssociationMatrix assoc(m_count, n_count);
  for (int n = 0; n < n_count; ++n) {
    const auto m = action.assoc.bs_of(n);
    if (m && state_.queues[n].has_work()) assoc.link(*m, n);
  }

  // (1) rates from the current channel.
  const auto sinr = link_sinr(state_.channel, assoc, cfg_.network);

  // (2) start head-of-line tasks on associated, idle users.
  double slot_compute = 0.0;
  double slot_comm = 0.0;
  for (int n = 0; n < n_count; ++n) {
    auto& q = state_.queues[n];
    const auto m = assoc.bs_of(n);
    if (!m || q.serving || q.pending.empty()) continue;
    Task task = std::move(q.pending.front());
    q.pending.pop_front();
    const int depth = action.depth[n];
    const double snr_db = sinr[n] > 0.0 ? std::max(10.0 * std::log10(sinr[n]), kMinSnrDb) : kMinSnrDb;
    start_service(task, depth, cfg_.profile, cfg_.weights, snr_db, state_.slot);
    info.starts.push_back({task.id, n, *m, depth, task.sccm_value, snr_db, task.psnr_db,
                           task.arrival_slot, task.payload_total_bits});
    info.charged_sccm += task.sccm_value;
    slot_compute += cfg_.profile.at(depth).gflops;
    slot_comm += static_cast<double>(task.payload_total_bits);
    q.serving = std::move(task);
  }

  for (const auto& q : state_.queues) {
    for (const auto& t : q.pending) info.overdue_tasks += state_.slot - t.arrival_slot > cfg_.l_max;
    if (q.serving) info.overdue_tasks += state_.slot - q.serving->arrival_slot > cfg_.l_max;
  }

  // (3) drain and (4) settle completions.
  for (int n = 0; n < n_count; ++n) {
    auto& q = state_.queues[n];
    if (!q.serving || !assoc.bs_of(n)) continue;
    const auto bits = bits_per_slot(std::log2(1.0 + sinr[n]), cfg_.network);
    const auto tx = transmit(*q.serving, bits, state_.slot);
    info.drains.push_back({q.serving->id, tx.drained_bits});
    if (!tx.completed) continue;
    const Task& t = *q.serving;
    TaskCompletion c;
    c.task_id = t.id;
    c.user = n;
    c.depth = *t.depth;
    c.delay = delay(t);
    c.psnr_db = t.psnr_db;
    c.delay_hinge = hinge(static_cast<double>(c.delay - cfg_.l_max));
    c.psnr_hinge = hinge(cfg_.psnr_min_db - t.psnr_db);
    c.payload_total_bits = t.payload_total_bits;
    info.delay_penalty += c.delay_hinge;
    info.psnr_penalty += c.psnr_hinge;
    info.delay_violations += c.delay_hinge > 0.0 ? 1 : 0;
    info.psnr_violations += c.psnr_hinge > 0.0 ? 1 : 0;
    info.completions.push_back(c);
    q.serving.reset();
    ++state_.tasks_completed;
  }

  // (5) reward: psi charged at start, hinge penalties charged at completion.
  result.reward = -(info.charged_sccm + info.delay_penalty + info.psnr_penalty);
  info.slot_compute = slot_compute;
  info.slot_comm = slot_comm;
  state_.slot_compute = slot_compute;
  state_.slot_comm = slot_comm;
  state_.cum_sccm += info.charged_sccm;
  state_.cum_reward += result.reward;

  // (6) arrivals become visible in the next slot; (7) block fading redraw.
  ++state_.slot;
  auto arrivals = sample_arrivals(rng, cfg_.arrival, state_.slot, state_.generated,
                                  state_.next_task_id);
  info.arrivals = static_cast<int>(arrivals.size());
  for (auto& t : arrivals) state_.queues[t.user].pending.push_back(std::move(t));
  state_.channel = draw_channel(rng, state_.placement, cfg_.network, state_.slot);

  // (8) termination.
  if (all_tasks_done(state_, cfg_.arrival)) {
    state_.termination = Termination::AllTasksDone;
  } else if (state_.slot >= cfg_.max_slots) {
    state_.termination = Termination::MaxSlots;
  }
  info.termination = state_.termination;
  result.done = state_.done();
  result.observation = observe();
  return result;
}

double accrued_reward(const StepInfo& info, const EnvConfig& cfg) {
  double psnr_penalty = 0.0;
  for (const auto& s : info.starts) psnr_penalty += hinge(cfg.psnr_min_db - s.psnr_db);
  return -(info.charged_sccm + static_cast<double>(info.overdue_tasks) + psnr_penalty);
}

EpisodeLog run_episode(Policy& policy, const EnvConfig& cfg, Rng& rng) {
  Rng env_rng(rng());
  Rng policy_rng(rng());
  SemanticEnv env(cfg);
  auto obs = env.reset(env_rng);

  EpisodeLog log;
  std::map<std::int64_t, std::size_t> task_index;
  double depth_sum = 0.0;
  for (;;) {
    const Action action = policy.act(env, obs, policy_rng);
    StepResult r = env.step(action, env_rng);
    const StepInfo& info = r.info;

    SlotRecord rec;
    rec.slot = info.slot;
    rec.reward = r.reward;
    rec.compute = info.slot_compute;
    rec.comm = info.slot_comm;
    rec.charged_sccm = info.charged_sccm;
    rec.delay_penalty = info.delay_penalty;
    rec.psnr_penalty = info.psnr_penalty;
    rec.starts = static_cast<int>(info.starts.size());
    rec.completions = static_cast<int>(info.completions.size());
    log.slots.push_back(rec);

    for (const auto& s : info.starts) {
      TaskRecord t;
      t.id = s.task_id;
      t.user = s.user;
      t.depth = s.depth;
      t.arrival_slot = s.arrival_slot;
      t.start_slot = info.slot;
      t.sccm = s.sccm;
      t.psnr_db = s.psnr_db;
      t.payload_total_bits = s.payload_bits;
      task_index[s.task_id] = log.tasks.size();
      log.tasks.push_back(t);
      log.sum_sccm += s.sccm;
      depth_sum += s.depth;
    }
    for (const auto& d : info.drains) log.tasks[task_index.at(d.task_id)].bits_drained += d.bits;
    for (const auto& c : info.completions) {
      auto& t = log.tasks[task_index.at(c.task_id)];
      t.finish_slot = info.slot;
      t.delay = c.delay;
    }
    log.sum_reward += r.reward;
    log.delay_violations += info.delay_violations;
    log.psnr_violations += info.psnr_violations;
    if (r.done) {
      log.termination = info.termination;
      break;
    }
    obs = std::move(r.observation);
  }
  log.slots_used = env.state().slot;
  log.tasks_completed = env.state().tasks_completed;
  log.mean_depth = log.tasks.empty() ? 0.0 : depth_sum / static_cast<double>(log.tasks.size());
  return log;
}

}  // namespace semcom

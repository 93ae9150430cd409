#include "semcom/agents/baselines.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace semcom::agents {

namespace {

Action random_matching(const SemanticEnv& env, Rng& rng) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<double> raw(env.raw_action_dim());
  for (auto& v : raw) v = u(rng);
  return env.project(raw);
}

}  // namespace

Action RandomPolicy::act(const SemanticEnv& env, std::span<const double>, Rng& rng) {
  Action a = random_matching(env, rng);
  std::uniform_int_distribution<int> depth(1, env.config().profile.max_depth());
  for (auto& d : a.depth) d = depth(rng);
  return a;
}

Action FixedDepthPolicy::act(const SemanticEnv& env, std::span<const double>, Rng& rng) {
  Action a = random_matching(env, rng);
  std::fill(a.depth.begin(), a.depth.end(), depth_);
  return a;
}

Action GreedyPolicy::act(const SemanticEnv& env, std::span<const double>, Rng&) {
  const EnvConfig& cfg = env.config();
  const EnvState& s = env.state();
  const int m_count = cfg.network.num_bs;
  const int n_count = cfg.network.num_users;
  const int max_depth = cfg.profile.max_depth();

  auto age = [&](int n) -> std::int64_t {
    const auto& q = s.queues[n];
    if (q.serving) return s.slot - q.serving->arrival_slot;
    return s.slot - q.pending.front().arrival_slot;
  };
  std::vector<int> users;
  for (int n = 0; n < n_count; ++n) {
    if (s.queues[n].has_work()) users.push_back(n);
  }
  std::stable_sort(users.begin(), users.end(), [&](int a, int b) { return age(a) > age(b); });

  Action action{AssociationMatrix(m_count, n_count), std::vector<int>(n_count, 1)};
  for (int n : users) {
    int best = -1;
    for (int m = 0; m < m_count; ++m) {
      if (action.assoc.bs_active(m)) continue;
      if (best < 0 || s.channel.gain(m, n) > s.channel.gain(best, n)) best = m;
    }
    if (best >= 0) action.assoc.link(best, n);
  }

  const auto sinr = link_sinr(s.channel, action.assoc, cfg.network);
  for (int n : users) {
    const auto& q = s.queues[n];
    if (q.serving || !action.assoc.bs_of(n)) continue;
    const double snr_db = sinr[n] > 0.0 ? 10.0 * std::log10(sinr[n]) : -50.0;
    const auto bits = std::max<std::int64_t>(bits_per_slot(std::log2(1.0 + sinr[n]), cfg.network), 1);
    const auto waited = age(n);

    int feasible_best = -1;
    double feasible_psi = std::numeric_limits<double>::infinity();
    int fallback = max_depth;
    double fallback_cost = std::numeric_limits<double>::infinity();
    for (int d = 1; d <= max_depth; ++d) {
      const double psi = sccm(cfg.weights, d, cfg.profile);
      const auto payload = cfg.profile.at(d).payload_bits;
      const std::int64_t service_slots = (payload + bits - 1) / bits;
      const double est_delay = static_cast<double>(waited + service_slots - 1);
      const double delay_excess = hinge(est_delay - static_cast<double>(cfg.l_max));
      const double psnr_gap = hinge(cfg.psnr_min_db - psnr(cfg.profile, d, snr_db));
      if (delay_excess == 0.0 && psnr_gap == 0.0 && psi < feasible_psi) {
        feasible_psi = psi;
        feasible_best = d;
      }
      const double cost = psi + delay_excess + psnr_gap;
      if (cost < fallback_cost) {
        fallback_cost = cost;
        fallback = d;
      }
    }
    action.depth[n] = feasible_best > 0 ? feasible_best : fallback;
  }
  return action;
}

bool is_baseline(const std::string& kind) {
  return kind == "random" || kind == "greedy" || kind.rfind("fixed:", 0) == 0;
}

std::unique_ptr<Policy> make_baseline(const std::string& kind, int max_depth) {
  if (kind == "random") return std::make_unique<RandomPolicy>();
  if (kind == "greedy") return std::make_unique<GreedyPolicy>();
  if (kind.rfind("fixed:", 0) == 0) {
    int d = 0;
    try {
      std::size_t used = 0;
      d = std::stoi(kind.substr(6), &used);
      if (used != kind.size() - 6) d = 0;
    } catch (const std::exception&) {
      d = 0;
    }
    if (d < 1 || d > max_depth) {
      throw ConfigError("baseline '" + kind + "': depth must be in 1.." + std::to_string(max_depth));
    }
    return std::make_unique<FixedDepthPolicy>(d);
  }
  throw ConfigError("unknown baseline policy '" + kind + "' (expected random, greedy or fixed:<d>)");
}

}  // namespace semcom::agents

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>

#include "semcom/agents/baselines.hpp"
#include "semcom/env_mdp.hpp"

using namespace semcom;

namespace {

EnvConfig small_config() {
  EnvConfig cfg;
  cfg.channel_scale = 1.0;
  return cfg;
}

EnvState blank_state(const EnvConfig& cfg, double gain) {
  EnvState s;
  const int m = cfg.network.num_bs, n = cfg.network.num_users;
  s.channel.num_bs = m;
  s.channel.num_users = n;
  s.channel.power_gain.assign(static_cast<std::size_t>(m) * n, gain);
  s.queues.assign(n, UserQueue{});
  // Nothing left to arrive, so the run ends once the queues drain.
  s.generated.assign(n, cfg.arrival.cap_per_user);
  s.placement.bs_positions.assign(m, {0.0, 0.0});
  s.placement.user_positions.assign(n, {cfg.network.reference_distance_m, 0.0});
  return s;
}

Task task_at(std::int64_t id, int user, std::int64_t arrival) {
  Task t;
  t.id = id;
  t.user = user;
  t.arrival_slot = arrival;
  return t;
}

// Reference greedy: among maximal matchings of eligible pairs, the one whose
// descending score list is lexicographically largest (distinct scores).
AssociationMatrix lexicographic_best(const std::vector<double>& scores, int m_count, int n_count,
                                     const std::vector<bool>& eligible) {
  std::vector<int> perm(std::max(m_count, n_count));
  std::iota(perm.begin(), perm.end(), 0);
  AssociationMatrix best(m_count, n_count);
  std::vector<double> best_key;
  do {
    // perm[n] is the BS for user n when < m_count.
    AssociationMatrix z(m_count, n_count);
    std::vector<double> key;
    for (int n = 0; n < n_count; ++n) {
      const int m = perm[n];
      if (m >= m_count || !eligible[n]) continue;
      z.link(m, n);
      key.push_back(scores[static_cast<std::size_t>(m) * n_count + n]);
    }
    std::sort(key.rbegin(), key.rend());
    if (best_key.empty() || key > best_key) {
      best_key = key;
      best = z;
    }
  } while (std::next_permutation(perm.begin(), perm.end()));
  return best;
}

}  // namespace

TEST_CASE("reset is seeded and starts empty") {
  const EnvConfig cfg = small_config();
  SemanticEnv a(cfg), b(cfg);
  Rng ra(17), rb(17);
  const auto oa = a.reset(ra), ob = b.reset(rb);
  CHECK(oa == ob);
  CHECK(static_cast<int>(oa.size()) == observation_dim(cfg));
  CHECK(observation_dim(cfg) == 9 + 12 + 2);
  CHECK(a.state().cum_sccm == 0.0);
  CHECK(a.state().slot == 0);
  for (int n = 0; n < 3; ++n) {
    for (int k = 0; k < 4; ++k) CHECK(oa[9 + 4 * n + k] == 0.0);
  }
}

TEST_CASE("observation features") {
  const EnvConfig cfg = small_config();
  SemanticEnv env(cfg);
  EnvState s = blank_state(cfg, 0.0);
  s.slot = 10;
  s.queues[0].pending.push_back(task_at(0, 0, 10 - cfg.l_max));
  s.queues[0].pending.push_back(task_at(1, 0, 9));
  Task serving = task_at(2, 1, 8);
  start_service(serving, 1, cfg.profile, cfg.weights, 5.0, 9);
  serving.payload_remaining_bits = 40000;
  s.queues[1].serving = serving;
  const auto obs = env.restore(s);

  for (int i = 0; i < 9; ++i) CHECK(obs[i] == 0.0);
  CHECK(obs[9] == doctest::Approx(0.2));
  CHECK(obs[10] == 0.0);
  CHECK(obs[11] == 1.0);  // age = L_max
  CHECK(obs[12] == 0.0);
  CHECK(obs[13] == 0.0);
  CHECK(obs[14] == doctest::Approx(0.5));
  CHECK(obs[15] == doctest::Approx(2.0 / 3.0));
  CHECK(obs[16] == 1.0);
  for (int k = 17; k < 21; ++k) CHECK(obs[k] == 0.0);

  s.channel.power_gain.assign(9, std::exp(1.0) - 1.0);
  const auto obs2 = env.restore(s);
  CHECK(obs2[0] == doctest::Approx(1.0));

  EnvState bad = s;
  bad.queues.pop_back();
  CHECK_THROWS_AS(env.restore(bad), StateError);
}

TEST_CASE("depth bins") {
  CHECK(depth_from_raw(-1.0, 6) == 1);
  CHECK(depth_from_raw(0.0, 6) == 4);
  CHECK(depth_from_raw(1.0, 6) == 6);
  CHECK(depth_from_raw(-0.6, 6) == 2);
  CHECK(depth_from_raw(5.0, 6) == 6);
  CHECK(depth_from_raw(std::nan(""), 6) == 4);
  CHECK(depth_from_raw(0.3, 1) == 1);
}

TEST_CASE("projection: dominant diagonal gives the identity") {
  const EnvConfig cfg = small_config();
  EnvState s = blank_state(cfg, 1.0);
  for (int n = 0; n < 3; ++n) s.queues[n].pending.push_back(task_at(n, n, 0));
  std::vector<double> raw = {0.9, 0.1, 0.0, 0.2, 0.8, 0.1, 0.0, 0.3, 0.7, -1, 0, 1};
  const Action a = project_action(raw, s, cfg);
  for (int m = 0; m < 3; ++m)
    for (int n = 0; n < 3; ++n) CHECK(a.assoc.linked(m, n) == (m == n));
  CHECK(a.depth == std::vector<int>{1, 4, 6});
}

TEST_CASE("projection matches the brute-force oracle") {
  for (int m_count : {2, 3, 4}) {
    for (int n_count : {2, 3}) {
      EnvConfig cfg = small_config();
      cfg.network.num_bs = m_count;
      cfg.network.num_users = n_count;
      Rng rng(static_cast<std::uint64_t>(m_count * 10 + n_count));
      std::uniform_real_distribution<double> u(-1.0, 1.0);
      std::bernoulli_distribution busy(0.7);
      for (int trial = 0; trial < 500; ++trial) {
        EnvState s = blank_state(cfg, 1.0);
        std::vector<bool> eligible(n_count);
        for (int n = 0; n < n_count; ++n) {
          eligible[n] = busy(rng);
          if (eligible[n]) s.queues[n].pending.push_back(task_at(n, n, 0));
        }
        std::vector<double> raw(static_cast<std::size_t>(raw_action_dim(cfg)));
        for (auto& v : raw) v = u(rng);
        const Action a = project_action(raw, s, cfg);
        REQUIRE(a.assoc.feasible());
        const auto oracle = lexicographic_best(raw, m_count, n_count, eligible);
        CHECK(a.assoc.raw() == oracle.raw());
        // Maximal: every eligible user is served when BSs suffice.
        int served = 0, want = 0;
        for (int n = 0; n < n_count; ++n) {
          served += a.assoc.col_sum(n);
          want += eligible[n];
          if (!eligible[n]) CHECK(a.assoc.col_sum(n) == 0);
        }
        CHECK(served == std::min(want, m_count));
      }
    }
  }
}

TEST_CASE("projection handles ties and NaN") {
  const EnvConfig cfg = small_config();
  EnvState s = blank_state(cfg, 1.0);
  for (int n = 0; n < 3; ++n) s.queues[n].pending.push_back(task_at(n, n, 0));
  std::vector<double> raw(12, 0.5);
  const Action a = project_action(raw, s, cfg);
  for (int m = 0; m < 3; ++m) CHECK(a.assoc.linked(m, m));
  raw.assign(12, std::nan(""));
  CHECK(project_action(raw, s, cfg).assoc.feasible());
  CHECK_THROWS_AS(project_action(std::vector<double>(5, 0.0), s, cfg), StateError);
}

TEST_CASE("reward: one start, nothing completes") {
  EnvConfig cfg = small_config();
  cfg.network.num_bs = 1;
  cfg.network.num_users = 1;
  // depth 2: F_norm 0.2, D_norm 0.8 -> psi 0.5 at equal weights
  cfg.profile.entries = {{1, 1.0, 1000000, 33.0, 0.5}, {2, 2.0, 800000, 33.0, 0.5},
                         {3, 10.0, 100000, 33.0, 0.5}};
  cfg.weights = SccmWeights(0.5, 0.5);
  SemanticEnv env(cfg);
  EnvState s = blank_state(cfg, 0.0);  // zero channel, nothing drains
  s.queues[0].pending.push_back(task_at(0, 0, 0));
  env.restore(s);
  Action a{AssociationMatrix(1, 1), {2}};
  a.assoc.link(0, 0);
  Rng rng(1);
  const auto r = env.step(a, rng);
  CHECK(std::abs(r.reward - (-0.5)) <= 1e-12);
  CHECK(r.info.starts.size() == 1);
  CHECK(r.info.completions.empty());
  CHECK(env.state().cum_sccm == doctest::Approx(0.5));
}

TEST_CASE("reward: one late completion") {
  EnvConfig cfg = small_config();
  cfg.network.num_bs = 1;
  cfg.network.num_users = 1;
  cfg.l_max = 3;
  SemanticEnv env(cfg);
  EnvState s = blank_state(cfg, 1.0);
  s.slot = 5;
  Task t = task_at(0, 0, 0);
  start_service(t, 6, cfg.profile, cfg.weights, 10.0, 1);
  t.payload_remaining_bits = 1;
  t.psnr_db = 35.0;
  s.queues[0].serving = t;
  env.restore(s);
  Action a{AssociationMatrix(1, 1), {1}};
  a.assoc.link(0, 0);
  Rng rng(1);
  const auto r = env.step(a, rng);
  REQUIRE(r.info.completions.size() == 1);
  CHECK(r.info.completions[0].delay == 5);
  CHECK(std::abs(r.reward - (-2.0)) <= 1e-12);
  CHECK(r.done);
  CHECK(env.state().termination == Termination::AllTasksDone);
}

TEST_CASE("accrued penalties count overdue tasks per slot") {
  EnvConfig cfg = small_config();
  cfg.network.num_bs = 1;
  cfg.network.num_users = 1;
  cfg.l_max = 3;
  SemanticEnv env(cfg);
  EnvState s = blank_state(cfg, 0.0);  // nothing drains
  s.slot = 3;
  s.queues[0].pending = {task_at(0, 0, 0), task_at(1, 0, 1)};
  env.restore(s);
  Action idle{AssociationMatrix(1, 1), {1}};
  Rng rng(3);
  // slot 3: ages 3 and 2, none past L_max
  auto r = env.step(idle, rng);
  CHECK(r.info.overdue_tasks == 0);
  CHECK(accrued_reward(r.info, cfg) == 0.0);
  // slot 4: only the first
  r = env.step(idle, rng);
  CHECK(r.info.overdue_tasks == 1);
  CHECK(accrued_reward(r.info, cfg) == -1.0);
  r = env.step(idle, rng);
  CHECK(r.info.overdue_tasks == 2);
  CHECK(r.reward == 0.0);
}

TEST_CASE("accrued and completion rewards agree over finished episodes") {
  EnvConfig cfg;
  cfg.psnr_min_db = 31.0;  // some PSNR hinges too
  for (const char* kind : {"random", "greedy", "fixed:1"}) {
    auto policy = agents::make_baseline(kind, cfg.profile.max_depth());
    Rng env_rng(77), act_rng(78);
    SemanticEnv env(cfg);
    auto obs = env.reset(env_rng);
    double completion = 0.0, accrued = 0.0, psnr = 0.0;
    while (!env.state().done()) {
      const auto r = env.step(policy->act(env, obs, act_rng), env_rng);
      completion += r.reward;
      accrued += accrued_reward(r.info, cfg);
      psnr += r.info.psnr_penalty;
      obs = r.observation;
    }
    REQUIRE(env.state().termination == Termination::AllTasksDone);
    CHECK(psnr > 0.0);
    CHECK(accrued == doctest::Approx(completion).epsilon(1e-12));
  }
}

TEST_CASE("reward: idle slot") {
  EnvConfig cfg = small_config();
  cfg.arrival.rate_per_slot = 0.0;
  SemanticEnv env(cfg);
  Rng rng(2);
  env.reset(rng);
  Action a{AssociationMatrix(3, 3), {1, 1, 1}};
  const auto r = env.step(a, rng);
  CHECK(r.reward == 0.0);
  CHECK_FALSE(r.done);
}

TEST_CASE("malformed actions and finished episodes are rejected") {
  EnvConfig cfg = small_config();
  cfg.arrival.rate_per_slot = 0.0;
  cfg.max_slots = 2;
  SemanticEnv env(cfg);
  Rng rng(2);
  Action a{AssociationMatrix(3, 3), {1, 1, 1}};
  CHECK_THROWS_AS(env.step(a, rng), StateError);
  env.reset(rng);
  CHECK_THROWS_AS(env.step(Action{AssociationMatrix(2, 3), {1, 1, 1}}, rng), StateError);
  CHECK_THROWS_AS(env.step(Action{AssociationMatrix(3, 3), {1, 1}}, rng), StateError);
  env.step(a, rng);
  CHECK(env.step(a, rng).done);
  CHECK(env.state().termination == Termination::MaxSlots);
  CHECK_THROWS_AS(env.step(a, rng), StateError);
}

TEST_CASE("episodes are reproducible and account exactly") {
  EnvConfig cfg;
  auto policy = agents::make_baseline("random", cfg.profile.max_depth());
  Rng r1(2024), r2(2024);
  const EpisodeLog a = run_episode(*policy, cfg, r1);
  const EpisodeLog b = run_episode(*policy, cfg, r2);
  CHECK(a.sum_sccm == b.sum_sccm);
  CHECK(a.sum_reward == b.sum_reward);
  CHECK(a.slots_used == b.slots_used);
  REQUIRE(a.tasks.size() == b.tasks.size());
  double psi = 0.0;
  for (std::size_t i = 0; i < a.tasks.size(); ++i) {
    CHECK(a.tasks[i].depth == b.tasks[i].depth);
    psi += a.tasks[i].sccm;
    if (a.tasks[i].finish_slot) CHECK(a.tasks[i].bits_drained == a.tasks[i].payload_total_bits);
  }
  CHECK(psi == doctest::Approx(a.sum_sccm).epsilon(1e-12));
}

TEST_CASE("no traffic ends at the slot budget with zero objective") {
  EnvConfig cfg;
  cfg.arrival.rate_per_slot = 0.0;
  cfg.max_slots = 300;
  auto policy = agents::make_baseline("random", cfg.profile.max_depth());
  Rng rng(4);
  const EpisodeLog log = run_episode(*policy, cfg, rng);
  CHECK(log.termination == Termination::MaxSlots);
  CHECK(log.slots_used == 300);
  CHECK(log.sum_sccm == 0.0);
  CHECK(log.sum_reward == 0.0);
}

TEST_CASE("channel scale calibration is positive and fixed") {
  NetworkConfig n;
  const double a = calibrate_channel_scale(n);
  CHECK(a > 0.0);
  CHECK(a == calibrate_channel_scale(n));
}

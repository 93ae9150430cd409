// End-to-end acceptance checks, one per criterion. Each run prints a single
// PASS/FAIL line; tolerances and budgets are fixed below.

#include <CLI11.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "semcom/agents/baselines.hpp"
#include "semcom/agents/sac.hpp"
#include "semcom/env_mdp.hpp"
#include "semcom/experiments/config.hpp"
#include "semcom/experiments/runner.hpp"
#include "semcom/net_model.hpp"
#include "semcom/semantic_model.hpp"

using namespace semcom;
namespace ex = semcom::experiments;
namespace fs = std::filesystem;

namespace {

constexpr double kRateTol = 1e-9;
constexpr double kSccmTol = 1e-12;
constexpr double kRewardTol = 1e-12;
constexpr double kGradTol = 1e-4;
constexpr double kFdStep = 1e-6;
constexpr double kSanityFraction = 0.95;
constexpr double kRandomMargin = 0.90;
constexpr double kFixedMargin = 1.05;
constexpr double kDqnMargin = 1.02;
constexpr int kLearningSeeds = 5;
constexpr int kEvalEpisodes = 30;

struct Options {
  std::string cache_dir = "acceptance_cache";
  std::string work_dir = "acceptance_work";
  std::string cli;
};

struct Outcome {
  bool pass = false;
  std::string detail;
  bool soft = false;
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

// Learning hyperparameters shared by criteria 7 to 10. Smaller nets and
// batches than the library defaults keep the five-seed runs within budget on
// one core; alpha and reward_scale were picked by evaluation reward.
void learning_setup(ex::ExperimentConfig& cfg) {
  cfg.sac.hidden = {64, 64};
  cfg.sac.batch_size = 128;
  cfg.sac.alpha = 0.02;
  cfg.sac.reward_scale = 0.01;
  cfg.dqn.hidden = cfg.sac.hidden;
  cfg.dqn.batch_size = cfg.sac.batch_size;
  cfg.dqn.reward_scale = cfg.sac.reward_scale;
  cfg.dqn.epsilon_decay_steps = 30000;
  cfg.train.steps = 40000;
}

// Trained agents are cached on disk by config hash, kind and seed so that
// criteria sharing a setup train once.
ex::TrainedAgent trained(ex::ExperimentConfig cfg, const std::string& kind, std::uint64_t seed,
                         const Options& opt) {
  cfg.agent = kind;
  ex::resolve_channel_scale(cfg.env);
  const fs::path dir =
      fs::path(opt.cache_dir) / (ex::config_hash(cfg) + "_" + kind + "_" + std::to_string(seed));
  if (fs::exists(dir / "manifest.json")) return ex::load_checkpoint(dir.string(), cfg);
  ex::TrainedAgent agent = ex::train_agent(cfg, kind, seed);
  ex::save_checkpoint(dir.string(), agent, cfg);
  return agent;
}

std::vector<double> field(const std::vector<ex::EpisodeSummary>& rows,
                          double ex::EpisodeSummary::*member) {
  std::vector<double> v;
  for (const auto& r : rows) v.push_back(r.*member);
  return v;
}

double mean_depth(const std::vector<ex::EpisodeSummary>& rows) {
  double weighted = 0.0, count = 0.0;
  for (const auto& r : rows) {
    for (std::size_t d = 0; d < r.depth_counts.size(); ++d) {
      weighted += static_cast<double>(d + 1) * r.depth_counts[d];
      count += r.depth_counts[d];
    }
  }
  return count > 0 ? weighted / count : 0.0;
}

// Evaluation rows of a learned agent over all seeds, episodes paired with baselines.
std::vector<ex::EpisodeSummary> learned_rows(const ex::ExperimentConfig& cfg, const std::string& kind,
                                             const Options& opt) {
  std::vector<ex::EpisodeSummary> all;
  for (std::uint64_t seed = 1; seed <= kLearningSeeds; ++seed) {
    const ex::TrainedAgent agent = trained(cfg, kind, seed, opt);
    auto policy = ex::make_policy(kind, &agent, cfg.env.profile.max_depth());
    const auto rows = ex::evaluate(*policy, cfg.env, seed, kEvalEpisodes);
    all.insert(all.end(), rows.begin(), rows.end());
  }
  return all;
}

std::vector<ex::EpisodeSummary> baseline_rows(const ex::ExperimentConfig& cfg, const std::string& kind) {
  std::vector<ex::EpisodeSummary> all;
  for (std::uint64_t seed = 1; seed <= kLearningSeeds; ++seed) {
    auto policy = ex::make_policy(kind, nullptr, cfg.env.profile.max_depth());
    const auto rows = ex::evaluate(*policy, cfg.env, seed, kEvalEpisodes);
    all.insert(all.end(), rows.begin(), rows.end());
  }
  return all;
}

double median_sccm(const std::vector<ex::EpisodeSummary>& rows) {
  return ex::summarize(field(rows, &ex::EpisodeSummary::sum_sccm)).median;
}

std::vector<double> average_ranks(const std::vector<double>& v) {
  std::vector<std::size_t> idx(v.size());
  for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
  std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return v[a] < v[b]; });
  std::vector<double> rank(v.size());
  for (std::size_t i = 0; i < idx.size();) {
    std::size_t j = i;
    while (j + 1 < idx.size() && v[idx[j + 1]] == v[idx[i]]) ++j;
    for (std::size_t k = i; k <= j; ++k) rank[idx[k]] = 0.5 * static_cast<double>(i + j) + 1.0;
    i = j + 1;
  }
  return rank;
}

// Pearson correlation of average ranks.
double spearman(const std::vector<double>& x, const std::vector<double>& y) {
  const auto rx = average_ranks(x), ry = average_ranks(y);
  const double n = static_cast<double>(x.size());
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < x.size(); ++i) mx += rx[i] / n, my += ry[i] / n;
  double sxy = 0, sxx = 0, syy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (rx[i] - mx) * (ry[i] - my);
    sxx += (rx[i] - mx) * (rx[i] - mx);
    syy += (ry[i] - my) * (ry[i] - my);
  }
  return sxx > 0 && syy > 0 ? sxy / std::sqrt(sxx * syy) : 0.0;
}

// ---------------------------------------------------------------------------

Outcome formulas() {
  double worst_rate = 0.0, worst_sccm = 0.0;

  NetworkConfig one;
  one.num_bs = 1;
  one.num_users = 1;
  one.power_gain_db = 5.0;
  ChannelMatrix h1{1, 1, {1.0}, 0};
  AssociationMatrix z1(1, 1);
  z1.link(0, 0);
  const double c5 = link_rates(h1, z1, one)[0];
  worst_rate = std::max(worst_rate, std::abs(c5 - std::log2(1.0 + std::pow(10.0, 0.5))));
  const bool quoted = std::abs(c5 - 2.0574) < 5e-5;

  // Unit signal power 4, one interferer at 1, unit noise: SINR 2.
  NetworkConfig two;
  two.num_bs = 2;
  two.num_users = 2;
  two.power_gain_db = 0.0;
  ChannelMatrix h2{2, 2, {4.0, 0.3, 1.0, 2.0}, 0};
  AssociationMatrix z2(2, 2);
  z2.link(0, 0);
  z2.link(1, 1);
  const auto r2 = link_rates(h2, z2, two);
  worst_rate = std::max(worst_rate, std::abs(r2[0] - std::log2(3.0)));
  worst_rate = std::max(worst_rate, std::abs(r2[1] - std::log2(1.0 + 2.0 / 1.3)));

  // 10 dB, gain 0.5 against interferer 0.02: 5 / 1.2.
  two.power_gain_db = 10.0;
  ChannelMatrix h3{2, 2, {0.5, 1.0, 0.02, 0.0}, 0};
  AssociationMatrix z3(2, 2);
  z3.link(0, 0);
  z3.link(1, 1);
  worst_rate = std::max(worst_rate, std::abs(link_rates(h3, z3, two)[0] - std::log2(1.0 + 5.0 / 1.2)));

  const DepthProfile p = DepthProfile::defaults();
  const double gmax = 22.0, dmax = 80000.0;
  const double gflops[] = {2, 4, 7, 11, 16, 22};
  const double payload[] = {80000, 56000, 40000, 30000, 23000, 18000};
  for (double w : {0.0, 0.25, 0.5, 0.7, 1.0}) {
    const auto weights = SccmWeights::from_compute_weight(w);
    for (int d = 1; d <= 6; ++d) {
      const double expect = w * gflops[d - 1] / gmax + (1.0 - w) * payload[d - 1] / dmax;
      worst_sccm = std::max(worst_sccm, std::abs(sccm(weights, d, p) - expect));
    }
  }
  // depth 3 at even weights: (7/22 + 1/2) / 2 = 9/22
  worst_sccm = std::max(worst_sccm, std::abs(sccm(SccmWeights{}, 3, p) - 9.0 / 22.0));

  Outcome o;
  o.pass = worst_rate <= kRateTol && worst_sccm <= kSccmTol && quoted;
  o.detail = fmt("C(5 dB)=%.6f, max rate error %.2e (tol %.0e), max sccm error %.2e (tol %.0e)", c5,
                 worst_rate, kRateTol, worst_sccm, kSccmTol);
  return o;
}

Outcome feasibility() {
  EnvConfig cfg;
  cfg.channel_scale = calibrate_channel_scale(cfg.network);
  const int m = cfg.network.num_bs, n = cfg.network.num_users, dim = raw_action_dim(cfg);
  std::uniform_real_distribution<double> unit(-1.0, 1.0), wide(-1e6, 1e6);
  std::uniform_int_distribution<int> warm(0, 300);
  long violations = 0, bad_depth = 0, actions = 0;
  for (int s = 0; s < 100; ++s) {
    Rng rng(derive_seed(2002, s));
    SemanticEnv env(cfg);
    env.reset(rng);
    agents::RandomPolicy random;
    for (int k = warm(rng); k > 0 && !env.state().done(); --k) {
      env.step(random.act(env, env.observe(), rng), rng);
    }
    for (int a = 0; a < 1000; ++a) {
      std::vector<double> raw(dim);
      for (auto& v : raw) v = a % 10 == 9 ? wide(rng) : unit(rng);
      if (a % 50 == 49) raw[a % dim] = std::nan("");
      const Action act = env.project(raw);
      const auto& z = act.assoc.raw();
      for (int b = 0; b < m; ++b) {
        int row = 0;
        for (int u = 0; u < n; ++u) row += z[b * n + u];
        violations += row > 1;
      }
      for (int u = 0; u < n; ++u) {
        int col = 0;
        for (int b = 0; b < m; ++b) col += z[b * n + u];
        violations += col > 1;
      }
      for (int d : act.depth) bad_depth += d < 1 || d > cfg.profile.max_depth();
      ++actions;
    }
  }
  Outcome o;
  o.pass = violations == 0 && bad_depth == 0 && actions == 100000;
  o.detail = fmt("%ld projected actions over 100 states, %ld row/column violations, %ld bad depths",
                 actions, violations, bad_depth);
  return o;
}

struct EpisodeAudit {
  long completed = 0;
  long drain_mismatch = 0;
  long objective_mismatch = 0;
  long unfinished = 0;
  long identity_slots = 0;
  long identity_failures = 0;
  double worst_identity = 0.0;
  long psi_mismatch = 0;
};

// Steps one episode by hand, keeping an independent ledger of drained bits and
// charged psi that is compared against the environment's own accounting.
void audit_episode(Policy& policy, const EnvConfig& cfg, std::uint64_t seed, EpisodeAudit& a) {
  Rng env_rng(derive_seed(seed, 1)), act_rng(derive_seed(seed, 2));
  SemanticEnv env(cfg);
  auto obs = env.reset(env_rng);
  std::map<std::int64_t, std::int64_t> drained;
  std::map<std::int64_t, double> psi;
  double objective = 0.0;
  long started = 0, finished = 0;
  while (!env.state().done()) {
    const StepResult r = env.step(policy.act(env, obs, act_rng), env_rng);
    double slot_psi = 0.0;
    for (const auto& s : r.info.starts) {
      psi[s.task_id] = s.sccm;
      slot_psi += s.sccm;
      const NormalizedCost c = normalize(cfg.profile)[s.depth - 1];
      const double expect = cfg.weights.compute() * c.compute + cfg.weights.transmit() * c.payload;
      a.psi_mismatch += std::abs(expect - s.sccm) > kSccmTol;
      ++started;
    }
    objective += slot_psi;
    for (const auto& d : r.info.drains) drained[d.task_id] += d.bits;
    for (const auto& c : r.info.completions) {
      ++finished;
      ++a.completed;
      a.drain_mismatch += drained[c.task_id] != c.payload_total_bits;
    }
    if (r.info.delay_violations == 0 && r.info.psnr_violations == 0 && r.info.delay_penalty == 0.0 &&
        r.info.psnr_penalty == 0.0) {
      ++a.identity_slots;
      const double gap = std::abs(r.reward + slot_psi);
      a.worst_identity = std::max(a.worst_identity, gap);
      a.identity_failures += gap > kRewardTol;
    }
    obs = r.observation;
  }
  a.unfinished += started - finished;
  if (env.state().termination != Termination::AllTasksDone) ++a.unfinished;
  a.objective_mismatch += objective != env.state().cum_sccm;
}

Outcome conservation() {
  EnvConfig cfg;
  cfg.channel_scale = calibrate_channel_scale(cfg.network);
  EpisodeAudit a;
  agents::RandomPolicy random;
  for (int e = 0; e < 100; ++e) audit_episode(random, cfg, derive_seed(3003, e), a);
  Outcome o;
  o.pass = a.completed > 0 && a.drain_mismatch == 0 && a.objective_mismatch == 0 &&
           a.unfinished == 0 && a.psi_mismatch == 0;
  o.detail = fmt("%ld completed tasks, %ld drain mismatches, %ld objective mismatches, "
                 "%ld unfinished, %ld psi mismatches",
                 a.completed, a.drain_mismatch, a.objective_mismatch, a.unfinished, a.psi_mismatch);
  return o;
}

Outcome reward_identity() {
  EnvConfig cfg;
  cfg.channel_scale = calibrate_channel_scale(cfg.network);
  EpisodeAudit a;
  agents::RandomPolicy random;
  agents::GreedyPolicy greedy;
  agents::FixedDepthPolicy deep(6);
  for (int e = 0; e < 20; ++e) {
    audit_episode(random, cfg, derive_seed(4004, e), a);
    audit_episode(greedy, cfg, derive_seed(4104, e), a);
    audit_episode(deep, cfg, derive_seed(4204, e), a);
  }
  Outcome o;
  o.pass = a.identity_slots > 0 && a.identity_failures == 0;
  o.detail = fmt("%ld hinge-free slots, worst |r + psi| = %.2e (tol %.0e)", a.identity_slots,
                 a.worst_identity, kRewardTol);
  return o;
}

double rel_err(double a, double b) {
  return std::abs(a - b) / std::max({std::abs(a), std::abs(b), 1e-6});
}

template <class F>
double fd_worst(nn::Mlp& net, std::span<const double> analytic, F&& f) {
  double worst = 0.0;
  for (std::size_t i = 0; i < net.num_parameters(); ++i) {
    const double saved = net.parameters()[i];
    net.mutable_parameters()[i] = saved + kFdStep;
    const double up = f();
    net.mutable_parameters()[i] = saved - kFdStep;
    const double down = f();
    net.mutable_parameters()[i] = saved;
    worst = std::max(worst, rel_err(analytic[i], (up - down) / (2 * kFdStep)));
  }
  return worst;
}

Outcome gradients() {
  Rng rng(5005);
  std::normal_distribution<double> g(0.0, 1.0);
  double worst_actor = 0.0, worst_critic = 0.0;
  for (int inst = 0; inst < 100; ++inst) {
    const int obs = 3 + inst % 5, act = 1 + inst % 4, batch = 1 + inst % 6;
    agents::SacConfig sc;
    sc.hidden = {6 + inst % 3, 5};
    sc.alpha = 0.05 + 0.01 * (inst % 20);
    agents::SacAgent agent(obs, act, sc, rng);

    nn::Matrix o(batch, obs), noise(batch, act), input(batch, obs + act);
    for (auto& v : o.data) v = g(rng);
    for (auto& v : noise.data) v = g(rng);
    for (auto& v : input.data) v = g(rng);
    std::vector<double> targets(batch);
    for (auto& v : targets) v = g(rng);

    std::vector<double> ga(agent.actor().num_parameters(), 0.0);
    agent.actor_objective(o, noise, ga);
    worst_actor = std::max(worst_actor, fd_worst(agent.mutable_actor(), ga, [&] {
                             return agent.actor_objective(o, noise, {});
                           }));

    for (int c = 0; c < 2; ++c) {
      std::vector<double> gc(agent.critic(c).num_parameters(), 0.0);
      agent.critic_objective(c, input, targets, gc);
      worst_critic = std::max(worst_critic, fd_worst(agent.mutable_critic(c), gc, [&] {
                                return agent.critic_objective(c, input, targets, {});
                              }));
    }
  }
  Outcome o;
  o.pass = worst_actor < kGradTol && worst_critic < kGradTol;
  o.detail = fmt("100 instances, worst relative error actor %.2e, critics %.2e (tol %.0e)",
                 worst_actor, worst_critic, kGradTol);
  return o;
}

Outcome weight_extremes() {
  long starts = 0, wrong = 0;
  for (auto [w, want] : {std::pair{1.0, 1}, std::pair{0.0, 6}}) {
    EnvConfig cfg;
    cfg.weights = SccmWeights::from_compute_weight(w);
    cfg.network.power_gain_db = 40.0;
    cfg.l_max = 1000000;
    cfg.psnr_min_db = -1000.0;
    agents::GreedyPolicy greedy;
    for (int e = 0; e < 5; ++e) {
      Rng rng(derive_seed(6006, e));
      for (const auto& t : run_episode(greedy, cfg, rng).tasks) {
        ++starts;
        wrong += t.depth != want;
      }
    }
  }
  Outcome o;
  o.pass = starts > 0 && wrong == 0;
  o.detail = fmt("%ld greedy task starts at weight_c 0 and 1, %ld off the extreme depth", starts, wrong);
  return o;
}

// One user, one BS, static 40 dB link, unlimited backlog: every slot starts and
// finishes one task, and depth 2 has the lowest psi by a wide margin.
constexpr const char* kSanityConfig = R"({
  "network": {"num_bs": 1, "num_users": 1, "rayleigh_fading": false, "power_gain_db": 40},
  "profile": {"snr_ref_db": 5, "depths": [
    {"gflops": 1, "payload_bits": 100000, "psnr_ref_db": 33, "psnr_slope_db_per_db": 0},
    {"gflops": 2, "payload_bits": 3000, "psnr_ref_db": 33, "psnr_slope_db_per_db": 0},
    {"gflops": 30, "payload_bits": 2500, "psnr_ref_db": 33, "psnr_slope_db_per_db": 0},
    {"gflops": 60, "payload_bits": 2000, "psnr_ref_db": 33, "psnr_slope_db_per_db": 0},
    {"gflops": 80, "payload_bits": 1500, "psnr_ref_db": 33, "psnr_slope_db_per_db": 0},
    {"gflops": 100, "payload_bits": 1000, "psnr_ref_db": 33, "psnr_slope_db_per_db": 0}]},
  "env": {"weight_c": 0.5, "l_max": 1000000, "psnr_min_db": 0, "max_slots": 200},
  "traffic": {"rate_per_slot": 3, "cap_per_user": "unlimited"}
})";

Outcome learning_sanity(const Options& opt) {
  ex::ExperimentConfig cfg = ex::parse_config_text(kSanityConfig);
  learning_setup(cfg);
  cfg.train.steps = 5000;
  cfg.sac.reward_scale = 1.0;  // per-slot costs here are O(0.1), not O(1e2)
  ex::resolve_channel_scale(cfg.env);

  int dominant = 1;
  for (int d = 1; d <= cfg.env.profile.max_depth(); ++d) {
    if (sccm(cfg.env.weights, d, cfg.env.profile) < sccm(cfg.env.weights, dominant, cfg.env.profile))
      dominant = d;
  }

  const ex::TrainedAgent agent = trained(cfg, "sac", 1, opt);
  agents::SacPolicy policy(*agent.sac, false);
  SemanticEnv env(cfg.env);
  Rng rng(7007);
  auto obs = env.reset(rng);
  long starts = 0, hits = 0;
  for (int t = 0; t < 1000; ++t) {
    if (env.state().done()) obs = env.reset(rng);
    const StepResult r = env.step(policy.act(env, obs, rng), rng);
    for (const auto& s : r.info.starts) {
      ++starts;
      hits += s.depth == dominant;
    }
    obs = r.observation;
  }
  // Steps without a start (the first slot after a reset) count as misses.
  const double frac = static_cast<double>(hits) / 1000.0;
  Outcome o;
  o.pass = frac >= kSanityFraction;
  o.detail = fmt("dominant depth %d in %ld of 1000 steps (%ld starts; %.3f, need %.2f) after %lld "
                 "training steps",
                 dominant, hits, starts, frac, kSanityFraction,
                 static_cast<long long>(cfg.train.steps));
  return o;
}

ex::ExperimentConfig learning_config(double weight_c, double gain_db) {
  ex::ExperimentConfig cfg;
  cfg.env.weights = SccmWeights::from_compute_weight(weight_c);
  cfg.env.network.power_gain_db = gain_db;
  learning_setup(cfg);
  ex::resolve_channel_scale(cfg.env);
  return cfg;
}

Outcome beats_baselines(const Options& opt) {
  const ex::ExperimentConfig cfg = learning_config(0.5, 5.0);
  const double sac = median_sccm(learned_rows(cfg, "sac", opt));
  const double random = median_sccm(baseline_rows(cfg, "random"));
  double best_fixed = INFINITY;
  int best_depth = 0;
  for (int d = 1; d <= cfg.env.profile.max_depth(); ++d) {
    const double m = median_sccm(baseline_rows(cfg, "fixed:" + std::to_string(d)));
    if (m < best_fixed) best_fixed = m, best_depth = d;
  }
  Outcome o;
  o.pass = sac <= kRandomMargin * random && sac <= kFixedMargin * best_fixed;
  o.detail = fmt("SAC median %.2f; random %.2f (limit %.2f); best fixed depth %d %.2f (limit %.2f)",
                 sac, random, kRandomMargin * random, best_depth, best_fixed, kFixedMargin * best_fixed);
  return o;
}

Outcome sweep_trend(const Options& opt) {
  const std::vector<double> grid = {0.0, 0.25, 0.5, 0.75, 1.0};
  std::vector<double> means;
  std::vector<std::vector<double>> per_seed(kLearningSeeds);
  std::vector<ex::EpisodeSummary> mid_high;
  for (double w : grid) {
    const auto rows = learned_rows(learning_config(w, 10.0), "sac", opt);
    means.push_back(ex::summarize(field(rows, &ex::EpisodeSummary::sum_sccm)).mean);
    for (int s = 0; s < kLearningSeeds; ++s) {
      double sum = 0.0;
      for (int e = 0; e < kEvalEpisodes; ++e) sum += rows[s * kEvalEpisodes + e].sum_sccm;
      per_seed[s].push_back(sum / kEvalEpisodes);
    }
    if (w == 0.5) mid_high = rows;
  }
  const double rho = spearman(grid, means);
  int positive_seeds = 0;
  for (const auto& v : per_seed) positive_seeds += spearman(grid, v) > 0;

  const auto mid_low = learned_rows(learning_config(0.5, 2.0), "sac", opt);
  const double depth_low = mean_depth(mid_low), depth_high = mean_depth(mid_high);
  int deeper_seeds = 0;
  for (int s = 0; s < kLearningSeeds; ++s) {
    const auto slice = [&](const std::vector<ex::EpisodeSummary>& rows) {
      return std::vector<ex::EpisodeSummary>(rows.begin() + s * kEvalEpisodes,
                                             rows.begin() + (s + 1) * kEvalEpisodes);
    };
    deeper_seeds += mean_depth(slice(mid_low)) > mean_depth(slice(mid_high));
  }

  std::string curve;
  for (double m : means) curve += fmt("%s%.1f", curve.empty() ? "" : " ", m);
  Outcome o;
  o.pass = rho > 0.0 && depth_low > depth_high;
  o.detail = fmt("10 dB sum-SCCM over weight_c [%s], Spearman %.2f (%d/%d seeds positive); "
                 "depth at weight_c 0.5: 2 dB %.3f vs 10 dB %.3f (%d/%d seeds deeper)",
                 curve.c_str(), rho, positive_seeds, kLearningSeeds, depth_low, depth_high,
                 deeper_seeds, kLearningSeeds);
  return o;
}

Outcome sac_vs_dqn(const Options& opt) {
  const ex::ExperimentConfig cfg = learning_config(0.5, 5.0);
  const double sac = median_sccm(learned_rows(cfg, "sac", opt));
  const double dqn = median_sccm(learned_rows(cfg, "dqn", opt));
  Outcome o;
  o.soft = true;
  o.pass = sac <= kDqnMargin * dqn;
  o.detail = fmt("SAC median %.2f, DQN median %.2f (limit %.2f)", sac, dqn, kDqnMargin * dqn);
  return o;
}

std::string body_of(const fs::path& csv) {
  std::ifstream in(csv);
  std::string header;
  std::getline(in, header);
  std::ostringstream rest;
  rest << in.rdbuf();
  return rest.str();
}

int run(const std::string& cmd) {
  return std::system((cmd + " > /dev/null 2>&1").c_str());
}

Outcome determinism(const Options& opt) {
  const fs::path work = fs::path(opt.work_dir) / "determinism";
  fs::remove_all(work);
  fs::create_directories(work);
  const fs::path config = work / "config.json";
  std::ofstream(config) << R"({"sac": {"hidden": [16, 16], "batch_size": 32, "warmup_steps": 200},
    "train": {"steps": 600, "eval_episodes": 1}, "eval": {"episodes": 5}})";
  const std::string base = opt.cli + " %s --config " + config.string() + " --seed 11";

  int failures = 0, compared = 0;
  if (run(fmt(base.c_str(), "train") + " --agent sac --out " + (work / "train").string()) != 0)
    ++failures;
  for (const std::string agent : {"sac", "random", "greedy"}) {
    std::string first;
    for (int rep = 0; rep < 2; ++rep) {
      const fs::path out = work / (agent + std::to_string(rep));
      std::string cmd = fmt(base.c_str(), "eval") + " --agent " + agent + " --out " + out.string();
      if (agent == "sac") cmd += " --checkpoint " + (work / "train" / "checkpoint").string();
      if (run(cmd) != 0 || !fs::exists(out / "episodes.csv")) {
        ++failures;
        break;
      }
      const std::string body = body_of(out / "episodes.csv");
      if (rep == 0) {
        first = body;
      } else {
        ++compared;
        failures += body.empty() || body != first;
      }
    }
  }
  Outcome o;
  o.pass = failures == 0 && compared == 3;
  o.detail = fmt("%d eval pairs (sac, random, greedy) compared byte for byte, %d failures", compared,
                 failures);
  return o;
}

struct Criterion {
  int id;
  const char* name;
  double budget_s;  // <= 0: no runtime limit
  std::function<Outcome(const Options&)> run;
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app("acceptance checks");
  Options opt;
  std::vector<int> chosen;
  app.add_option("--criterion", chosen, "criteria to run (default all)");
  app.add_option("--cache", opt.cache_dir, "trained-agent cache directory");
  app.add_option("--work", opt.work_dir, "scratch directory for CLI runs");
  app.add_option("--cli", opt.cli, "path to the semcom executable");
  CLI11_PARSE(app, argc, argv);

  const std::vector<Criterion> all = {
      {1, "formula suite", 1, [](const Options&) { return formulas(); }},
      {2, "feasibility", 30, [](const Options&) { return feasibility(); }},
      {3, "conservation", 120, [](const Options&) { return conservation(); }},
      {4, "reward identity", 0, [](const Options&) { return reward_identity(); }},
      {5, "gradient checks", 60, [](const Options&) { return gradients(); }},
      {6, "weight-extreme argmin", 10, [](const Options&) { return weight_extremes(); }},
      {7, "SAC learning sanity", 300, learning_sanity},
      {8, "SAC beats baselines", 1800, beats_baselines},
      {9, "weight and spectrum trends", 7200, sweep_trend},
      {10, "SAC vs DQN", 0, sac_vs_dqn},
      {11, "eval determinism", 0, determinism},
  };

  bool ok = true;
  for (const auto& c : all) {
    if (!chosen.empty() && std::find(chosen.begin(), chosen.end(), c.id) == chosen.end()) continue;
    if (c.id == 11 && opt.cli.empty()) {
      std::cout << "criterion 11 FAIL eval determinism: --cli not given\n";
      ok = false;
      continue;
    }
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run(opt);
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail = std::string("exception: ") + e.what();
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const bool in_time = c.budget_s <= 0 || secs <= c.budget_s;
    const bool pass = o.pass && in_time;
    std::string verdict = pass ? "PASS" : (o.soft ? "FAIL (soft)" : "FAIL");
    std::cout << "criterion " << c.id << ' ' << verdict << ' ' << c.name << ": " << o.detail
              << fmt(" [%.1f s", secs) << (c.budget_s > 0 ? fmt(", budget %.0f s]", c.budget_s) : "]")
              << std::endl;
    if (!pass && !o.soft) ok = false;
  }
  return ok ? 0 : 1;
}

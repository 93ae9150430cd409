#include "semcom/experiments/runner.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "semcom/agents/baselines.hpp"
#include "semcom/parallel.hpp"

namespace semcom::experiments {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

void write_text(const fs::path& path, const std::string& text) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw ConfigError("cannot write " + path.string());
  out << text;
  if (!out) throw ConfigError("write failed for " + path.string());
}

json read_json(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open " + path.string());
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
}

std::vector<double> uniform_raw(int dim, Rng& rng) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<double> raw(static_cast<std::size_t>(dim));
  for (auto& v : raw) v = u(rng);
  return raw;
}

bool terminal(const SemanticEnv& env) {
  // Hitting the slot budget is a truncation rather than a terminal state.
  return env.state().termination == Termination::AllTasksDone;
}

double learner_reward(const StepResult& res, const ExperimentConfig& cfg) {
  return cfg.train.credit == "accrued" ? accrued_reward(res.info, cfg.env) : res.reward;
}

struct EpisodeAccumulator {
  double ret = 0.0;
  double critic = 0.0;
  double actor = 0.0;
  int updates = 0;
  std::int64_t slots = 0;

  TrainingRow finish(std::int64_t step, int episode) {
    TrainingRow row;
    row.step = step;
    row.episode = episode;
    row.episode_return = ret;
    row.critic_loss = updates ? critic / updates : 0.0;
    row.actor_loss = updates ? actor / updates : 0.0;
    row.slots = slots;
    *this = {};
    return row;
  }
};

void train_sac(agents::SacAgent& agent, const ExperimentConfig& cfg, std::uint64_t seed,
               std::vector<TrainingRow>* log) {
  const auto& sc = cfg.sac;
  Rng env_rng(derive_seed(seed, 1));
  Rng act_rng(derive_seed(seed, 2));
  Rng upd_rng(derive_seed(seed, 3));
  agents::ReplayBuffer<agents::Transition> buffer(sc.replay_capacity);

  SemanticEnv env(cfg.env);
  std::vector<double> obs = env.reset(env_rng);
  EpisodeAccumulator acc;
  int episode = 0;
  for (std::int64_t t = 0; t < cfg.train.steps; ++t) {
    std::vector<double> raw = t < sc.warmup_steps ? uniform_raw(env.raw_action_dim(), act_rng)
                                                  : agent.select(obs, true, act_rng);
    StepResult res = env.step(env.project(raw), env_rng);
    acc.ret += res.reward;
    ++acc.slots;
    buffer.push({obs, std::move(raw), learner_reward(res, cfg) * sc.reward_scale, res.observation,
                 terminal(env)});

    if (t + 1 >= sc.warmup_steps) {
      for (int u = 0; u < sc.updates_per_step; ++u) {
        auto batch = buffer.sample(static_cast<std::size_t>(sc.batch_size), upd_rng);
        agents::SacLosses l = agent.update(batch, upd_rng);
        acc.critic += 0.5 * (l.critic1 + l.critic2);
        acc.actor += l.actor;
        ++acc.updates;
      }
    }

    if (res.done) {
      if (log) log->push_back(acc.finish(t + 1, episode));
      acc = {};
      ++episode;
      obs = env.reset(env_rng);
    } else {
      obs = std::move(res.observation);
    }
  }
}

void train_dqn(agents::DqnAgent& agent, const ExperimentConfig& cfg, std::uint64_t seed,
               std::vector<TrainingRow>* log) {
  const auto& dc = cfg.dqn;
  Rng env_rng(derive_seed(seed, 1));
  Rng act_rng(derive_seed(seed, 2));
  Rng upd_rng(derive_seed(seed, 3));
  agents::ReplayBuffer<agents::DqnTransition> buffer(dc.replay_capacity);

  SemanticEnv env(cfg.env);
  std::vector<double> obs = env.reset(env_rng);
  EpisodeAccumulator acc;
  int episode = 0;
  for (std::int64_t t = 0; t < cfg.train.steps; ++t) {
    const double eps = t < dc.warmup_steps ? 1.0 : agent.epsilon_at(t - dc.warmup_steps);
    const std::size_t a = agent.select(obs, eps, act_rng);
    StepResult res = env.step(agent.space().decode(a), env_rng);
    acc.ret += res.reward;
    ++acc.slots;
    buffer.push({obs, a, learner_reward(res, cfg) * dc.reward_scale, res.observation, terminal(env)});

    if (t + 1 >= dc.warmup_steps) {
      for (int u = 0; u < dc.updates_per_step; ++u) {
        auto batch = buffer.sample(static_cast<std::size_t>(dc.batch_size), upd_rng);
        acc.critic += agent.update(batch).td_loss;
        ++acc.updates;
      }
    }
    if ((t + 1) % dc.target_sync_interval == 0) agent.sync_target();

    if (res.done) {
      if (log) log->push_back(acc.finish(t + 1, episode));
      acc = {};
      ++episode;
      obs = env.reset(env_rng);
    } else {
      obs = std::move(res.observation);
    }
  }
}

EnvConfig resolved(EnvConfig env) {
  resolve_channel_scale(env);
  return env;
}

}  // namespace

TrainedAgent make_agent(const ExperimentConfig& cfg, const std::string& kind, std::uint64_t seed) {
  Rng init_rng(derive_seed(seed, 0));
  const int obs_dim = observation_dim(cfg.env);
  TrainedAgent out;
  out.kind = kind;
  if (kind == "sac") {
    out.sac = std::make_unique<agents::SacAgent>(obs_dim, raw_action_dim(cfg.env), cfg.sac,
                                                 init_rng);
  } else if (kind == "dqn") {
    const auto& n = cfg.env.network;
    agents::JointActionSpace space(n.num_bs, n.num_users, cfg.env.profile.max_depth(),
                                   cfg.dqn.max_joint_actions);
    out.dqn = std::make_unique<agents::DqnAgent>(obs_dim, std::move(space), cfg.dqn, init_rng);
  } else {
    throw ConfigError("agent '" + kind + "' is not a learning agent");
  }
  return out;
}

TrainedAgent train_agent(const ExperimentConfig& cfg, const std::string& kind, std::uint64_t seed,
                         std::vector<TrainingRow>* log) {
  TrainedAgent agent = make_agent(cfg, kind, seed);
  if (agent.sac) {
    train_sac(*agent.sac, cfg, seed, log);
  } else {
    train_dqn(*agent.dqn, cfg, seed, log);
  }
  agent.training_steps = cfg.train.steps;
  return agent;
}

std::unique_ptr<Policy> make_policy(const std::string& kind, const TrainedAgent* agent,
                                    int max_depth) {
  if (!is_learning_agent(kind)) return agents::make_baseline(kind, max_depth);
  if (!agent || agent->kind != kind) throw StateError("agent '" + kind + "' needs trained weights");
  if (agent->sac) return std::make_unique<agents::SacPolicy>(*agent->sac, false);
  return std::make_unique<agents::DqnPolicy>(*agent->dqn, 0.0);
}

std::uint64_t episode_seed(std::uint64_t seed, int episode) {
  return derive_seed(seed, 0x10000u + static_cast<std::uint64_t>(episode));
}

std::vector<EpisodeSummary> evaluate(Policy& policy, const EnvConfig& env, std::uint64_t seed,
                                     int episodes) {
  const EnvConfig cfg = resolved(env);
  std::vector<EpisodeSummary> out;
  out.reserve(static_cast<std::size_t>(std::max(episodes, 0)));
  for (int e = 0; e < episodes; ++e) {
    EpisodeSummary s;
    s.episode = e;
    s.seed = episode_seed(seed, e);
    Rng rng(s.seed);
    const EpisodeLog log = run_episode(policy, cfg, rng);
    s.sum_sccm = log.sum_sccm;
    s.sum_reward = log.sum_reward;
    s.delay_violations = log.delay_violations;
    s.psnr_violations = log.psnr_violations;
    s.mean_depth = log.mean_depth;
    s.slots_used = log.slots_used;
    s.tasks_completed = log.tasks_completed;
    s.depth_counts.assign(static_cast<std::size_t>(cfg.profile.max_depth()), 0);
    for (const auto& t : log.tasks) ++s.depth_counts[static_cast<std::size_t>(t.depth - 1)];
    out.push_back(std::move(s));
  }
  return out;
}

Stats summarize(const std::vector<double>& values) {
  Stats s;
  s.n = values.size();
  if (values.empty()) return s;
  double sum = 0.0;
  for (double v : values) sum += v;
  s.mean = sum / static_cast<double>(s.n);
  if (s.n > 1) {
    double ss = 0.0;
    for (double v : values) ss += (v - s.mean) * (v - s.mean);
    s.ci95 = 1.96 * std::sqrt(ss / static_cast<double>(s.n - 1)) / std::sqrt(static_cast<double>(s.n));
  }
  std::vector<double> sorted = values;
  std::sort(sorted.begin(), sorted.end());
  const std::size_t mid = s.n / 2;
  s.median = s.n % 2 ? sorted[mid] : 0.5 * (sorted[mid - 1] + sorted[mid]);
  return s;
}

std::string resolve_output_dir(const ExperimentConfig& cfg, const std::string& cli_out) {
  if (!cli_out.empty()) return cli_out;
  if (const char* env = std::getenv(kOutputDirEnv); env && *env) return env;
  return cfg.output_dir;
}

void write_episodes_csv(const std::string& path, const std::vector<EpisodeSummary>& rows) {
  std::ostringstream out;
  out << "episode,seed,sum_sccm,sum_reward,delay_violations,psnr_violations,mean_depth,slots_used\n";
  for (const auto& r : rows) {
    out << r.episode << ',' << r.seed << ',' << num(r.sum_sccm) << ',' << num(r.sum_reward) << ','
        << r.delay_violations << ',' << r.psnr_violations << ',' << num(r.mean_depth) << ','
        << r.slots_used << '\n';
  }
  write_text(path, out.str());
}

void write_training_csv(const std::string& path, const std::vector<TrainingRow>& rows) {
  std::ostringstream out;
  out << "step,episode,episode_return,critic_loss,actor_loss,slots\n";
  for (const auto& r : rows) {
    out << r.step << ',' << r.episode << ',' << num(r.episode_return) << ',' << num(r.critic_loss)
        << ',' << num(r.actor_loss) << ',' << r.slots << '\n';
  }
  write_text(path, out.str());
}

void write_metadata(const std::string& artifact_path, const ExperimentConfig& cfg,
                    std::uint64_t seed, const std::string& command) {
  json meta = {{"schema_version", kOutputSchemaVersion},
               {"artifact_version", kArtifactVersion},
               {"command", command},
               {"config_hash", config_hash(cfg)},
               {"seed", seed},
               {"observation_layout_version", kObservationLayoutVersion},
               {"config", to_json(cfg)}};
  write_text(artifact_path + ".meta.json", meta.dump(2) + "\n");
}

void save_checkpoint(const std::string& dir, const TrainedAgent& agent,
                     const ExperimentConfig& cfg) {
  fs::create_directories(dir);
  const json cj = to_json(cfg);
  json manifest = {{"schema_version", kOutputSchemaVersion},
                   {"artifact_version", kArtifactVersion},
                   {"agent", agent.kind},
                   {"observation_layout_version", kObservationLayoutVersion},
                   {"observation_dim", observation_dim(cfg.env)},
                   {"num_bs", cfg.env.network.num_bs},
                   {"num_users", cfg.env.network.num_users},
                   {"max_depth", cfg.env.profile.max_depth()},
                   {"channel_scale", cfg.env.channel_scale},
                   {"training_steps", agent.training_steps},
                   {"config_hash", config_hash(cfg)},
                   {"hyperparameters", cj.at(agent.kind)}};
  if (agent.sac) {
    manifest["action_dim"] = agent.sac->action_dim();
    agent.sac->save(dir);
  } else {
    manifest["action_dim"] = agent.dqn->space().size();
    agent.dqn->save(dir);
  }
  write_text(fs::path(dir) / "manifest.json", manifest.dump(2) + "\n");
}

TrainedAgent load_checkpoint(const std::string& dir, const ExperimentConfig& cfg) {
  const fs::path mpath = fs::path(dir) / "manifest.json";
  if (!fs::exists(mpath)) throw ConfigError("checkpoint " + dir + " has no manifest.json");
  const json m = read_json(mpath);
  auto field = [&](const char* key) -> const json& {
    if (!m.contains(key)) throw ConfigError(mpath.string() + ": missing " + key);
    return m.at(key);
  };
  const std::string kind = field("agent").get<std::string>();
  if (kind != cfg.agent) {
    throw ConfigError("checkpoint holds a '" + kind + "' agent but '" + cfg.agent + "' was requested");
  }
  const int layout = field("observation_layout_version").get<int>();
  if (layout != kObservationLayoutVersion) {
    throw ConfigError("checkpoint observation layout version " + std::to_string(layout) +
                      " does not match this build (" + std::to_string(kObservationLayoutVersion) + ")");
  }
  if (field("observation_dim").get<int>() != observation_dim(cfg.env) ||
      field("num_bs").get<int>() != cfg.env.network.num_bs ||
      field("num_users").get<int>() != cfg.env.network.num_users ||
      field("max_depth").get<int>() != cfg.env.profile.max_depth()) {
    throw ConfigError("checkpoint environment shape does not match the config");
  }

  // Network shapes come from the checkpoint's own hyperparameters.
  ExperimentConfig ccfg = cfg;
  const json hp = field("hyperparameters");
  if (kind == "sac") {
    ccfg.sac.hidden = hp.at("hidden").get<std::vector<int>>();
  } else {
    ccfg.dqn.hidden = hp.at("hidden").get<std::vector<int>>();
    ccfg.dqn.max_joint_actions =
        std::max(ccfg.dqn.max_joint_actions, hp.at("max_joint_actions").get<std::size_t>());
  }
  TrainedAgent agent = make_agent(ccfg, kind, 0);
  if (agent.sac) {
    agent.sac->load(dir);
  } else {
    agent.dqn->load(dir);
  }
  agent.training_steps = field("training_steps").get<std::int64_t>();
  return agent;
}

namespace {

json summary_json(const ExperimentConfig& cfg, const std::string& agent, std::uint64_t seed,
                  const std::vector<EpisodeSummary>& rows) {
  std::vector<double> sccm, reward, depth;
  int dv = 0, pv = 0;
  std::int64_t done = 0;
  for (const auto& r : rows) {
    sccm.push_back(r.sum_sccm);
    reward.push_back(r.sum_reward);
    depth.push_back(r.mean_depth);
    dv += r.delay_violations;
    pv += r.psnr_violations;
    done += r.tasks_completed;
  }
  const Stats s = summarize(sccm);
  return {{"schema_version", kOutputSchemaVersion},
          {"agent", agent},
          {"seed", seed},
          {"config_hash", config_hash(cfg)},
          {"episodes", rows.size()},
          {"mean_sum_sccm", s.mean},
          {"ci95_sum_sccm", s.ci95},
          {"median_sum_sccm", s.median},
          {"mean_sum_reward", summarize(reward).mean},
          {"mean_depth", summarize(depth).mean},
          {"delay_violations", dv},
          {"psnr_violations", pv},
          {"tasks_completed", done}};
}

void write_json(const fs::path& path, const json& j, const ExperimentConfig& cfg,
                std::uint64_t seed, const std::string& command) {
  write_text(path, j.dump(2) + "\n");
  write_metadata(path.string(), cfg, seed, command);
}

}  // namespace

TrainOutcome run_train(const ExperimentConfig& cfg_in, const std::string& out_dir) {
  ExperimentConfig cfg = cfg_in;
  if (!is_learning_agent(cfg.agent)) {
    throw ConfigError("train needs a learning agent (sac or dqn), got '" + cfg.agent + "'");
  }
  resolve_channel_scale(cfg.env);
  const std::uint64_t seed = cfg.seeds.front();
  const fs::path out(out_dir);
  fs::create_directories(out);

  std::vector<TrainingRow> log;
  TrainedAgent agent = train_agent(cfg, cfg.agent, seed, &log);
  write_training_csv((out / "steps.csv").string(), log);
  write_metadata((out / "steps.csv").string(), cfg, seed, "train");
  save_checkpoint((out / "checkpoint").string(), agent, cfg);

  TrainOutcome outcome;
  outcome.out_dir = out_dir;
  auto policy = make_policy(cfg.agent, &agent, cfg.env.profile.max_depth());
  outcome.final_eval = evaluate(*policy, cfg.env, seed, cfg.train.eval_episodes);
  write_episodes_csv((out / "episodes.csv").string(), outcome.final_eval);
  write_metadata((out / "episodes.csv").string(), cfg, seed, "train");

  json summary = summary_json(cfg, cfg.agent, seed, outcome.final_eval);
  summary["training_steps"] = agent.training_steps;
  summary["training_episodes"] = log.size();
  write_json(out / "summary.json", summary, cfg, seed, "train");
  outcome.mean_sum_sccm = summary["mean_sum_sccm"].get<double>();
  return outcome;
}

std::vector<EpisodeSummary> run_eval(const ExperimentConfig& cfg_in, const std::string& out_dir,
                                     const std::string& checkpoint_dir) {
  ExperimentConfig cfg = cfg_in;
  resolve_channel_scale(cfg.env);
  const std::uint64_t seed = cfg.seeds.front();

  std::unique_ptr<TrainedAgent> agent;
  if (is_learning_agent(cfg.agent)) {
    if (checkpoint_dir.empty()) throw ConfigError("eval of '" + cfg.agent + "' needs --checkpoint");
    agent = std::make_unique<TrainedAgent>(load_checkpoint(checkpoint_dir, cfg));
  }
  auto policy = make_policy(cfg.agent, agent.get(), cfg.env.profile.max_depth());
  const auto rows = evaluate(*policy, cfg.env, seed, cfg.eval.episodes);

  const fs::path out(out_dir);
  write_episodes_csv((out / "episodes.csv").string(), rows);
  write_metadata((out / "episodes.csv").string(), cfg, seed, "eval");
  write_json(out / "summary.json", summary_json(cfg, cfg.agent, seed, rows), cfg, seed, "eval");
  return rows;
}

namespace {

const char* kSweepHeader =
    "weight_c,power_gain_db,agent,episodes,mean_sum_sccm,ci95_sum_sccm,median_sum_sccm,"
    "mean_sum_reward,mean_depth,delay_violation_rate,psnr_violation_rate\n";

std::string sweep_row(const SweepCell& c) {
  std::ostringstream out;
  out << num(c.weight_c) << ',' << num(c.power_gain_db) << ',' << c.agent << ',' << c.sum_sccm.n
      << ',' << num(c.sum_sccm.mean) << ',' << num(c.sum_sccm.ci95) << ','
      << num(c.sum_sccm.median) << ',' << num(c.sum_reward.mean) << ',' << num(c.mean_depth)
      << ',' << num(c.delay_violation_rate) << ',' << num(c.psnr_violation_rate) << '\n';
  return out.str();
}

SweepCell run_cell(const ExperimentConfig& base, double weight_c, double gain_db,
                   const std::string& kind) {
  ExperimentConfig cfg = base;
  cfg.env.weights = SccmWeights::from_compute_weight(weight_c);
  cfg.env.network.power_gain_db = gain_db;
  cfg.env.channel_scale = base.env.channel_scale;
  resolve_channel_scale(cfg.env);

  SweepCell cell;
  cell.weight_c = weight_c;
  cell.power_gain_db = gain_db;
  cell.agent = kind;
  cell.depth_counts.assign(static_cast<std::size_t>(cfg.env.profile.max_depth()), 0);

  std::vector<double> sccm, reward;
  double depth_sum = 0.0;
  std::int64_t started = 0, completed = 0, dv = 0, pv = 0;
  for (int k = 0; k < cfg.sweep.seeds_per_cell; ++k) {
    const std::uint64_t seed = cfg.seeds.front() + static_cast<std::uint64_t>(k);
    std::unique_ptr<TrainedAgent> agent;
    if (is_learning_agent(kind)) agent = std::make_unique<TrainedAgent>(train_agent(cfg, kind, seed));
    auto policy = make_policy(kind, agent.get(), cfg.env.profile.max_depth());
    for (const auto& r : evaluate(*policy, cfg.env, seed, cfg.eval.episodes)) {
      sccm.push_back(r.sum_sccm);
      reward.push_back(r.sum_reward);
      dv += r.delay_violations;
      pv += r.psnr_violations;
      completed += r.tasks_completed;
      for (std::size_t d = 0; d < r.depth_counts.size(); ++d) {
        cell.depth_counts[d] += r.depth_counts[d];
        started += r.depth_counts[d];
        depth_sum += static_cast<double>((d + 1) * r.depth_counts[d]);
      }
    }
  }
  cell.sum_sccm = summarize(sccm);
  cell.sum_reward = summarize(reward);
  cell.mean_depth = started ? depth_sum / static_cast<double>(started) : 0.0;
  cell.delay_violation_rate = completed ? static_cast<double>(dv) / completed : 0.0;
  cell.psnr_violation_rate = completed ? static_cast<double>(pv) / completed : 0.0;
  return cell;
}

}  // namespace

std::vector<SweepCell> run_sweep(const ExperimentConfig& cfg_in, const std::string& out_dir,
                                 const std::function<void(const SweepCell&)>& progress) {
  ExperimentConfig cfg = cfg_in;
  struct Key {
    double w, g;
    std::string agent;
  };
  std::vector<Key> keys;
  for (double w : cfg.sweep.weight_c) {
    for (double g : cfg.sweep.power_gain_db) {
      for (const auto& a : cfg.sweep.agents) keys.push_back({w, g, a});
    }
  }

  const fs::path out(out_dir);
  fs::create_directories(out / "cells");
  std::vector<SweepCell> cells(keys.size());
  std::exception_ptr failure;
  const long n = static_cast<long>(keys.size());

#pragma omp parallel for schedule(dynamic, 1)
  for (long i = 0; i < n; ++i) {
    try {
      const Key& k = keys[static_cast<std::size_t>(i)];
      cells[static_cast<std::size_t>(i)] = run_cell(cfg, k.w, k.g, k.agent);
      char name[32];
      std::snprintf(name, sizeof name, "cell_%03ld.csv", i);
      write_text(out / "cells" / name,
                 std::string(kSweepHeader) + sweep_row(cells[static_cast<std::size_t>(i)]));
      if (progress) {
#pragma omp critical(semcom_sweep_progress)
        progress(cells[static_cast<std::size_t>(i)]);
      }
    } catch (...) {
#pragma omp critical(semcom_sweep_failure)
      if (!failure) failure = std::current_exception();
    }
  }
  if (failure) std::rethrow_exception(failure);

  std::string body = kSweepHeader;
  std::string hist = "weight_c,power_gain_db,agent,depth,count\n";
  for (const auto& c : cells) {
    body += sweep_row(c);
    for (std::size_t d = 0; d < c.depth_counts.size(); ++d) {
      hist += num(c.weight_c) + ',' + num(c.power_gain_db) + ',' + c.agent + ',' +
              std::to_string(d + 1) + ',' + std::to_string(c.depth_counts[d]) + '\n';
    }
  }
  const std::uint64_t seed = cfg.seeds.front();
  write_text(out / "sweep.csv", body);
  write_metadata((out / "sweep.csv").string(), cfg, seed, "sweep");
  write_text(out / "depth_histogram.csv", hist);
  write_metadata((out / "depth_histogram.csv").string(), cfg, seed, "sweep");
  return cells;
}

void write_profile_table(const ExperimentConfig& cfg, const std::string& out_dir) {
  const auto& p = cfg.env.profile;
  const auto norm = normalize(p);
  std::ostringstream out;
  out << "depth,gflops,payload_bits,compute_norm,payload_norm,psnr_at_ref_db,sccm\n";
  for (std::size_t i = 0; i < p.entries.size(); ++i) {
    const auto& e = p.entries[i];
    out << e.depth << ',' << num(e.gflops) << ',' << e.payload_bits << ',' << num(norm[i].compute)
        << ',' << num(norm[i].payload) << ',' << num(psnr(p, e.depth, p.snr_ref_db)) << ','
        << num(sccm(cfg.env.weights, e.depth, p)) << '\n';
  }
  const fs::path path = fs::path(out_dir) / "profile_table.csv";
  write_text(path, out.str());
  write_metadata(path.string(), cfg, cfg.seeds.front(), "profile-table");
}

}  // namespace semcom::experiments

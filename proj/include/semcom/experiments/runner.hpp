#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "semcom/experiments/config.hpp"

namespace semcom::experiments {

/// One row per finished training episode.
struct TrainingRow {
  std::int64_t step = 0;  // env steps taken when the episode ended
  int episode = 0;
  double episode_return = 0.0;
  double critic_loss = 0.0;  // mean over the episode's updates, 0 before warmup
  double actor_loss = 0.0;   // SAC only
  std::int64_t slots = 0;
};

/// A trained (or restored) learning agent. Exactly one of sac/dqn is set.
struct TrainedAgent {
  std::string kind;
  std::unique_ptr<agents::SacAgent> sac;
  std::unique_ptr<agents::DqnAgent> dqn;
  std::int64_t training_steps = 0;
};

/// Builds an untrained agent for `kind` sized for cfg.env.
TrainedAgent make_agent(const ExperimentConfig& cfg, const std::string& kind, std::uint64_t seed);

/// Trains from scratch for cfg.train.steps environment steps. env.channel_scale
/// must already be resolved.
TrainedAgent train_agent(const ExperimentConfig& cfg, const std::string& kind, std::uint64_t seed,
                         std::vector<TrainingRow>* log = nullptr);

/// Deterministic evaluation policy: SAC mean action, DQN greedy, or a baseline.
std::unique_ptr<Policy> make_policy(const std::string& kind, const TrainedAgent* agent,
                                    int max_depth);

struct EpisodeSummary {
  int episode = 0;
  std::uint64_t seed = 0;
  double sum_sccm = 0.0;
  double sum_reward = 0.0;
  int delay_violations = 0;
  int psnr_violations = 0;
  double mean_depth = 0.0;
  std::int64_t slots_used = 0;
  std::int64_t tasks_completed = 0;
  std::vector<std::int64_t> depth_counts;  // index d-1, started tasks
};

/// Episode i runs on episode_seed(seed, i), so two policies evaluated with
/// the same seed face identical placements, arrivals and fades.
std::uint64_t episode_seed(std::uint64_t seed, int episode);
std::vector<EpisodeSummary> evaluate(Policy& policy, const EnvConfig& env, std::uint64_t seed,
                                     int episodes);

struct Stats {
  double mean = 0.0;
  double ci95 = 0.0;  // half-width, normal approximation
  double median = 0.0;
  std::size_t n = 0;
};
Stats summarize(const std::vector<double>& values);

// Artifacts. Every CSV/JSON written below gets a <file>.meta.json sidecar
// with the config hash, seed and artifact version.

/// CLI --out wins, then SEMCOM_OUTPUT_DIR, then run.output_dir.
std::string resolve_output_dir(const ExperimentConfig& cfg, const std::string& cli_out);

void write_episodes_csv(const std::string& path, const std::vector<EpisodeSummary>& rows);
void write_training_csv(const std::string& path, const std::vector<TrainingRow>& rows);
void write_metadata(const std::string& artifact_path, const ExperimentConfig& cfg,
                    std::uint64_t seed, const std::string& command);

/// Writes networks plus manifest.json into dir.
void save_checkpoint(const std::string& dir, const TrainedAgent& agent, const ExperimentConfig& cfg);
/// Throws ConfigError when the manifest is missing, names another agent, or
/// records a different observation layout or env shape.
TrainedAgent load_checkpoint(const std::string& dir, const ExperimentConfig& cfg);

struct TrainOutcome {
  std::string out_dir;
  double mean_sum_sccm = 0.0;
  std::vector<EpisodeSummary> final_eval;
};
/// train: steps.csv, checkpoint/, episodes.csv of the closing evaluation, summary.json.
TrainOutcome run_train(const ExperimentConfig& cfg, const std::string& out_dir);

/// eval: episodes.csv and summary.json. Learning agents need a checkpoint.
std::vector<EpisodeSummary> run_eval(const ExperimentConfig& cfg, const std::string& out_dir,
                                     const std::string& checkpoint_dir);

struct SweepCell {
  double weight_c = 0.0;
  double power_gain_db = 0.0;
  std::string agent;
  Stats sum_sccm;
  Stats sum_reward;
  double mean_depth = 0.0;
  double delay_violation_rate = 0.0;  // per completed task
  double psnr_violation_rate = 0.0;
  std::vector<std::int64_t> depth_counts;
};

/// Cells run in parallel; each finished cell is also written to
/// cells/cell_<index>.csv, and sweep.csv is merged in grid order at the end.
/// `progress` (optional) is called after each cell, from the worker thread.
std::vector<SweepCell> run_sweep(const ExperimentConfig& cfg, const std::string& out_dir,
                                 const std::function<void(const SweepCell&)>& progress = {});

/// profile-table: depth, gflops, payload, normalized costs, PSNR at snr_ref.
void write_profile_table(const ExperimentConfig& cfg, const std::string& out_dir);

}  // namespace semcom::experiments

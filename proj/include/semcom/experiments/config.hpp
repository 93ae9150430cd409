#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "semcom/agents/dqn.hpp"
#include "semcom/agents/sac.hpp"
#include "semcom/env_mdp.hpp"

namespace semcom::experiments {

inline constexpr int kConfigSchemaVersion = 1;
inline constexpr int kOutputSchemaVersion = 1;
inline constexpr const char* kOutputDirEnv = "SEMCOM_OUTPUT_DIR";

struct TrainConfig {
  std::int64_t steps = 50000;
  int eval_episodes = 10;  // deterministic episodes run after training
  // Reward the learner sees: "accrued" (accrued_reward) or "completion"
  // (the environment reward). Logs and evaluation always use the latter.
  std::string credit = "accrued";
};

struct EvalConfig {
  int episodes = 30;
};

struct SweepSpec {
  std::vector<double> weight_c = {0.0, 0.25, 0.5, 0.75, 1.0};
  std::vector<double> power_gain_db = {2.0, 10.0};
  std::vector<std::string> agents = {"sac", "greedy"};
  int seeds_per_cell = 1;
};

struct ExperimentConfig {
  EnvConfig env;
  std::string agent = "sac";
  agents::SacConfig sac;
  agents::DqnConfig dqn;
  TrainConfig train;
  EvalConfig eval;
  SweepSpec sweep;
  std::vector<std::uint64_t> seeds = {1};
  std::string output_dir = "runs";
  double image_size_bytes = 50.0 * 1024.0;  // informational only

  void validate() const;
};

/// Reads and validates a config file. An empty file yields every default.
/// Unknown keys and out-of-range values throw ConfigError naming the key path.
ExperimentConfig parse_config(const std::string& path);
ExperimentConfig parse_config_text(const std::string& text);
ExperimentConfig config_from_json(const nlohmann::json& j);

/// Fully resolved config, every field present.
nlohmann::json to_json(const ExperimentConfig& cfg);
/// FNV-1a 64 of the canonical JSON dump, as 16 hex digits.
std::string config_hash(const ExperimentConfig& cfg);

bool is_learning_agent(const std::string& kind);
/// Throws ConfigError unless kind is sac, dqn, random, greedy or fixed:<d>.
void validate_agent_kind(const std::string& kind, int max_depth);

/// Fills env.channel_scale from calibration when it is not set.
void resolve_channel_scale(EnvConfig& env);

}  // namespace semcom::experiments

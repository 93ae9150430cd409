#pragma once

#include <cstdint>
#include <deque>
#include <optional>
#include <span>
#include <vector>

#include "semcom/association.hpp"
#include "semcom/common.hpp"
#include "semcom/net_model.hpp"
#include "semcom/semantic_model.hpp"
#include "semcom/traffic_model.hpp"

namespace semcom {

/// Bumped whenever the observation or raw-action layout changes; checkpoints
/// record it.
inline constexpr int kObservationLayoutVersion = 1;
/// Head-of-line age features saturate at this many multiples of L_max.
inline constexpr double kAgeFeatureCap = 4.0;

struct EnvConfig {
  NetworkConfig network;
  DepthProfile profile = DepthProfile::defaults();
  SccmWeights weights;
  ArrivalProcess arrival;
  std::int64_t l_max = 3;
  double psnr_min_db = 30.0;
  std::int64_t max_slots = 5000;
  // log1p-domain divisor for channel features; <= 0 means calibrate at construction.
  double channel_scale = 0.0;

  void validate() const;
};

/// log1p of the 99th percentile of |h|^2 over 10^4 samples from fresh
/// placements and fades of `cfg`, drawn from a fixed seed.
double calibrate_channel_scale(const NetworkConfig& cfg, int samples = 10000);

struct UserQueue {
  std::deque<Task> pending;
  std::optional<Task> serving;

  bool has_work() const { return serving.has_value() || !pending.empty(); }
};

enum class Termination { Running, AllTasksDone, MaxSlots };

struct EnvState {
  std::int64_t slot = 0;
  NodePlacement placement;
  ChannelMatrix channel;
  std::vector<UserQueue> queues;
  std::vector<std::int64_t> generated;
  std::int64_t next_task_id = 0;
  double slot_compute = 0.0;  // GFLOPs committed in the previous step
  double slot_comm = 0.0;     // payload bits committed in the previous step
  double cum_sccm = 0.0;
  double cum_reward = 0.0;
  std::int64_t tasks_completed = 0;
  Termination termination = Termination::Running;

  bool done() const { return termination != Termination::Running; }
};

struct Action {
  AssociationMatrix assoc;
  std::vector<int> depth;  // per user, 1..I
};

struct TaskStart {
  std::int64_t task_id = 0;
  int user = 0;
  int bs = 0;
  int depth = 0;
  double sccm = 0.0;
  double snr_db = 0.0;
  double psnr_db = 0.0;
  std::int64_t arrival_slot = 0;
  std::int64_t payload_bits = 0;
};

struct TaskDrain {
  std::int64_t task_id = 0;
  std::int64_t bits = 0;
};

struct TaskCompletion {
  std::int64_t task_id = 0;
  int user = 0;
  int depth = 0;
  std::int64_t delay = 0;
  double psnr_db = 0.0;
  double delay_hinge = 0.0;
  double psnr_hinge = 0.0;
  std::int64_t payload_total_bits = 0;
};

struct StepInfo {
  std::int64_t slot = 0;  // slot that was simulated
  std::vector<TaskStart> starts;
  std::vector<TaskDrain> drains;
  std::vector<TaskCompletion> completions;
  double charged_sccm = 0.0;
  double delay_penalty = 0.0;
  double psnr_penalty = 0.0;
  int delay_violations = 0;
  int psnr_violations = 0;
  // Tasks in the system this slot whose age already exceeds L_max.
  int overdue_tasks = 0;
  double slot_compute = 0.0;
  double slot_comm = 0.0;
  int arrivals = 0;
  Termination termination = Termination::Running;
};

struct StepResult {
  std::vector<double> observation;
  double reward = 0.0;
  bool done = false;
  StepInfo info;
};

/// Observation layout (version 1), all entries finite:
///   [0, M*N)        log1p(|h_{m,n}|^2) / channel_scale, row-major by BS
///   per user n, 4:  min(pending/10, 1), serving remaining bits / max payload,
///                   min(head-of-line age / L_max, kAgeFeatureCap), serving flag
///   last 2:         previous-step GFLOPs / (N * max gflops),
///                   previous-step bits / (N * max payload)
int observation_dim(const EnvConfig& cfg);
std::vector<double> observe(const EnvState& state, const EnvConfig& cfg);

/// M*N association scores followed by N depth values.
int raw_action_dim(const EnvConfig& cfg);

/// Depth bin for a raw value v in [-1, 1]: min(I, floor((v+1)/2 * I) + 1).
int depth_from_raw(double v, int max_depth);

/// Greedy one-to-one matching by descending score over BSs and users with
/// work; ties go to the lowest BS, then lowest user index.
Action project_action(std::span<const double> raw, const EnvState& state, const EnvConfig& cfg);

/// Same per-episode total as StepResult::reward for every task that completes,
/// with penalties charged as they accrue: one per overdue task per slot, and
/// the PSNR hinge at service start where it is already known.
double accrued_reward(const StepInfo& info, const EnvConfig& cfg);

class SemanticEnv {
 public:
  explicit SemanticEnv(EnvConfig cfg);

  std::vector<double> reset(Rng& rng);
  /// Continues from a given state, e.g. a crafted or logged one. Throws
  /// StateError if its shapes disagree with the config.
  std::vector<double> restore(EnvState state);
  /// Throws StateError once the episode is done or for an infeasible action.
  StepResult step(const Action& action, Rng& rng);

  std::vector<double> observe() const { return semcom::observe(state_, cfg_); }
  Action project(std::span<const double> raw) const {
    return project_action(raw, state_, cfg_);
  }

  const EnvState& state() const { return state_; }
  const EnvConfig& config() const { return cfg_; }
  int observation_dim() const { return semcom::observation_dim(cfg_); }
  int raw_action_dim() const { return semcom::raw_action_dim(cfg_); }

 private:
  EnvConfig cfg_;
  EnvState state_;
  bool initialized_ = false;
};

/// Anything that maps the current environment to a feasible action.
class Policy {
 public:
  virtual ~Policy() = default;
  virtual Action act(const SemanticEnv& env, std::span<const double> observation, Rng& rng) = 0;
};

struct SlotRecord {
  std::int64_t slot = 0;
  double reward = 0.0;
  double compute = 0.0;
  double comm = 0.0;
  double charged_sccm = 0.0;
  double delay_penalty = 0.0;
  double psnr_penalty = 0.0;
  int starts = 0;
  int completions = 0;
};

struct TaskRecord {
  std::int64_t id = 0;
  int user = 0;
  int depth = 0;
  std::int64_t arrival_slot = 0;
  std::int64_t start_slot = 0;
  std::optional<std::int64_t> finish_slot;
  double sccm = 0.0;
  double psnr_db = 0.0;
  std::optional<std::int64_t> delay;
  std::int64_t payload_total_bits = 0;
  std::int64_t bits_drained = 0;
};

struct EpisodeLog {
  std::vector<SlotRecord> slots;
  std::vector<TaskRecord> tasks;  // every started task, in start order
  double sum_sccm = 0.0;
  double sum_reward = 0.0;
  int delay_violations = 0;
  int psnr_violations = 0;
  double mean_depth = 0.0;
  std::int64_t slots_used = 0;
  std::int64_t tasks_completed = 0;
  Termination termination = Termination::Running;
};

/// Runs one episode. Environment and policy randomness come from two streams
/// seeded from `rng`, so every policy sees the same arrivals and fades.
EpisodeLog run_episode(Policy& policy, const EnvConfig& cfg, Rng& rng);

}  // namespace semcom

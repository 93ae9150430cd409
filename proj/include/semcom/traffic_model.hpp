#pragma once

#include <cstdint>
#include <limits>
#include <optional>
#include <vector>

#include "semcom/common.hpp"
#include "semcom/semantic_model.hpp"

namespace semcom {

enum class TaskStatus { Pending, Serving, Done };

/// One semantic transmission job bound to a user.
struct Task {
  std::int64_t id = 0;
  int user = 0;
  std::int64_t arrival_slot = 0;
  std::optional<std::int64_t> start_slot;
  std::optional<int> depth;
  std::int64_t payload_total_bits = 0;
  std::int64_t payload_remaining_bits = 0;
  std::optional<std::int64_t> finish_slot;
  double start_snr_db = 0.0;
  double psnr_db = 0.0;    // computed at start, checked at completion
  double sccm_value = 0.0;

  TaskStatus status() const {
    if (finish_slot) return TaskStatus::Done;
    if (start_slot) return TaskStatus::Serving;
    return TaskStatus::Pending;
  }
};

struct ArrivalProcess {
  double rate_per_slot = 0.2;  // Poisson mean per user per slot
  std::int64_t cap_per_user = 100;

  static constexpr std::int64_t kUnlimited = std::numeric_limits<std::int64_t>::max();

  void validate() const;
};

/// Per-user Poisson(rate) arrivals stamped with `slot`, truncated so no user's
/// lifetime count exceeds the cap. `generated` is updated in place; ids are
/// taken from `next_id`.
std::vector<Task> sample_arrivals(Rng& rng, const ArrivalProcess& process, std::int64_t slot,
                                  std::vector<std::int64_t>& generated, std::int64_t& next_id);

/// Locks the depth and commits payload, psi and PSNR. Throws StateError if the
/// task has already started.
void start_service(Task& task, int depth, const DepthProfile& profile, const SccmWeights& weights,
                   double snr_db, std::int64_t slot);

struct TransmitResult {
  std::int64_t drained_bits = 0;
  bool completed = false;
};

/// Drains min(bits, remaining); sets finish_slot when the payload empties.
/// Throws StateError unless the task is serving.
TransmitResult transmit(Task& task, std::int64_t bits, std::int64_t slot);

/// L = finish - arrival. Throws StateError unless the task is done.
std::int64_t delay(const Task& task);

inline double hinge(double x) { return x > 0.0 ? x : 0.0; }

}  // namespace semcom

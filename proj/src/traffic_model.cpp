#include "semcom/traffic_model.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace semcom {

void ArrivalProcess::validate() const {
  if (!(rate_per_slot >= 0.0) || !std::isfinite(rate_per_slot)) {
    throw ConfigError("traffic.rate_per_slot must be finite and >= 0");
  }
  if (cap_per_user < 0) throw ConfigError("traffic.cap_per_user must be >= 0");
}

std::vector<Task> sample_arrivals(Rng& rng, const ArrivalProcess& process, std::int64_t slot,
                                  std::vector<std::int64_t>& generated, std::int64_t& next_id) {
  std::vector<Task> out;
  if (process.rate_per_slot <= 0.0) return out;
  std::poisson_distribution<std::int64_t> count(process.rate_per_slot);
  for (std::size_t n = 0; n < generated.size(); ++n) {
    // Always draw, so the random stream does not depend on which users are capped.
    std::int64_t k = count(rng);
    k = std::min(k, process.cap_per_user - generated[n]);
    for (std::int64_t i = 0; i < k; ++i) {
      Task t;
      t.id = next_id++;
      t.user = static_cast<int>(n);
      t.arrival_slot = slot;
      out.push_back(t);
    }
    generated[n] += std::max<std::int64_t>(k, 0);
  }
  return out;
}

void start_service(Task& task, int depth, const DepthProfile& profile, const SccmWeights& weights,
                   double snr_db, std::int64_t slot) {
  if (task.status() != TaskStatus::Pending) {
    throw StateError("start_service: task " + std::to_string(task.id) + " already started");
  }
  if (slot < task.arrival_slot) throw StateError("start_service: slot precedes arrival");
  const auto& entry = profile.at(depth);
  task.depth = depth;
  task.payload_total_bits = entry.payload_bits;
  task.payload_remaining_bits = entry.payload_bits;
  task.sccm_value = sccm(weights, depth, profile);
  task.start_snr_db = snr_db;
  task.psnr_db = psnr(profile, depth, snr_db);
  task.start_slot = slot;
}

TransmitResult transmit(Task& task, std::int64_t bits, std::int64_t slot) {
  if (task.status() != TaskStatus::Serving) {
    throw StateError("transmit: task " + std::to_string(task.id) + " is not in service");
  }
  if (bits < 0) throw StateError("transmit: negative bit budget");
  TransmitResult r;
  r.drained_bits = std::min(bits, task.payload_remaining_bits);
  task.payload_remaining_bits -= r.drained_bits;
  if (task.payload_remaining_bits == 0) {
    task.finish_slot = slot;
    r.completed = true;
  }
  return r;
}

std::int64_t delay(const Task& task) {
  if (task.status() != TaskStatus::Done) {
    throw StateError("delay: task " + std::to_string(task.id) + " is not done");
  }
  return *task.finish_slot - task.arrival_slot;
}

}  // namespace semcom

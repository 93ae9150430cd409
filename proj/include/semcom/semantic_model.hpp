#pragma once

#include <cstdint>
#include <vector>

#include "semcom/common.hpp"

namespace semcom {

/// Surrogate for one encoder/decoder depth: compute per task, payload size and
/// reconstruction quality.
struct DepthProfileEntry {
  int depth = 1;
  double gflops = 1.0;              // encode + decode, per task
  std::int64_t payload_bits = 1;    // semantic information sent over the air
  double psnr_ref_db = 30.0;        // PSNR at snr_ref_db
  double psnr_slope_db_per_db = 0.0;
};

struct DepthProfile {
  std::vector<DepthProfileEntry> entries;  // ordered by depth, 1..I
  double snr_ref_db = 5.0;

  int max_depth() const { return static_cast<int>(entries.size()); }
  /// Throws ConfigError for a depth outside 1..I.
  const DepthProfileEntry& at(int depth) const;

  /// Placeholder six-depth table honoring the increasing-compute /
  /// decreasing-payload trend. Not measured data.
  static DepthProfile defaults();
};

/// Checks depths are 1..I without duplicates, gflops strictly increasing and
/// payload strictly decreasing. Throws ConfigError naming the offending pair.
const DepthProfile& validate_profile(const DepthProfile& profile);

struct NormalizedCost {
  double compute = 0.0;  // F / max F
  double payload = 0.0;  // D / max D
};

/// Per-depth costs scaled by the profile maxima into (0, 1].
std::vector<NormalizedCost> normalize(const DepthProfile& profile);

/// Computation/communication weights; the pair always sums to one.
class SccmWeights {
 public:
  SccmWeights() = default;
  /// weight_t = 1 - weight_c. Throws ConfigError outside [0, 1].
  static SccmWeights from_compute_weight(double weight_c);
  /// Throws ConfigError unless both lie in [0, 1] and sum to 1 (1e-12).
  SccmWeights(double weight_c, double weight_t);

  double compute() const { return weight_c_; }
  double transmit() const { return weight_t_; }

 private:
  double weight_c_ = 0.5;
  double weight_t_ = 0.5;
};

/// psi = w_c * F_norm(depth) + w_t * D_norm(depth).
double sccm(const SccmWeights& weights, int depth, const DepthProfile& profile);

/// Linear PSNR surrogate: psnr_ref - slope * max(0, snr_ref - snr).
double psnr(const DepthProfile& profile, int depth, double snr_db);

}  // namespace semcom

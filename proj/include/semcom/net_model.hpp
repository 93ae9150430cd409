#pragma once

#include <cstdint>
#include <vector>

#include "semcom/association.hpp"
#include "semcom/common.hpp"

namespace semcom {

struct NetworkConfig {
  int num_bs = 3;
  int num_users = 3;
  double area_side_m = 50.0;
  double path_loss_exponent = 3.0;
  double power_gain_db = 5.0;  // P / sigma_n^2
  double bandwidth_hz = 10e6;
  double slot_duration_s = 1e-3;
  // Distance at which the mean path gain is 1. Mean gain is (d / d_ref)^-alpha.
  double reference_distance_m = 50.0;
  // false pins |g|^2 = 1 (static channel), used for degenerate test setups.
  bool rayleigh_fading = true;

  void validate() const;
  double power_gain_linear() const;
};

struct Point {
  double x = 0.0;
  double y = 0.0;
};

struct NodePlacement {
  std::vector<Point> bs_positions;
  std::vector<Point> user_positions;

  double distance(int bs, int user) const;
};

/// Minimum BS-user separation; closer pairs are re-drawn.
inline constexpr double kMinSeparationM = 0.1;
inline constexpr int kMaxPlacementAttempts = 1000;

/// I.i.d. uniform BS and user positions over the square. Throws ConfigError if
/// no placement with all separations >= kMinSeparationM is found.
NodePlacement place_nodes(Rng& rng, const NetworkConfig& cfg);

/// Per-slot block-fading power gains |h_{m,n}|^2, row-major (bs * N + user).
struct ChannelMatrix {
  int num_bs = 0;
  int num_users = 0;
  std::vector<double> power_gain;
  std::int64_t slot_index = 0;

  double gain(int bs, int user) const {
    return power_gain[static_cast<std::size_t>(bs) * num_users + user];
  }
  double& gain(int bs, int user) {
    return power_gain[static_cast<std::size_t>(bs) * num_users + user];
  }
};

/// Mean path gain (d / d_ref)^-alpha for one link.
double mean_path_gain(double distance_m, const NetworkConfig& cfg);

/// Rayleigh block fading: |h|^2 = e * (d / d_ref)^-alpha with e ~ Exp(1).
ChannelMatrix draw_channel(Rng& rng, const NodePlacement& placement, const NetworkConfig& cfg,
                           std::int64_t slot_index = 0);

/// Linear SINR per user under `assoc`; 0 for unassociated users. Only BSs that
/// serve some user interfere.
std::vector<double> link_sinr(const ChannelMatrix& channel, const AssociationMatrix& assoc,
                              const NetworkConfig& cfg);

/// Spectral efficiency log2(1 + SINR) per user, bits/s/Hz.
std::vector<double> link_rates(const ChannelMatrix& channel, const AssociationMatrix& assoc,
                               const NetworkConfig& cfg);

/// floor(rate * B * slot_duration).
std::int64_t bits_per_slot(double rate, const NetworkConfig& cfg);

}  // namespace semcom

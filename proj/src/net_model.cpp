#include "semcom/net_model.hpp"

#include <cmath>
#include <string>

namespace semcom {

void NetworkConfig::validate() const {
  if (num_bs < 1) throw ConfigError("network.num_bs must be >= 1");
  if (num_users < 1) throw ConfigError("network.num_users must be >= 1");
  if (!(area_side_m > 0.0)) throw ConfigError("network.area_side_m must be > 0");
  if (!(path_loss_exponent > 0.0)) throw ConfigError("network.path_loss_exponent must be > 0");
  if (!std::isfinite(power_gain_db)) throw ConfigError("network.power_gain_db must be finite");
  if (!(bandwidth_hz > 0.0)) throw ConfigError("network.bandwidth_hz must be > 0");
  if (!(slot_duration_s > 0.0)) throw ConfigError("network.slot_duration_s must be > 0");
  if (!(reference_distance_m > 0.0)) {
    throw ConfigError("network.reference_distance_m must be > 0");
  }
}

double NetworkConfig::power_gain_linear() const { return std::pow(10.0, power_gain_db / 10.0); }

double NodePlacement::distance(int bs, int user) const {
  const Point& a = bs_positions[bs];
  const Point& b = user_positions[user];
  return std::hypot(a.x - b.x, a.y - b.y);
}

NodePlacement place_nodes(Rng& rng, const NetworkConfig& cfg) {
  cfg.validate();
  std::uniform_real_distribution<double> coord(0.0, cfg.area_side_m);
  auto draw = [&] { return Point{coord(rng), coord(rng)}; };

  NodePlacement p;
  p.bs_positions.resize(cfg.num_bs);
  p.user_positions.resize(cfg.num_users);
  for (auto& b : p.bs_positions) b = draw();

  // Users are re-drawn individually until clear of every BS.
  for (int n = 0; n < cfg.num_users; ++n) {
    int attempts = 0;
    for (;;) {
      p.user_positions[n] = draw();
      bool clear = true;
      for (int m = 0; m < cfg.num_bs && clear; ++m) {
        clear = p.distance(m, n) >= kMinSeparationM;
      }
      if (clear) break;
      if (++attempts >= kMaxPlacementAttempts) {
        throw ConfigError("place_nodes: could not separate user " + std::to_string(n) +
                          " from all base stations; area too small");
      }
    }
  }
  return p;
}

double mean_path_gain(double distance_m, const NetworkConfig& cfg) {
  return std::pow(distance_m / cfg.reference_distance_m, -cfg.path_loss_exponent);
}

ChannelMatrix draw_channel(Rng& rng, const NodePlacement& placement, const NetworkConfig& cfg,
                           std::int64_t slot_index) {
  ChannelMatrix ch;
  ch.num_bs = cfg.num_bs;
  ch.num_users = cfg.num_users;
  ch.slot_index = slot_index;
  ch.power_gain.resize(static_cast<std::size_t>(cfg.num_bs) * cfg.num_users);
  std::exponential_distribution<double> fading(1.0);
  for (int m = 0; m < cfg.num_bs; ++m) {
    for (int n = 0; n < cfg.num_users; ++n) {
      const double e = fading(rng);
      ch.gain(m, n) = (cfg.rayleigh_fading ? e : 1.0) * mean_path_gain(placement.distance(m, n), cfg);
    }
  }
  return ch;
}

std::vector<double> link_sinr(const ChannelMatrix& channel, const AssociationMatrix& assoc,
                              const NetworkConfig& cfg) {
  const double snr = cfg.power_gain_linear();
  std::vector<double> sinr(channel.num_users, 0.0);
  for (int n = 0; n < channel.num_users; ++n) {
    const auto serving = assoc.bs_of(n);
    if (!serving) continue;
    double interference = 0.0;
    for (int v = 0; v < channel.num_bs; ++v) {
      if (v != *serving && assoc.bs_active(v)) interference += snr * channel.gain(v, n);
    }
    sinr[n] = snr * channel.gain(*serving, n) / (interference + 1.0);
  }
  return sinr;
}

std::vector<double> link_rates(const ChannelMatrix& channel, const AssociationMatrix& assoc,
                               const NetworkConfig& cfg) {
  auto rates = link_sinr(channel, assoc, cfg);
  for (auto& r : rates) r = std::log2(1.0 + r);
  return rates;
}

std::int64_t bits_per_slot(double rate, const NetworkConfig& cfg) {
  return static_cast<std::int64_t>(std::floor(rate * cfg.bandwidth_hz * cfg.slot_duration_s));
}

}  // namespace semcom

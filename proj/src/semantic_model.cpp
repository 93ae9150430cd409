#include "semcom/semantic_model.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace semcom {

namespace {

std::string pair_name(int a, int b) {
  return "(" + std::to_string(a) + "," + std::to_string(b) + ")";
}

}  // namespace

const DepthProfileEntry& DepthProfile::at(int depth) const {
  if (depth < 1 || depth > max_depth()) {
    throw ConfigError("unknown depth " + std::to_string(depth));
  }
  return entries[depth - 1];
}

DepthProfile DepthProfile::defaults() {
  DepthProfile p;
  p.snr_ref_db = 5.0;
  const double gflops[] = {2, 4, 7, 11, 16, 22};
  const std::int64_t payload[] = {80000, 56000, 40000, 30000, 23000, 18000};
  const double psnr_ref[] = {30.5, 31.0, 31.5, 32.0, 32.5, 33.0};
  for (int i = 0; i < 6; ++i) {
    p.entries.push_back({i + 1, gflops[i], payload[i], psnr_ref[i], 0.5});
  }
  return p;
}

const DepthProfile& validate_profile(const DepthProfile& profile) {
  const auto& e = profile.entries;
  if (e.empty()) throw ConfigError("profile: at least one depth required");
  for (std::size_t i = 0; i < e.size(); ++i) {
    for (std::size_t j = i + 1; j < e.size(); ++j) {
      if (e[i].depth == e[j].depth) {
        throw ConfigError("profile: duplicate depth " + std::to_string(e[i].depth));
      }
    }
  }
  for (std::size_t i = 0; i < e.size(); ++i) {
    if (e[i].depth != static_cast<int>(i) + 1) {
      throw ConfigError("profile: depths must be 1..I in order; found " +
                        std::to_string(e[i].depth) + " at position " + std::to_string(i + 1));
    }
    if (!(e[i].gflops > 0.0)) {
      throw ConfigError("profile: gflops must be > 0 at depth " + std::to_string(e[i].depth));
    }
    if (e[i].payload_bits <= 0) {
      throw ConfigError("profile: payload_bits must be > 0 at depth " +
                        std::to_string(e[i].depth));
    }
    if (!(e[i].psnr_slope_db_per_db >= 0.0) || !std::isfinite(e[i].psnr_ref_db)) {
      throw ConfigError("profile: invalid PSNR parameters at depth " +
                        std::to_string(e[i].depth));
    }
  }
  for (std::size_t i = 1; i < e.size(); ++i) {
    if (!(e[i].gflops > e[i - 1].gflops)) {
      throw ConfigError("profile: gflops not strictly increasing at depths " +
                        pair_name(e[i - 1].depth, e[i].depth));
    }
    if (!(e[i].payload_bits < e[i - 1].payload_bits)) {
      throw ConfigError("profile: payload_bits not strictly decreasing at depths " +
                        pair_name(e[i - 1].depth, e[i].depth));
    }
  }
  if (!std::isfinite(profile.snr_ref_db)) throw ConfigError("profile: snr_ref_db must be finite");
  return profile;
}

std::vector<NormalizedCost> normalize(const DepthProfile& profile) {
  double max_f = 0.0;
  double max_d = 0.0;
  for (const auto& e : profile.entries) {
    max_f = std::max(max_f, e.gflops);
    max_d = std::max(max_d, static_cast<double>(e.payload_bits));
  }
  std::vector<NormalizedCost> out;
  out.reserve(profile.entries.size());
  for (const auto& e : profile.entries) {
    out.push_back({e.gflops / max_f, static_cast<double>(e.payload_bits) / max_d});
  }
  return out;
}

SccmWeights SccmWeights::from_compute_weight(double weight_c) {
  if (!(weight_c >= 0.0 && weight_c <= 1.0)) {
    throw ConfigError("weight_c must lie in [0, 1]");
  }
  return SccmWeights(weight_c, 1.0 - weight_c);
}

SccmWeights::SccmWeights(double weight_c, double weight_t) : weight_c_(weight_c), weight_t_(weight_t) {
  if (!(weight_c >= 0.0 && weight_c <= 1.0) || !(weight_t >= 0.0 && weight_t <= 1.0)) {
    throw ConfigError("SCCM weights must lie in [0, 1]");
  }
  if (std::abs(weight_c + weight_t - 1.0) > 1e-12) {
    throw ConfigError("SCCM weights must sum to 1");
  }
}

double sccm(const SccmWeights& weights, int depth, const DepthProfile& profile) {
  profile.at(depth);
  const auto costs = normalize(profile);
  const auto& c = costs[depth - 1];
  return weights.compute() * c.compute + weights.transmit() * c.payload;
}

double psnr(const DepthProfile& profile, int depth, double snr_db) {
  const auto& e = profile.at(depth);
  return e.psnr_ref_db - e.psnr_slope_db_per_db * std::max(0.0, profile.snr_ref_db - snr_db);
}

}  // namespace semcom

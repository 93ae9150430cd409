#pragma once

#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>

namespace semcom {

using Rng = std::mt19937_64;

inline constexpr const char* kArtifactVersion = "1.0.0";

/// Raised for invalid configuration values and schema violations.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Raised when an object is used outside its lifecycle (starting a task twice,
/// stepping a finished episode, backprop through a stale cache).
class StateError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

// splitmix64 finalizer; used to derive independent stream seeds from one base seed.
inline std::uint64_t derive_seed(std::uint64_t base, std::uint64_t stream) {
  std::uint64_t z = base + 0x9E3779B97F4A7C15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

}  // namespace semcom

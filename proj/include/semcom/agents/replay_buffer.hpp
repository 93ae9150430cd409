#pragma once

#include <algorithm>
#include <cstdint>
#include <random>
#include <vector>

#include "semcom/common.hpp"

namespace semcom::agents {

struct Transition {
  std::vector<double> observation;
  std::vector<double> action;
  double reward = 0.0;
  std::vector<double> next_observation;
  bool done = false;
};

/// Fixed-capacity ring with FIFO eviction and uniform sampling with replacement.
template <class T>
class ReplayBuffer {
 public:
  explicit ReplayBuffer(std::size_t capacity) : capacity_(capacity) {
    if (capacity == 0) throw ConfigError("replay buffer capacity must be > 0");
    items_.reserve(std::min<std::size_t>(capacity, 1 << 16));
  }

  void push(T item) {
    if (items_.size() < capacity_) {
      items_.push_back(std::move(item));
    } else {
      items_[head_] = std::move(item);
    }
    head_ = (head_ + 1) % capacity_;
    ++insertions_;
  }

  std::size_t size() const { return items_.size(); }
  std::size_t capacity() const { return capacity_; }
  std::uint64_t insertions() const { return insertions_; }
  bool empty() const { return items_.empty(); }

  /// i = 0 is the oldest retained item.
  const T& at(std::size_t i) const {
    if (items_.size() < capacity_) return items_.at(i);
    return items_.at((head_ + i) % capacity_);
  }

  std::vector<const T*> sample(std::size_t batch, Rng& rng) const {
    if (items_.empty()) throw StateError("cannot sample an empty replay buffer");
    std::uniform_int_distribution<std::size_t> pick(0, items_.size() - 1);
    std::vector<const T*> out;
    out.reserve(batch);
    for (std::size_t i = 0; i < batch; ++i) out.push_back(&items_[pick(rng)]);
    return out;
  }

 private:
  std::size_t capacity_;
  std::size_t head_ = 0;
  std::uint64_t insertions_ = 0;
  std::vector<T> items_;
};

}  // namespace semcom::agents

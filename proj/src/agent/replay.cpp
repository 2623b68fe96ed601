// SPDX-License-Identifier: Apache-2.0

#include "starris/agent/replay.hpp"

#include <algorithm>

namespace starris {

ReplayBuffer::ReplayBuffer(std::size_t capacity) : capacity_(capacity) {
  if (capacity == 0) throw ConfigError("replay capacity must be positive");
}

void ReplayBuffer::push(Transition t) {
  if (data_.size() < capacity_) {
    data_.push_back(std::move(t));
  } else {
    data_[cursor_] = std::move(t);
  }
  cursor_ = (cursor_ + 1) % capacity_;
}

std::vector<std::size_t> ReplayBuffer::sample_indices(std::size_t batch, Rng& rng) const {
  const std::size_t n = data_.size();
  if (batch > n)
    throw BufferUnderflow("need " + std::to_string(batch) + " transitions, buffer holds " + std::to_string(n));
  // Floyd's algorithm: distinct indices without touching the whole range.
  std::vector<std::size_t> out;
  out.reserve(batch);
  for (std::size_t j = n - batch; j < n; ++j) {
    const std::size_t t = std::uniform_int_distribution<std::size_t>(0, j)(rng);
    if (std::find(out.begin(), out.end(), t) == out.end())
      out.push_back(t);
    else
      out.push_back(j);
  }
  return out;
}

}  // namespace starris

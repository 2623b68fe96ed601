// SPDX-License-Identifier: Apache-2.0
//
// Fixed-capacity ring of transitions with uniform minibatch sampling.

#pragma once

#include "starris/env.hpp"

#include <cstddef>
#include <vector>

namespace starris {

class ReplayBuffer {
 public:
  explicit ReplayBuffer(std::size_t capacity);

  // Overwrites the oldest record once full.
  void push(Transition t);
  std::size_t size() const { return data_.size(); }
  std::size_t capacity() const { return capacity_; }
  const Transition& at(std::size_t k) const { return data_.at(k); }

  // `batch` distinct indices, uniformly at random. Throws BufferUnderflow when
  // fewer records are stored.
  std::vector<std::size_t> sample_indices(std::size_t batch, Rng& rng) const;

 private:
  std::size_t capacity_;
  std::size_t cursor_ = 0;
  std::vector<Transition> data_;
};

}  // namespace starris

// Copyright 2026 The QNav Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <array>
#include <cstddef>
#include <stdexcept>
#include <vector>

namespace qnav::rl {

struct Transition {
    std::array<double, 3> state{};
    int action = 0;
    double reward = 0.0;
    std::array<double, 3> next_state{};
    bool terminal = false;
};

/// Bounded FIFO; pushing past capacity evicts the oldest entry. Index 0 is
/// always the oldest stored transition.
class ReplayBuffer {
  public:
    explicit ReplayBuffer(std::size_t capacity = 20000) : capacity_(capacity) {
        if (capacity == 0) throw std::invalid_argument("capacity must be positive");
        storage_.reserve(capacity);
    }

    std::size_t capacity() const { return capacity_; }
    std::size_t size() const { return storage_.size(); }

    void push(const Transition& t) {
        if (storage_.size() < capacity_) {
            storage_.push_back(t);
        } else {
            storage_[head_] = t;
            head_ = (head_ + 1) % capacity_;
        }
    }

    const Transition& operator[](std::size_t i) const {
        if (i >= storage_.size()) throw std::out_of_range("buffer index");
        return storage_[(head_ + i) % storage_.size()];
    }

  private:
    std::size_t capacity_;
    std::size_t head_ = 0;  // oldest slot once the ring is full
    std::vector<Transition> storage_;
};

}  // namespace qnav::rl

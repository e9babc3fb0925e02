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

#include <cstddef>
#include <span>
#include <vector>

namespace qnav::nn {

/// Adaptive-moment optimizer over named parameter groups, each a contiguous
/// block with its own learning rate. beta1 = 0.9, beta2 = 0.999, eps = 1e-8,
/// with bias correction. A step whose gradients contain any non-finite value
/// is rejected: parameters, moments, and the step counter stay untouched and
/// step() returns false.
class AdamOptimizer {
  public:
    AdamOptimizer() = default;

    /// Registers a block of `size` parameters updated at `lr`; returns the
    /// group index. All groups must be added before the first step.
    std::size_t add_group(std::size_t size, double lr);

    std::size_t group_count() const { return groups_.size(); }
    std::size_t step_count() const { return t_; }

    /// One update over every group. params[i] and grads[i] must match group
    /// i's registered size.
    bool step(std::span<std::span<double>> params,
              std::span<std::span<const double>> grads);

  private:
    struct Group {
        double lr;
        std::vector<double> m;
        std::vector<double> v;
    };
    std::vector<Group> groups_;
    std::size_t t_ = 0;
};

}  // namespace qnav::nn

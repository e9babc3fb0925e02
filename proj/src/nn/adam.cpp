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

#include "qnav/nn/adam.hpp"

#include <cmath>
#include <stdexcept>

namespace qnav::nn {

namespace {
constexpr double kBeta1 = 0.9;
constexpr double kBeta2 = 0.999;
constexpr double kEps = 1e-8;
}  // namespace

std::size_t AdamOptimizer::add_group(std::size_t size, double lr) {
    if (size == 0) throw std::invalid_argument("empty parameter group");
    if (!(lr > 0.0) || !std::isfinite(lr)) {
        throw std::invalid_argument("learning rate must be positive and finite");
    }
    if (t_ != 0) {
        throw std::logic_error("groups must be registered before stepping");
    }
    Group g;
    g.lr = lr;
    g.m.assign(size, 0.0);
    g.v.assign(size, 0.0);
    groups_.push_back(std::move(g));
    return groups_.size() - 1;
}

bool AdamOptimizer::step(std::span<std::span<double>> params,
                         std::span<std::span<const double>> grads) {
    if (params.size() != groups_.size() || grads.size() != groups_.size()) {
        throw std::invalid_argument("group count mismatch");
    }
    for (std::size_t g = 0; g < groups_.size(); ++g) {
        if (params[g].size() != groups_[g].m.size() ||
            grads[g].size() != groups_[g].m.size()) {
            throw std::invalid_argument("group size mismatch");
        }
    }
    for (const auto& grad : grads) {
        for (double x : grad) {
            if (!std::isfinite(x)) return false;
        }
    }

    t_ += 1;
    const double corr1 = 1.0 - std::pow(kBeta1, static_cast<double>(t_));
    const double corr2 = 1.0 - std::pow(kBeta2, static_cast<double>(t_));
    for (std::size_t g = 0; g < groups_.size(); ++g) {
        Group& grp = groups_[g];
        auto p = params[g];
        auto gr = grads[g];
        for (std::size_t i = 0; i < p.size(); ++i) {
            grp.m[i] = kBeta1 * grp.m[i] + (1.0 - kBeta1) * gr[i];
            grp.v[i] = kBeta2 * grp.v[i] + (1.0 - kBeta2) * gr[i] * gr[i];
            const double m_hat = grp.m[i] / corr1;
            const double v_hat = grp.v[i] / corr2;
            p[i] -= grp.lr * m_hat / (std::sqrt(v_hat) + kEps);
        }
    }
    return true;
}

}  // namespace qnav::nn

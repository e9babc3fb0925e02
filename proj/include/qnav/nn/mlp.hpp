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
#include <span>
#include <vector>

#include "qnav/rng.hpp"

namespace qnav::nn {

/// Fully connected net with exactly two hidden layers: affine, ReLU, affine,
/// ReLU, affine with linear output.
struct MlpArch {
    int input_dim = 0;
    std::array<int, 2> hidden{0, 0};
    int output_dim = 0;
};

void validate_arch(const MlpArch& arch);

/// weights[k] is the row-major fan_out x fan_in matrix of affine layer k,
/// biases[k] its fan_out offsets.
struct MlpParams {
    std::array<std::vector<double>, 3> weights;
    std::array<std::vector<double>, 3> biases;
};

void validate_mlp_params(const MlpArch& arch, const MlpParams& params);

std::size_t mlp_param_count(const MlpArch& arch);

/// Weights uniform in [-1/sqrt(fan_in), +1/sqrt(fan_in)], biases zero.
/// Draw order: layer 0 weights row-major, then layer 1, then layer 2.
MlpParams init_mlp_params(const MlpArch& arch, Rng& rng);

MlpParams zero_mlp_params(const MlpArch& arch);

std::vector<double> mlp_forward(std::span<const double> x,
                                const MlpParams& params, const MlpArch& arch);

/// Reverse-mode gradients of sum_j upstream_j * out_j with respect to every
/// weight and bias. The ReLU subgradient at exactly zero is taken as zero.
MlpParams mlp_backward(std::span<const double> x, const MlpParams& params,
                       const MlpArch& arch, std::span<const double> upstream);

/// Forward pass with reusable buffers for the training loop; not thread-safe.
class MlpEvaluator {
  public:
    explicit MlpEvaluator(const MlpArch& arch);

    void forward_into(std::span<const double> x, const MlpParams& params,
                      std::vector<double>& out);

    /// Adds the gradients of sum_j upstream_j * out_j into `grad`.
    void accumulate_gradient(std::span<const double> x, const MlpParams& params,
                             std::span<const double> upstream, MlpParams& grad);

  private:
    MlpArch arch_;
    std::vector<double> a1_, a2_, out_, d1_, d2_;
};

}  // namespace qnav::nn

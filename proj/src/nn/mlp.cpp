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

#include "qnav/nn/mlp.hpp"

#include <cmath>
#include <stdexcept>

namespace qnav::nn {

namespace {

std::array<int, 4> layer_dims(const MlpArch& arch) {
    return {arch.input_dim, arch.hidden[0], arch.hidden[1], arch.output_dim};
}

/// y = W x + b with W row-major fan_out x fan_in.
void affine(std::span<const double> w, std::span<const double> b,
            std::span<const double> x, std::vector<double>& y) {
    const std::size_t fan_out = b.size();
    const std::size_t fan_in = x.size();
    y.resize(fan_out);
    for (std::size_t i = 0; i < fan_out; ++i) {
        double acc = b[i];
        const double* row = w.data() + i * fan_in;
        for (std::size_t j = 0; j < fan_in; ++j) acc += row[j] * x[j];
        y[i] = acc;
    }
}

void relu_inplace(std::vector<double>& v) {
    for (double& x : v) {
        if (x < 0.0) x = 0.0;
    }
}

}  // namespace

void validate_arch(const MlpArch& arch) {
    if (arch.input_dim < 1 || arch.hidden[0] < 1 || arch.hidden[1] < 1 ||
        arch.output_dim < 1) {
        throw std::invalid_argument("all layer dims must be >= 1");
    }
}

void validate_mlp_params(const MlpArch& arch, const MlpParams& params) {
    validate_arch(arch);
    const auto dims = layer_dims(arch);
    for (int k = 0; k < 3; ++k) {
        const auto fan_in = static_cast<std::size_t>(dims[k]);
        const auto fan_out = static_cast<std::size_t>(dims[k + 1]);
        if (params.weights[k].size() != fan_in * fan_out ||
            params.biases[k].size() != fan_out) {
            throw std::invalid_argument("parameter shape does not match arch");
        }
        for (double v : params.weights[k]) {
            if (!std::isfinite(v)) throw std::invalid_argument("non-finite weight");
        }
        for (double v : params.biases[k]) {
            if (!std::isfinite(v)) throw std::invalid_argument("non-finite bias");
        }
    }
}

std::size_t mlp_param_count(const MlpArch& arch) {
    validate_arch(arch);
    const auto dims = layer_dims(arch);
    std::size_t total = 0;
    for (int k = 0; k < 3; ++k) {
        total += static_cast<std::size_t>(dims[k]) * dims[k + 1] + dims[k + 1];
    }
    return total;
}

MlpParams init_mlp_params(const MlpArch& arch, Rng& rng) {
    validate_arch(arch);
    const auto dims = layer_dims(arch);
    MlpParams p;
    for (int k = 0; k < 3; ++k) {
        const auto fan_in = static_cast<std::size_t>(dims[k]);
        const auto fan_out = static_cast<std::size_t>(dims[k + 1]);
        const double bound = 1.0 / std::sqrt(static_cast<double>(fan_in));
        p.weights[k].resize(fan_in * fan_out);
        for (double& v : p.weights[k]) v = rng.uniform(-bound, bound);
        p.biases[k].assign(fan_out, 0.0);
    }
    return p;
}

MlpParams zero_mlp_params(const MlpArch& arch) {
    validate_arch(arch);
    const auto dims = layer_dims(arch);
    MlpParams p;
    for (int k = 0; k < 3; ++k) {
        p.weights[k].assign(static_cast<std::size_t>(dims[k]) * dims[k + 1], 0.0);
        p.biases[k].assign(static_cast<std::size_t>(dims[k + 1]), 0.0);
    }
    return p;
}

std::vector<double> mlp_forward(std::span<const double> x,
                                const MlpParams& params, const MlpArch& arch) {
    validate_mlp_params(arch, params);
    MlpEvaluator eval(arch);
    std::vector<double> out;
    eval.forward_into(x, params, out);
    return out;
}

MlpParams mlp_backward(std::span<const double> x, const MlpParams& params,
                       const MlpArch& arch, std::span<const double> upstream) {
    validate_mlp_params(arch, params);
    MlpEvaluator eval(arch);
    MlpParams grad = zero_mlp_params(arch);
    eval.accumulate_gradient(x, params, upstream, grad);
    return grad;
}

MlpEvaluator::MlpEvaluator(const MlpArch& arch) : arch_(arch) {
    validate_arch(arch);
}

void MlpEvaluator::forward_into(std::span<const double> x,
                                const MlpParams& params,
                                std::vector<double>& out) {
    if (x.size() != static_cast<std::size_t>(arch_.input_dim)) {
        throw std::invalid_argument("input dim mismatch");
    }
    affine(params.weights[0], params.biases[0], x, a1_);
    relu_inplace(a1_);
    affine(params.weights[1], params.biases[1], a1_, a2_);
    relu_inplace(a2_);
    affine(params.weights[2], params.biases[2], a2_, out);
}

void MlpEvaluator::accumulate_gradient(std::span<const double> x,
                                       const MlpParams& params,
                                       std::span<const double> upstream,
                                       MlpParams& grad) {
    if (upstream.size() != static_cast<std::size_t>(arch_.output_dim)) {
        throw std::invalid_argument("upstream dim mismatch");
    }
    for (int k = 0; k < 3; ++k) {
        if (grad.weights[k].size() != params.weights[k].size() ||
            grad.biases[k].size() != params.biases[k].size()) {
            throw std::invalid_argument("gradient accumulator shape mismatch");
        }
    }
    forward_into(x, params, out_);

    // d(loss)/d(bias) at the output layer is the upstream itself.
    const std::size_t h1 = a1_.size();
    const std::size_t h2 = a2_.size();
    const std::size_t n_out = out_.size();

    for (std::size_t i = 0; i < n_out; ++i) {
        const double u = upstream[i];
        grad.biases[2][i] += u;
        double* wrow = grad.weights[2].data() + i * h2;
        for (std::size_t j = 0; j < h2; ++j) wrow[j] += u * a2_[j];
    }

    d2_.assign(h2, 0.0);
    for (std::size_t j = 0; j < h2; ++j) {
        if (a2_[j] <= 0.0) continue;  // ReLU gate, subgradient 0 at 0
        double acc = 0.0;
        for (std::size_t i = 0; i < n_out; ++i) {
            acc += upstream[i] * params.weights[2][i * h2 + j];
        }
        d2_[j] = acc;
    }

    for (std::size_t i = 0; i < h2; ++i) {
        const double u = d2_[i];
        if (u == 0.0) continue;
        grad.biases[1][i] += u;
        double* wrow = grad.weights[1].data() + i * h1;
        for (std::size_t j = 0; j < h1; ++j) wrow[j] += u * a1_[j];
    }

    d1_.assign(h1, 0.0);
    for (std::size_t j = 0; j < h1; ++j) {
        if (a1_[j] <= 0.0) continue;
        double acc = 0.0;
        for (std::size_t i = 0; i < h2; ++i) {
            acc += d2_[i] * params.weights[1][i * h1 + j];
        }
        d1_[j] = acc;
    }

    const std::size_t n_in = x.size();
    for (std::size_t i = 0; i < h1; ++i) {
        const double u = d1_[i];
        if (u == 0.0) continue;
        grad.biases[0][i] += u;
        double* wrow = grad.weights[0].data() + i * n_in;
        for (std::size_t j = 0; j < n_in; ++j) wrow[j] += u * x[j];
    }
}

}  // namespace qnav::nn

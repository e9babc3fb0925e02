// Copyright 2026 The QNav Authors.
// SPDX-License-Identifier: Apache-2.0

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <span>
#include <stdexcept>
#include <vector>

#include "oracles.hpp"
#include "qnav/nn/adam.hpp"
#include "qnav/nn/mlp.hpp"
#include "qnav/rng.hpp"

using namespace qnav;
using namespace qnav::nn;

namespace {

MlpArch make_arch(int in, int h1, int h2, int out) {
    MlpArch arch;
    arch.input_dim = in;
    arch.hidden = {h1, h2};
    arch.output_dim = out;
    return arch;
}

std::vector<double> flatten(const MlpParams& p) {
    std::vector<double> flat;
    for (int k = 0; k < 3; ++k) {
        flat.insert(flat.end(), p.weights[k].begin(), p.weights[k].end());
        flat.insert(flat.end(), p.biases[k].begin(), p.biases[k].end());
    }
    return flat;
}

MlpParams unflatten(const std::vector<double>& flat, const MlpParams& shape) {
    MlpParams p = shape;
    std::size_t i = 0;
    for (int k = 0; k < 3; ++k) {
        for (double& v : p.weights[k]) v = flat[i++];
        for (double& v : p.biases[k]) v = flat[i++];
    }
    return p;
}

}  // namespace

TEST_CASE("arch validation rejects non-positive widths") {
    CHECK_NOTHROW(validate_arch(make_arch(3, 8, 8, 3)));
    CHECK_THROWS_AS(validate_arch(make_arch(0, 8, 8, 3)),
                    std::invalid_argument);
    CHECK_THROWS_AS(validate_arch(make_arch(3, 0, 8, 3)),
                    std::invalid_argument);
    CHECK_THROWS_AS(validate_arch(make_arch(3, 8, 0, 3)),
                    std::invalid_argument);
    CHECK_THROWS_AS(validate_arch(make_arch(3, 8, 8, 0)),
                    std::invalid_argument);
}

TEST_CASE("parameter counts reproduce the catalog rows") {
    CHECK(mlp_param_count(make_arch(3, 8, 8, 3)) == 131);
    CHECK(mlp_param_count(make_arch(3, 16, 8, 3)) == 227);
    CHECK(mlp_param_count(make_arch(3, 16, 16, 3)) == 387);
    CHECK(mlp_param_count(make_arch(3, 32, 16, 3)) == 707);
    CHECK(mlp_param_count(make_arch(3, 64, 32, 3)) == 2435);
    CHECK(mlp_param_count(make_arch(3, 64, 64, 3)) == 4611);
    // Sum over affine layers of fan_out * (fan_in + 1).
    CHECK(mlp_param_count(make_arch(3, 32, 32, 3)) == 1283);
}

TEST_CASE("initial parameters are bounded by fan-in and have zero biases") {
    const MlpArch arch = make_arch(3, 16, 8, 3);
    Rng rng(5);
    const MlpParams p = init_mlp_params(arch, rng);
    const int fan_in[3] = {3, 16, 8};
    const int fan_out[3] = {16, 8, 3};
    for (int k = 0; k < 3; ++k) {
        REQUIRE(p.weights[k].size() ==
                static_cast<std::size_t>(fan_in[k] * fan_out[k]));
        REQUIRE(p.biases[k].size() == static_cast<std::size_t>(fan_out[k]));
        const double bound = 1.0 / std::sqrt(static_cast<double>(fan_in[k]));
        for (double w : p.weights[k]) {
            CHECK(w >= -bound);
            CHECK(w <= bound);
        }
        for (double b : p.biases[k]) CHECK(b == 0.0);
    }
    Rng rng2(5);
    const MlpParams q = init_mlp_params(arch, rng2);
    CHECK(p.weights[0] == q.weights[0]);
    CHECK(p.weights[2] == q.weights[2]);
}

TEST_CASE("zero parameters give zero output") {
    const MlpArch arch = make_arch(3, 4, 4, 2);
    const MlpParams p = zero_mlp_params(arch);
    const std::vector<double> x = {1.0, -2.0, 0.5};
    for (double v : mlp_forward(x, p, arch)) CHECK(v == 0.0);
}

TEST_CASE("forward pass matches a hand-computed example") {
    const MlpArch arch = make_arch(2, 2, 2, 2);
    MlpParams p = zero_mlp_params(arch);
    p.weights[0] = {1.0, -1.0, 0.5, 2.0};
    p.biases[0] = {0.5, -1.0};
    p.weights[1] = {1.0, 1.0, -1.0, 0.5};
    p.biases[1] = {0.0, 1.0};
    p.weights[2] = {2.0, -1.0, 1.0, 1.0};
    p.biases[2] = {-1.0, 0.0};
    // x = (1, 2): pre1 = (-0.5, 3.5) -> relu (0, 3.5);
    // pre2 = (3.5, 2.75) -> relu unchanged; out = (3.25, 6.25).
    const std::vector<double> x = {1.0, 2.0};
    const std::vector<double> out = mlp_forward(x, p, arch);
    REQUIRE(out.size() == 2);
    CHECK(out[0] == doctest::Approx(3.25).epsilon(1e-14));
    CHECK(out[1] == doctest::Approx(6.25).epsilon(1e-14));
}

TEST_CASE("forward pass is linear in the input when biases vanish") {
    const MlpArch arch = make_arch(3, 6, 5, 2);
    Rng rng(9);
    MlpParams p = init_mlp_params(arch, rng);
    for (int k = 0; k < 3; ++k) p.biases[k].assign(p.biases[k].size(), 0.0);
    const std::vector<double> x = {0.4, -1.1, 2.0};
    const std::vector<double> base = mlp_forward(x, p, arch);
    for (double alpha : {0.5, 2.0, 7.0}) {
        std::vector<double> scaled_x = x;
        for (double& v : scaled_x) v *= alpha;
        const std::vector<double> out = mlp_forward(scaled_x, p, arch);
        for (std::size_t j = 0; j < out.size(); ++j) {
            CHECK(out[j] == doctest::Approx(alpha * base[j]).epsilon(1e-12));
        }
    }
}

TEST_CASE("forward pass rejects shape mismatches") {
    const MlpArch arch = make_arch(3, 4, 4, 2);
    const MlpParams p = zero_mlp_params(arch);
    const std::vector<double> bad_x = {1.0, 2.0};
    CHECK_THROWS_AS(mlp_forward(bad_x, p, arch), std::invalid_argument);
    MlpParams bad_p = p;
    bad_p.weights[1].pop_back();
    const std::vector<double> x = {1.0, 2.0, 3.0};
    CHECK_THROWS_AS(mlp_forward(x, bad_p, arch), std::invalid_argument);
}

TEST_CASE("evaluator matches the one-shot forward pass") {
    const MlpArch arch = make_arch(3, 8, 8, 3);
    Rng rng(21);
    const MlpParams p = init_mlp_params(arch, rng);
    MlpEvaluator eval(arch);
    std::vector<double> out;
    for (int trial = 0; trial < 5; ++trial) {
        std::vector<double> x(3);
        for (double& v : x) v = rng.uniform(-2.0, 2.0);
        eval.forward_into(x, p, out);
        const std::vector<double> expected = mlp_forward(x, p, arch);
        REQUIRE(out.size() == expected.size());
        for (std::size_t j = 0; j < out.size(); ++j) {
            CHECK(out[j] == expected[j]);
        }
    }
}

TEST_CASE("backward pass matches finite differences on random nets") {
    Rng rng(33);
    for (int trial = 0; trial < 50; ++trial) {
        const MlpArch arch = make_arch(3, 4, 3, 2);
        MlpParams p = init_mlp_params(arch, rng);
        // A fully gated layer feeding zero biases puts the next
        // pre-activation exactly on the ReLU kink, where central
        // differences are invalid; random biases keep the probe off it.
        for (auto& layer_biases : p.biases) {
            for (double& b : layer_biases) b = rng.uniform(-0.5, 0.5);
        }
        std::vector<double> x(3);
        for (double& v : x) v = rng.uniform(-2.0, 2.0);
        std::vector<double> upstream(2);
        for (double& v : upstream) v = rng.uniform(-2.0, 2.0);

        const MlpParams grad = mlp_backward(x, p, arch, upstream);
        const std::vector<double> analytic = flatten(grad);

        const auto loss = [&](const std::vector<double>& flat) {
            const MlpParams trial_params = unflatten(flat, p);
            const std::vector<double> out = mlp_forward(x, trial_params, arch);
            double total = 0.0;
            for (std::size_t j = 0; j < out.size(); ++j) {
                total += upstream[j] * out[j];
            }
            return total;
        };
        const std::vector<double> point = flatten(p);
        for (std::size_t k = 0; k < point.size(); ++k) {
            const double fd = qnav::test::central_difference(loss, point, k, 1e-6);
            const double scale =
                std::max({1.0, std::abs(fd), std::abs(analytic[k])});
            CHECK(std::abs(analytic[k] - fd) / scale < 1e-6);
        }
    }
}

TEST_CASE("relu subgradient at exactly zero is zero") {
    // One hidden unit sits exactly at zero pre-activation; its incoming
    // weights must receive zero gradient.
    const MlpArch arch = make_arch(1, 1, 1, 1);
    MlpParams p = zero_mlp_params(arch);
    p.weights[0] = {1.0};
    p.biases[0] = {-2.0};  // pre-activation 1*2 - 2 = 0
    p.weights[1] = {3.0};
    p.weights[2] = {1.0};
    const std::vector<double> x = {2.0};
    const std::vector<double> upstream = {1.0};
    const MlpParams grad = mlp_backward(x, p, arch, upstream);
    CHECK(grad.weights[0][0] == 0.0);
    CHECK(grad.biases[0][0] == 0.0);
}

TEST_CASE("gradient accumulates across evaluator calls") {
    const MlpArch arch = make_arch(3, 4, 4, 2);
    Rng rng(39);
    const MlpParams p = init_mlp_params(arch, rng);
    const std::vector<double> x = {0.3, -0.7, 1.2};
    const std::vector<double> upstream = {1.0, -1.0};
    MlpEvaluator eval(arch);
    MlpParams grad = zero_mlp_params(arch);
    eval.accumulate_gradient(x, p, upstream, grad);
    eval.accumulate_gradient(x, p, upstream, grad);
    const MlpParams once = mlp_backward(x, p, arch, upstream);
    for (int k = 0; k < 3; ++k) {
        for (std::size_t i = 0; i < once.weights[k].size(); ++i) {
            CHECK(grad.weights[k][i] ==
                  doctest::Approx(2.0 * once.weights[k][i]).epsilon(1e-13));
        }
    }
}

TEST_CASE("adam groups must be registered before stepping") {
    AdamOptimizer opt;
    opt.add_group(1, 0.1);
    std::vector<double> p = {1.0};
    std::vector<double> g = {1.0};
    std::vector<std::span<double>> params = {std::span<double>(p)};
    std::vector<std::span<const double>> grads = {
        std::span<const double>(g)};
    CHECK(opt.step(params, grads));
    CHECK_THROWS_AS(opt.add_group(1, 0.1), std::logic_error);
}

TEST_CASE("adam rejects invalid group registrations") {
    AdamOptimizer opt;
    CHECK_THROWS_AS(opt.add_group(0, 0.1), std::invalid_argument);
    CHECK_THROWS_AS(opt.add_group(3, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(opt.add_group(3, -1.0), std::invalid_argument);
}

TEST_CASE("first adam step moves by roughly the learning rate") {
    AdamOptimizer opt;
    opt.add_group(1, 0.01);
    std::vector<double> p = {1.0};
    std::vector<double> g = {5.0};
    std::vector<std::span<double>> params = {std::span<double>(p)};
    std::vector<std::span<const double>> grads = {
        std::span<const double>(g)};
    CHECK(opt.step(params, grads));
    CHECK(opt.step_count() == 1);
    // m_hat = 5, v_hat = 25: update = lr * 5 / (5 + 1e-8).
    CHECK(p[0] == doctest::Approx(1.0 - 0.01 * 5.0 / (5.0 + 1e-8))
                      .epsilon(1e-14));
}

TEST_CASE("each group uses its own learning rate") {
    AdamOptimizer opt;
    opt.add_group(1, 0.1);
    opt.add_group(1, 0.001);
    std::vector<double> a = {0.0}, b = {0.0};
    std::vector<double> ga = {1.0}, gb = {1.0};
    std::vector<std::span<double>> params = {std::span<double>(a),
                                             std::span<double>(b)};
    std::vector<std::span<const double>> grads = {
        std::span<const double>(ga), std::span<const double>(gb)};
    CHECK(opt.step(params, grads));
    CHECK(a[0] == doctest::Approx(-0.1).epsilon(1e-6));
    CHECK(b[0] == doctest::Approx(-0.001).epsilon(1e-6));
}

TEST_CASE("zero gradients advance the step counter but not the parameters") {
    AdamOptimizer opt;
    opt.add_group(2, 0.05);
    std::vector<double> p = {1.5, -0.5};
    std::vector<double> g = {0.0, 0.0};
    std::vector<std::span<double>> params = {std::span<double>(p)};
    std::vector<std::span<const double>> grads = {
        std::span<const double>(g)};
    CHECK(opt.step(params, grads));
    CHECK(opt.step_count() == 1);
    CHECK(p[0] == 1.5);
    CHECK(p[1] == -0.5);
}

TEST_CASE("non-finite gradients reject the step atomically") {
    AdamOptimizer opt;
    opt.add_group(2, 0.05);
    std::vector<double> p = {1.0, 2.0};
    std::vector<double> bad = {0.5, std::numeric_limits<double>::quiet_NaN()};
    std::vector<std::span<double>> params = {std::span<double>(p)};
    std::vector<std::span<const double>> grads = {
        std::span<const double>(bad)};
    CHECK_FALSE(opt.step(params, grads));
    CHECK(opt.step_count() == 0);
    CHECK(p[0] == 1.0);
    CHECK(p[1] == 2.0);

    bad[1] = std::numeric_limits<double>::infinity();
    CHECK_FALSE(opt.step(params, grads));
    CHECK(opt.step_count() == 0);

    // A clean step afterwards behaves like the first step ever.
    std::vector<double> good = {1.0, 1.0};
    grads[0] = std::span<const double>(good);
    CHECK(opt.step(params, grads));
    CHECK(opt.step_count() == 1);
    CHECK(p[0] < 1.0);
}

TEST_CASE("adam enforces group count and size agreement") {
    AdamOptimizer opt;
    opt.add_group(2, 0.05);
    std::vector<double> p = {1.0, 2.0};
    std::vector<double> g = {1.0};
    std::vector<std::span<double>> params = {std::span<double>(p)};
    std::vector<std::span<const double>> grads = {
        std::span<const double>(g)};
    CHECK_THROWS_AS(opt.step(params, grads), std::invalid_argument);

    std::vector<std::span<const double>> empty;
    CHECK_THROWS_AS(opt.step(params, empty), std::invalid_argument);
}

TEST_CASE("adam minimizes a separable quadratic") {
    // f(p) = 0.5 * sum (p_i - target_i)^2, one group per coordinate pair.
    AdamOptimizer opt;
    opt.add_group(2, 0.01);
    std::vector<double> p = {0.0, -4.0};
    const std::vector<double> target = {3.0, 1.0};
    std::vector<double> g(2, 0.0);
    std::vector<std::span<double>> params = {std::span<double>(p)};
    std::vector<std::span<const double>> grads = {
        std::span<const double>(g)};
    for (int iter = 0; iter < 2000; ++iter) {
        for (int i = 0; i < 2; ++i) g[i] = p[i] - target[i];
        REQUIRE(opt.step(params, grads));
    }
    CHECK(std::abs(p[0] - 3.0) < 1e-2);
    CHECK(std::abs(p[1] - 1.0) < 1e-2);
}

TEST_CASE("mlp and adam together fit a tiny regression target") {
    // Descent smoke test: loss decreases by an order of magnitude.
    const MlpArch arch = make_arch(2, 8, 8, 1);
    Rng rng(77);
    MlpParams p = init_mlp_params(arch, rng);
    AdamOptimizer opt;
    for (int k = 0; k < 3; ++k) {
        opt.add_group(p.weights[k].size(), 1e-2);
        opt.add_group(p.biases[k].size(), 1e-2);
    }
    const std::vector<std::vector<double>> xs = {
        {0.0, 0.0}, {1.0, 0.0}, {0.0, 1.0}, {1.0, 1.0}};
    const std::vector<double> ys = {0.5, -1.0, 1.0, 2.0};

    const auto total_loss = [&]() {
        double loss = 0.0;
        for (std::size_t i = 0; i < xs.size(); ++i) {
            const double out = mlp_forward(xs[i], p, arch)[0];
            loss += 0.5 * (out - ys[i]) * (out - ys[i]);
        }
        return loss;
    };
    const double initial = total_loss();
    for (int iter = 0; iter < 500; ++iter) {
        MlpParams grad = zero_mlp_params(arch);
        MlpEvaluator eval(arch);
        std::vector<double> out;
        for (std::size_t i = 0; i < xs.size(); ++i) {
            eval.forward_into(xs[i], p, out);
            const std::vector<double> upstream = {out[0] - ys[i]};
            eval.accumulate_gradient(xs[i], p, upstream, grad);
        }
        std::vector<std::span<double>> params;
        std::vector<std::span<const double>> grads;
        for (int k = 0; k < 3; ++k) {
            params.emplace_back(p.weights[k]);
            grads.emplace_back(grad.weights[k]);
            params.emplace_back(p.biases[k]);
            grads.emplace_back(grad.biases[k]);
        }
        REQUIRE(opt.step(params, grads));
    }
    CHECK(total_loss() < 0.1 * initial);
}

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

#include <span>
#include <vector>

#include "qnav/pqc/circuit.hpp"
#include "qnav/qsim/gradient.hpp"
#include "qnav/rng.hpp"

namespace qnav::pqc {

/// Trainable parameters. theta is the flattened (L+1) x n x 3 tensor of
/// variational angles, xi the input scalings (layer x feature for single
/// encoding, qubit x layer x feature for triple), w one output weight per
/// action.
struct ParameterSet {
    std::vector<double> theta;
    std::vector<double> xi;
    std::vector<double> w;

    std::size_t total() const { return theta.size() + xi.size() + w.size(); }
};

/// theta uniform in [0, 2pi); xi and w start at one so inputs pass through
/// arctan unscaled and outputs span the raw expectation range.
ParameterSet init_parameters(const CircuitSpec& spec, Rng& rng);

/// All-zero parameters in the spec's shape; also the gradient accumulator.
ParameterSet zero_parameters(const CircuitSpec& spec);

/// Throws std::invalid_argument on shape mismatch or non-finite values.
void validate_parameters(const CircuitSpec& spec, const ParameterSet& params);

/// Encoded rotation angles in encoding-slot order (layer-major), each
/// arctan(xi * s) and therefore strictly inside (-pi/2, pi/2). Zero-padded
/// slots hold exactly zero.
struct EncodedAngles {
    std::vector<double> angles;
};

EncodedAngles encode_state(std::span<const double> s, std::span<const double> xi,
                           const CircuitSpec& spec);

/// Reusable evaluation workspace for one circuit shape. Not thread-safe;
/// give each concurrent task its own instance.
class PqcEvaluator {
  public:
    explicit PqcEvaluator(const CircuitSpec& spec);

    const CompiledCircuit& circuit() const { return circuit_; }

    void q_values_into(const ParameterSet& params, std::span<const double> s,
                       std::vector<double>& out);
    std::vector<double> q_values(const ParameterSet& params,
                                 std::span<const double> s);

    /// Adds d(sum_j upstream_j Q_j)/d(param) into `grad`, which must have the
    /// spec's parameter shape. Skips actions with zero upstream weight.
    void accumulate_gradient(
        const ParameterSet& params, std::span<const double> s,
        std::span<const double> upstream, ParameterSet& grad,
        qsim::GradientMethod method = qsim::GradientMethod::kAdjoint);

  private:
    void assemble_angles(const ParameterSet& params, std::span<const double> s);

    CompiledCircuit circuit_;
    qsim::AdjointDifferentiator diff_;
    qsim::StateVector state_;
    std::vector<double> angles_;
    qsim::GradMatrix grad_buf_;
    std::vector<double> expectations_;
};

/// One-shot conveniences over a freshly compiled circuit.
std::vector<double> q_values(std::span<const double> s,
                             const ParameterSet& params,
                             const CircuitSpec& spec);

ParameterSet q_gradient(
    std::span<const double> s, const ParameterSet& params,
    const CircuitSpec& spec, std::span<const double> upstream,
    qsim::GradientMethod method = qsim::GradientMethod::kAdjoint);

}  // namespace qnav::pqc

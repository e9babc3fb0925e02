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

#include "qnav/pqc/model.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace qnav::pqc {

ParameterSet init_parameters(const CircuitSpec& spec, Rng& rng) {
    validate_circuit_spec(spec);
    ParameterSet p;
    p.theta.resize(theta_count(spec));
    for (double& v : p.theta) v = rng.uniform(0.0, 2.0 * std::numbers::pi);
    p.xi.assign(xi_count(spec), 1.0);
    p.w.assign(static_cast<std::size_t>(spec.n_actions), 1.0);
    return p;
}

ParameterSet zero_parameters(const CircuitSpec& spec) {
    validate_circuit_spec(spec);
    ParameterSet p;
    p.theta.assign(theta_count(spec), 0.0);
    p.xi.assign(xi_count(spec), 0.0);
    p.w.assign(static_cast<std::size_t>(spec.n_actions), 0.0);
    return p;
}

void validate_parameters(const CircuitSpec& spec, const ParameterSet& params) {
    validate_circuit_spec(spec);
    if (params.theta.size() != theta_count(spec) ||
        params.xi.size() != xi_count(spec) ||
        params.w.size() != static_cast<std::size_t>(spec.n_actions)) {
        throw std::invalid_argument("parameter shape does not match spec");
    }
    auto all_finite = [](const std::vector<double>& v) {
        for (double x : v) {
            if (!std::isfinite(x)) return false;
        }
        return true;
    };
    if (!all_finite(params.theta) || !all_finite(params.xi) ||
        !all_finite(params.w)) {
        throw std::invalid_argument("parameters must be finite");
    }
}

EncodedAngles encode_state(std::span<const double> s,
                           std::span<const double> xi, const CircuitSpec& spec) {
    validate_circuit_spec(spec);
    if (s.size() != static_cast<std::size_t>(spec.n_features)) {
        throw std::invalid_argument("state feature count mismatch");
    }
    if (xi.size() != xi_count(spec)) {
        throw std::invalid_argument("xi shape mismatch");
    }
    const CompiledCircuit circuit = build_circuit(spec);
    EncodedAngles out;
    out.angles.assign(circuit.n_encoding_slots, 0.0);
    for (const EncodingSlotInfo& info : circuit.encoding_slots) {
        if (info.feature < 0) continue;
        out.angles[info.slot - circuit.n_theta_slots] =
            std::atan(xi[static_cast<std::size_t>(info.xi_index)] *
                      s[static_cast<std::size_t>(info.feature)]);
    }
    return out;
}

PqcEvaluator::PqcEvaluator(const CircuitSpec& spec)
    : circuit_(build_circuit(spec)),
      diff_(spec.n_qubits),
      state_(spec.n_qubits),
      angles_(circuit_.total_slots(), 0.0) {}

void PqcEvaluator::assemble_angles(const ParameterSet& params,
                                   std::span<const double> s) {
    const CircuitSpec& spec = circuit_.spec;
    if (params.theta.size() != circuit_.n_theta_slots ||
        params.xi.size() != xi_count(spec) ||
        params.w.size() != static_cast<std::size_t>(spec.n_actions)) {
        throw std::invalid_argument("parameter shape does not match circuit");
    }
    if (s.size() != static_cast<std::size_t>(spec.n_features)) {
        throw std::invalid_argument("state feature count mismatch");
    }
    std::copy(params.theta.begin(), params.theta.end(), angles_.begin());
    for (const EncodingSlotInfo& info : circuit_.encoding_slots) {
        angles_[info.slot] =
            (info.feature < 0)
                ? 0.0
                : std::atan(params.xi[static_cast<std::size_t>(info.xi_index)] *
                            s[static_cast<std::size_t>(info.feature)]);
    }
}

void PqcEvaluator::q_values_into(const ParameterSet& params,
                                 std::span<const double> s,
                                 std::vector<double>& out) {
    assemble_angles(params, s);
    qsim::run_circuit_into(state_, circuit_.gates, angles_);
    out.resize(circuit_.observables.size());
    for (std::size_t j = 0; j < circuit_.observables.size(); ++j) {
        out[j] = qsim::expectation_z(state_, circuit_.observables[j]) *
                 params.w[j];
    }
}

std::vector<double> PqcEvaluator::q_values(const ParameterSet& params,
                                           std::span<const double> s) {
    std::vector<double> out;
    q_values_into(params, s, out);
    return out;
}

void PqcEvaluator::accumulate_gradient(const ParameterSet& params,
                                       std::span<const double> s,
                                       std::span<const double> upstream,
                                       ParameterSet& grad,
                                       qsim::GradientMethod method) {
    const CircuitSpec& spec = circuit_.spec;
    if (upstream.size() != static_cast<std::size_t>(spec.n_actions)) {
        throw std::invalid_argument("upstream length must equal n_actions");
    }
    if (grad.theta.size() != params.theta.size() ||
        grad.xi.size() != params.xi.size() ||
        grad.w.size() != params.w.size()) {
        throw std::invalid_argument("gradient accumulator shape mismatch");
    }
    assemble_angles(params, s);

    if (method == qsim::GradientMethod::kAdjoint) {
        diff_.run(circuit_.gates, angles_, circuit_.observables, grad_buf_,
                  expectations_);
    } else {
        grad_buf_ = qsim::gradient(circuit_.gates, angles_,
                                   circuit_.observables, spec.n_qubits,
                                   qsim::GradientMethod::kParameterShift);
        qsim::run_circuit_into(state_, circuit_.gates, angles_);
        expectations_.resize(circuit_.observables.size());
        for (std::size_t j = 0; j < circuit_.observables.size(); ++j) {
            expectations_[j] =
                qsim::expectation_z(state_, circuit_.observables[j]);
        }
    }

    for (std::size_t j = 0; j < upstream.size(); ++j) {
        if (upstream[j] == 0.0) continue;
        const double coef = upstream[j] * params.w[j];
        for (std::size_t t = 0; t < circuit_.n_theta_slots; ++t) {
            grad.theta[t] += coef * grad_buf_.at(j, t);
        }
        for (const EncodingSlotInfo& info : circuit_.encoding_slots) {
            if (info.xi_index < 0) continue;
            const auto m = static_cast<std::size_t>(info.xi_index);
            const double si = s[static_cast<std::size_t>(info.feature)];
            const double u = params.xi[m] * si;
            // d arctan(xi * s) / d xi = s / (1 + (xi s)^2)
            grad.xi[m] += coef * grad_buf_.at(j, info.slot) * si / (1.0 + u * u);
        }
        grad.w[j] += upstream[j] * expectations_[j];
    }
}

std::vector<double> q_values(std::span<const double> s,
                             const ParameterSet& params,
                             const CircuitSpec& spec) {
    validate_parameters(spec, params);
    PqcEvaluator eval(spec);
    return eval.q_values(params, s);
}

ParameterSet q_gradient(std::span<const double> s, const ParameterSet& params,
                        const CircuitSpec& spec,
                        std::span<const double> upstream,
                        qsim::GradientMethod method) {
    validate_parameters(spec, params);
    PqcEvaluator eval(spec);
    ParameterSet grad = zero_parameters(spec);
    eval.accumulate_gradient(params, s, upstream, grad, method);
    return grad;
}

}  // namespace qnav::pqc

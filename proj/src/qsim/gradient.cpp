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

#include "qnav/qsim/gradient.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace qnav::qsim {

namespace {

void validate_inputs(std::span<const Gate> gates, std::span<const double> angles,
                     std::span<const ObservableSpec> observables, int n_qubits) {
    for (const Gate& g : gates) {
        validate_gate(g, n_qubits);
        if (g.angle_slot && *g.angle_slot >= angles.size()) {
            throw std::out_of_range("gate angle slot exceeds angle vector");
        }
    }
    for (const ObservableSpec& obs : observables) {
        if (obs.qubit < 0 || obs.qubit >= n_qubits) {
            throw std::out_of_range("observable qubit out of range");
        }
    }
}

/// Per-occurrence angles, so a single occurrence of a shared slot can be
/// shifted without disturbing its siblings.
std::vector<double> resolve_per_gate(std::span<const Gate> gates,
                                     std::span<const double> angles) {
    std::vector<double> out(gates.size(), 0.0);
    for (std::size_t i = 0; i < gates.size(); ++i) {
        if (gates[i].angle_slot) out[i] = angles[*gates[i].angle_slot];
    }
    return out;
}

void run_with_per_gate_angles(StateVector& state, std::span<const Gate> gates,
                              std::span<const double> per_gate) {
    state.reset();
    for (std::size_t i = 0; i < gates.size(); ++i) {
        if (gates[i].angle_slot) {
            apply_gate_inplace(state, gates[i], per_gate[i]);
        } else {
            apply_gate_inplace(state, gates[i], std::nullopt);
        }
    }
}

GradMatrix parameter_shift(std::span<const Gate> gates,
                           std::span<const double> angles,
                           std::span<const ObservableSpec> observables,
                           int n_qubits) {
    GradMatrix grad(observables.size(), angles.size());
    const std::vector<double> base = resolve_per_gate(gates, angles);
    StateVector state(n_qubits);
    std::vector<double> per_gate = base;
    constexpr double kShift = std::numbers::pi / 2.0;

    for (std::size_t k = 0; k < gates.size(); ++k) {
        if (!gates[k].angle_slot) continue;
        const std::size_t slot = *gates[k].angle_slot;

        per_gate[k] = base[k] + kShift;
        run_with_per_gate_angles(state, gates, per_gate);
        std::vector<double> plus(observables.size());
        for (std::size_t j = 0; j < observables.size(); ++j) {
            plus[j] = expectation_z(state, observables[j]);
        }

        per_gate[k] = base[k] - kShift;
        run_with_per_gate_angles(state, gates, per_gate);
        for (std::size_t j = 0; j < observables.size(); ++j) {
            grad.at(j, slot) += (plus[j] - expectation_z(state, observables[j])) / 2.0;
        }
        per_gate[k] = base[k];
    }
    return grad;
}

void apply_pauli_x(const StateVector& src, StateVector& dst, int qubit) {
    const std::size_t bit = std::size_t{1} << qubit;
    auto in = src.amplitudes();
    auto out = dst.amplitudes();
    for (std::size_t i = 0; i < in.size(); ++i) out[i] = in[i ^ bit];
}

void apply_pauli_y(const StateVector& src, StateVector& dst, int qubit) {
    const std::size_t bit = std::size_t{1} << qubit;
    auto in = src.amplitudes();
    auto out = dst.amplitudes();
    const Complex plus_i(0.0, 1.0);
    const Complex minus_i(0.0, -1.0);
    for (std::size_t i = 0; i < in.size(); ++i) {
        out[i] = (i & bit) ? plus_i * in[i ^ bit] : minus_i * in[i ^ bit];
    }
}

void apply_pauli_z(const StateVector& src, StateVector& dst, int qubit) {
    const std::size_t bit = std::size_t{1} << qubit;
    auto in = src.amplitudes();
    auto out = dst.amplitudes();
    for (std::size_t i = 0; i < in.size(); ++i) {
        out[i] = (i & bit) ? -in[i] : in[i];
    }
}

void apply_generator(const StateVector& src, StateVector& dst, const Gate& g) {
    switch (g.kind) {
        case GateKind::RX: apply_pauli_x(src, dst, g.target); return;
        case GateKind::RY: apply_pauli_y(src, dst, g.target); return;
        case GateKind::RZ: apply_pauli_z(src, dst, g.target); return;
        case GateKind::CZ: break;
    }
    throw std::invalid_argument("gate has no rotation generator");
}

void apply_inverse_inplace(StateVector& state, const Gate& g, double angle) {
    if (g.kind == GateKind::CZ) {
        apply_cz(state, *g.control, g.target);
    } else {
        apply_gate_inplace(state, g, -angle);
    }
}

double imag_inner(const StateVector& bra, const StateVector& ket) {
    auto b = bra.amplitudes();
    auto k = ket.amplitudes();
    double acc = 0.0;
    for (std::size_t i = 0; i < b.size(); ++i) {
        acc += (std::conj(b[i]) * k[i]).imag();
    }
    return acc;
}

}  // namespace

GradMatrix gradient(std::span<const Gate> gates, std::span<const double> angles,
                    std::span<const ObservableSpec> observables, int n_qubits,
                    GradientMethod method) {
    validate_inputs(gates, angles, observables, n_qubits);
    if (method == GradientMethod::kParameterShift) {
        return parameter_shift(gates, angles, observables, n_qubits);
    }
    AdjointDifferentiator diff(n_qubits);
    GradMatrix grad;
    std::vector<double> expectations;
    diff.run(gates, angles, observables, grad, expectations);
    return grad;
}

AdjointDifferentiator::AdjointDifferentiator(int n_qubits)
    : n_qubits_(n_qubits), ket_(n_qubits), pauli_buf_(n_qubits) {}

void AdjointDifferentiator::run(std::span<const Gate> gates,
                                std::span<const double> angles,
                                std::span<const ObservableSpec> observables,
                                GradMatrix& grad,
                                std::vector<double>& expectations) {
    validate_inputs(gates, angles, observables, n_qubits_);
    grad = GradMatrix(observables.size(), angles.size());
    expectations.assign(observables.size(), 0.0);

    const std::vector<double> per_gate = resolve_per_gate(gates, angles);
    run_with_per_gate_angles(ket_, gates, per_gate);
    for (std::size_t j = 0; j < observables.size(); ++j) {
        expectations[j] = expectation_z(ket_, observables[j]);
    }

    while (bras_.size() < observables.size()) bras_.emplace_back(n_qubits_);
    for (std::size_t j = 0; j < observables.size(); ++j) {
        apply_pauli_z(ket_, bras_[j], observables[j].qubit);
    }

    // Invariant at loop entry for index k: ket_ holds the state after gate k
    // and bras_[j] holds (U_N ... U_{k+1})^dagger Z_j |psi_final>.
    for (std::size_t k = gates.size(); k-- > 0;) {
        const Gate& g = gates[k];
        if (g.kind != GateKind::CZ) {
            apply_generator(ket_, pauli_buf_, g);
            const std::size_t slot = *g.angle_slot;
            for (std::size_t j = 0; j < observables.size(); ++j) {
                // d<Z_j>/d(phi_k) = Im(<bra_j| P |psi_k>) for U = exp(-i phi P / 2).
                grad.at(j, slot) += imag_inner(bras_[j], pauli_buf_);
            }
        }
        apply_inverse_inplace(ket_, g, per_gate[k]);
        for (std::size_t j = 0; j < observables.size(); ++j) {
            apply_inverse_inplace(bras_[j], g, per_gate[k]);
        }
    }
}

}  // namespace qnav::qsim

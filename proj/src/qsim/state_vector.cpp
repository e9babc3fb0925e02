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

#include "qnav/qsim/state_vector.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace qnav::qsim {

namespace {

constexpr int kMaxQubits = 20;

void check_qubit(int q, int n_qubits) {
    if (q < 0 || q >= n_qubits) {
        throw std::out_of_range("qubit index " + std::to_string(q) +
                                " out of range for " +
                                std::to_string(n_qubits) + " qubits");
    }
}

}  // namespace

StateVector::StateVector(int n_qubits) : n_qubits_(n_qubits) {
    if (n_qubits < 1 || n_qubits > kMaxQubits) {
        throw std::invalid_argument("n_qubits must be in [1, " +
                                    std::to_string(kMaxQubits) + "]");
    }
    amps_.assign(std::size_t{1} << n_qubits, Complex{0.0, 0.0});
    amps_[0] = Complex{1.0, 0.0};
}

double StateVector::norm_squared() const {
    double total = 0.0;
    for (const Complex& a : amps_) {
        total += std::norm(a);
    }
    return total;
}

void StateVector::reset() {
    amps_.assign(amps_.size(), Complex{0.0, 0.0});
    amps_[0] = Complex{1.0, 0.0};
}

void validate_gate(const Gate& gate, int n_qubits) {
    check_qubit(gate.target, n_qubits);
    if (gate.kind == GateKind::CZ) {
        if (!gate.control) {
            throw std::invalid_argument("CZ requires a control qubit");
        }
        check_qubit(*gate.control, n_qubits);
        if (*gate.control == gate.target) {
            throw std::invalid_argument("CZ control and target must differ");
        }
        if (gate.angle_slot) {
            throw std::invalid_argument("CZ carries no angle slot");
        }
    } else {
        if (gate.control) {
            throw std::invalid_argument("rotations have no control qubit");
        }
        if (!gate.angle_slot) {
            throw std::invalid_argument("rotation gate missing angle slot");
        }
    }
}

// Applies a 2x2 unitary [[u00 u01],[u10 u11]] to `target` by pairing
// amplitudes whose indices differ in that bit.
namespace {

inline void apply_1q(StateVector& state, int target, Complex u00, Complex u01,
                     Complex u10, Complex u11) {
    Complex* amps = state.amplitudes().data();
    const std::size_t dim = state.dim();
    const std::size_t bit = std::size_t{1} << target;
    for (std::size_t base = 0; base < dim; base += 2 * bit) {
        for (std::size_t i = base; i < base + bit; ++i) {
            const Complex a = amps[i];
            const Complex b = amps[i | bit];
            amps[i] = u00 * a + u01 * b;
            amps[i | bit] = u10 * a + u11 * b;
        }
    }
}

}  // namespace

void apply_rx(StateVector& state, int target, double angle) {
    check_qubit(target, state.n_qubits());
    const double c = std::cos(angle / 2.0);
    const double s = std::sin(angle / 2.0);
    apply_1q(state, target, Complex{c, 0}, Complex{0, -s}, Complex{0, -s},
             Complex{c, 0});
}

void apply_ry(StateVector& state, int target, double angle) {
    check_qubit(target, state.n_qubits());
    const double c = std::cos(angle / 2.0);
    const double s = std::sin(angle / 2.0);
    apply_1q(state, target, Complex{c, 0}, Complex{-s, 0}, Complex{s, 0},
             Complex{c, 0});
}

void apply_rz(StateVector& state, int target, double angle) {
    check_qubit(target, state.n_qubits());
    const Complex e0 = std::polar(1.0, -angle / 2.0);
    const Complex e1 = std::polar(1.0, angle / 2.0);
    Complex* amps = state.amplitudes().data();
    const std::size_t dim = state.dim();
    const std::size_t bit = std::size_t{1} << target;
    for (std::size_t i = 0; i < dim; ++i) {
        amps[i] *= (i & bit) ? e1 : e0;
    }
}

void apply_cz(StateVector& state, int a, int b) {
    check_qubit(a, state.n_qubits());
    check_qubit(b, state.n_qubits());
    if (a == b) {
        throw std::invalid_argument("CZ qubits must differ");
    }
    Complex* amps = state.amplitudes().data();
    const std::size_t dim = state.dim();
    const std::size_t mask = (std::size_t{1} << a) | (std::size_t{1} << b);
    for (std::size_t i = 0; i < dim; ++i) {
        if ((i & mask) == mask) {
            amps[i] = -amps[i];
        }
    }
}

void apply_gate_inplace(StateVector& state, const Gate& gate,
                        std::optional<double> angle) {
    if (gate.kind == GateKind::CZ) {
        if (angle) {
            throw std::invalid_argument("CZ takes no angle");
        }
        if (!gate.control) {
            throw std::invalid_argument("CZ requires a control qubit");
        }
        apply_cz(state, *gate.control, gate.target);
        return;
    }
    if (!angle) {
        throw std::invalid_argument("rotation gate requires an angle");
    }
    switch (gate.kind) {
        case GateKind::RX:
            apply_rx(state, gate.target, *angle);
            break;
        case GateKind::RY:
            apply_ry(state, gate.target, *angle);
            break;
        case GateKind::RZ:
            apply_rz(state, gate.target, *angle);
            break;
        case GateKind::CZ:
            break;  // unreachable
    }
}

StateVector apply_gate(const StateVector& state, const Gate& gate,
                       std::optional<double> angle) {
    StateVector out = state;
    apply_gate_inplace(out, gate, angle);
    return out;
}

void run_circuit_into(StateVector& state, std::span<const Gate> gates,
                      std::span<const double> angles) {
    state.reset();
    for (const Gate& gate : gates) {
        if (is_rotation(gate.kind)) {
            if (!gate.angle_slot) {
                throw std::invalid_argument("rotation gate missing angle slot");
            }
            if (*gate.angle_slot >= angles.size()) {
                throw std::out_of_range(
                    "angle slot " + std::to_string(*gate.angle_slot) +
                    " dangles past " + std::to_string(angles.size()) +
                    " angles");
            }
            apply_gate_inplace(state, gate, angles[*gate.angle_slot]);
        } else {
            apply_gate_inplace(state, gate, std::nullopt);
        }
    }
}

StateVector run_circuit(std::span<const Gate> gates,
                        std::span<const double> angles, int n_qubits) {
    StateVector state(n_qubits);
    run_circuit_into(state, gates, angles);
    return state;
}

double expectation_z(const StateVector& state, const ObservableSpec& obs) {
    check_qubit(obs.qubit, state.n_qubits());
    const Complex* amps = state.amplitudes().data();
    const std::size_t dim = state.dim();
    const std::size_t bit = std::size_t{1} << obs.qubit;
    double value = 0.0;
    for (std::size_t i = 0; i < dim; ++i) {
        const double p = std::norm(amps[i]);
        value += (i & bit) ? -p : p;
    }
    return value;
}

double sample_shots(const StateVector& state, const ObservableSpec& obs,
                    std::size_t shots, Rng& rng) {
    if (shots == 0) {
        throw std::invalid_argument("shots must be >= 1");
    }
    check_qubit(obs.qubit, state.n_qubits());
    const Complex* amps = state.amplitudes().data();
    const std::size_t dim = state.dim();
    const std::size_t bit = std::size_t{1} << obs.qubit;
    double p_plus = 0.0;
    for (std::size_t i = 0; i < dim; ++i) {
        if (!(i & bit)) {
            p_plus += std::norm(amps[i]);
        }
    }
    std::size_t plus = 0;
    for (std::size_t s = 0; s < shots; ++s) {
        if (rng.uniform() < p_plus) {
            ++plus;
        }
    }
    const double minus = static_cast<double>(shots - plus);
    return (static_cast<double>(plus) - minus) / static_cast<double>(shots);
}

}  // namespace qnav::qsim

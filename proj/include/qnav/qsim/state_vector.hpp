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

#include <complex>
#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "qnav/rng.hpp"

namespace qnav::qsim {

using Complex = std::complex<double>;

/// Dense 2^n amplitude register. Qubit 0 is the least significant bit of
/// the amplitude index: amplitudes[i] is the coefficient of basis state
/// |i> with i = b_{n-1}...b_1 b_0.
class StateVector {
  public:
    /// Initializes |0...0>.
    explicit StateVector(int n_qubits);

    int n_qubits() const { return n_qubits_; }
    std::size_t dim() const { return amps_.size(); }

    std::span<const Complex> amplitudes() const { return amps_; }
    std::span<Complex> amplitudes() { return amps_; }

    double norm_squared() const;

    /// Resets to |0...0> without reallocating.
    void reset();

  private:
    int n_qubits_;
    std::vector<Complex> amps_;
};

enum class GateKind { RX, RY, RZ, CZ };

inline bool is_rotation(GateKind k) { return k != GateKind::CZ; }

/// One gate in a compiled sequence. Rotations carry an angle slot indexing
/// into an external angle vector; CZ carries a control qubit instead.
struct Gate {
    GateKind kind;
    int target = 0;
    std::optional<int> control;           // CZ only
    std::optional<std::size_t> angle_slot;  // rotations only

    static Gate rx(int target, std::size_t slot) {
        return {GateKind::RX, target, std::nullopt, slot};
    }
    static Gate ry(int target, std::size_t slot) {
        return {GateKind::RY, target, std::nullopt, slot};
    }
    static Gate rz(int target, std::size_t slot) {
        return {GateKind::RZ, target, std::nullopt, slot};
    }
    static Gate cz(int control, int target) {
        return {GateKind::CZ, target, control, std::nullopt};
    }
};

/// Validates gate indices and the slot/control shape rules; throws
/// std::invalid_argument or std::out_of_range on violation.
void validate_gate(const Gate& gate, int n_qubits);

/// Single-qubit Pauli-Z readout target.
struct ObservableSpec {
    int qubit = 0;
};

// In-place kernels. Rotation conventions: R_P(phi) = exp(-i phi P / 2).
void apply_rx(StateVector& state, int target, double angle);
void apply_ry(StateVector& state, int target, double angle);
void apply_rz(StateVector& state, int target, double angle);
void apply_cz(StateVector& state, int a, int b);

/// Applies a gate in place; `angle` must be present iff the gate is a
/// rotation (the gate's angle_slot is ignored here).
void apply_gate_inplace(StateVector& state, const Gate& gate,
                        std::optional<double> angle);

/// Pure variant: returns the evolved state, input untouched.
StateVector apply_gate(const StateVector& state, const Gate& gate,
                       std::optional<double> angle = std::nullopt);

/// Applies `gates` in order to |0...0>, resolving each rotation's angle
/// through its angle_slot. Throws on a dangling slot reference.
StateVector run_circuit(std::span<const Gate> gates,
                        std::span<const double> angles, int n_qubits);

/// Same, but reuses `state` as the output buffer (reset first).
void run_circuit_into(StateVector& state, std::span<const Gate> gates,
                      std::span<const double> angles);

/// Exact <sigma_z^(q)>: sum_i |amp_i|^2 * (+1 if bit q of i is 0 else -1).
double expectation_z(const StateVector& state, const ObservableSpec& obs);

/// Empirical +/-1 mean over `shots` measurement draws of sigma_z^(q).
double sample_shots(const StateVector& state, const ObservableSpec& obs,
                    std::size_t shots, Rng& rng);

}  // namespace qnav::qsim

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
#include <vector>

#include "qnav/qsim/state_vector.hpp"

namespace qnav::pqc {

enum class EncodingScheme {
    /// One RX rotation per qubit per layer; requires n_qubits == n_features.
    kSingle,
    /// RX, RY, RX per qubit per layer, feeding features (s1, s2, s3) in that
    /// temporal order; features beyond n_features are zero-padded.
    kTriple,
};

struct CircuitSpec {
    int n_qubits = 0;    // n
    int n_features = 0;  // n_s
    int n_actions = 0;   // n_a
    int layers = 0;      // L, data re-upload repetitions
    EncodingScheme encoding = EncodingScheme::kSingle;
};

/// Throws std::invalid_argument when the spec violates its invariants.
void validate_circuit_spec(const CircuitSpec& spec);

/// Trainable parameter total: 3n(L+1) variational angles, plus the input
/// scalings (L*n_s single, n*L*n_s triple), plus n_actions output weights.
std::size_t param_count(const CircuitSpec& spec);

std::size_t theta_count(const CircuitSpec& spec);
std::size_t xi_count(const CircuitSpec& spec);

/// Flat index into the theta tensor (L+1) x n x 3.
std::size_t theta_index(const CircuitSpec& spec, int layer, int qubit, int rot);

struct EncodingSlotInfo {
    std::size_t slot = 0;  // index into the full angle vector
    int layer = 0;         // 1-based data re-upload layer
    int qubit = 0;
    int feature = -1;      // state feature index, -1 for a zero-padded slot
    std::ptrdiff_t xi_index = -1;  // flat index into xi, -1 for padded
};

/// Gate sequence in application order with the angle-slot layout
/// [variational theta | encoding angles]. Padded encoding slots stay at
/// angle zero and carry no trainable scaling.
struct CompiledCircuit {
    CircuitSpec spec;
    std::vector<qsim::Gate> gates;
    std::size_t n_theta_slots = 0;
    std::size_t n_encoding_slots = 0;
    std::vector<EncodingSlotInfo> encoding_slots;
    std::vector<qsim::ObservableSpec> observables;  // Z on qubits 0..n_a-1

    std::size_t total_slots() const { return n_theta_slots + n_encoding_slots; }
};

/// Builds the data re-upload ansatz: a variational block and entangler,
/// then `layers` repetitions of [encoding, variational block, entangler].
/// Variational blocks apply RX, RY, RZ per qubit; the entangler applies CZ
/// around the ring (0,1), (1,2), ..., (n-1,0), reduced to one CZ for n = 2
/// and nothing for n = 1.
CompiledCircuit build_circuit(const CircuitSpec& spec);

}  // namespace qnav::pqc

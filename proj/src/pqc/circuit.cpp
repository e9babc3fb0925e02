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

#include "qnav/pqc/circuit.hpp"

#include <stdexcept>

namespace qnav::pqc {

void validate_circuit_spec(const CircuitSpec& spec) {
    if (spec.n_qubits < 1 || spec.n_qubits > 20) {
        throw std::invalid_argument("n_qubits must be in [1, 20]");
    }
    if (spec.n_features < 1) {
        throw std::invalid_argument("n_features must be positive");
    }
    if (spec.layers < 0) {
        throw std::invalid_argument("layers must be non-negative");
    }
    if (spec.n_actions < 1 || spec.n_actions > spec.n_qubits) {
        throw std::invalid_argument(
            "n_actions must be in [1, n_qubits], one observable per action");
    }
    if (spec.encoding == EncodingScheme::kSingle &&
        spec.n_qubits != spec.n_features) {
        throw std::invalid_argument(
            "single encoding requires n_qubits == n_features");
    }
    if (spec.encoding == EncodingScheme::kTriple && spec.n_features > 3) {
        throw std::invalid_argument(
            "triple encoding holds at most 3 features per qubit block");
    }
}

std::size_t theta_count(const CircuitSpec& spec) {
    return static_cast<std::size_t>(spec.layers + 1) * spec.n_qubits * 3;
}

std::size_t xi_count(const CircuitSpec& spec) {
    const auto L = static_cast<std::size_t>(spec.layers);
    const auto ns = static_cast<std::size_t>(spec.n_features);
    if (spec.encoding == EncodingScheme::kSingle) return L * ns;
    return static_cast<std::size_t>(spec.n_qubits) * L * ns;
}

std::size_t param_count(const CircuitSpec& spec) {
    validate_circuit_spec(spec);
    return theta_count(spec) + xi_count(spec) +
           static_cast<std::size_t>(spec.n_actions);
}

std::size_t theta_index(const CircuitSpec& spec, int layer, int qubit, int rot) {
    if (layer < 0 || layer > spec.layers || qubit < 0 ||
        qubit >= spec.n_qubits || rot < 0 || rot > 2) {
        throw std::out_of_range("theta index out of range");
    }
    return (static_cast<std::size_t>(layer) * spec.n_qubits + qubit) * 3 + rot;
}

namespace {

void emit_variational_block(CompiledCircuit& out, int layer) {
    const CircuitSpec& spec = out.spec;
    for (int q = 0; q < spec.n_qubits; ++q) {
        out.gates.push_back(qsim::Gate::rx(q, theta_index(spec, layer, q, 0)));
        out.gates.push_back(qsim::Gate::ry(q, theta_index(spec, layer, q, 1)));
        out.gates.push_back(qsim::Gate::rz(q, theta_index(spec, layer, q, 2)));
    }
}

void emit_entangler(CompiledCircuit& out) {
    const int n = out.spec.n_qubits;
    if (n < 2) return;
    const int pairs = (n == 2) ? 1 : n;  // the two-qubit ring degenerates
    for (int q = 0; q < pairs; ++q) {
        out.gates.push_back(qsim::Gate::cz(q, (q + 1) % n));
    }
}

void emit_encoding(CompiledCircuit& out, int layer) {
    const CircuitSpec& spec = out.spec;
    const std::size_t n_theta = out.n_theta_slots;
    if (spec.encoding == EncodingScheme::kSingle) {
        for (int q = 0; q < spec.n_qubits; ++q) {
            // Qubit q carries feature q; slots run layer-major.
            const std::size_t slot =
                n_theta + static_cast<std::size_t>(layer - 1) * spec.n_qubits + q;
            out.gates.push_back(qsim::Gate::rx(q, slot));
            out.encoding_slots.push_back(
                {slot, layer, q, q,
                 static_cast<std::ptrdiff_t>(layer - 1) * spec.n_features + q});
        }
        return;
    }
    for (int q = 0; q < spec.n_qubits; ++q) {
        for (int k = 0; k < 3; ++k) {
            const std::size_t slot =
                n_theta +
                (static_cast<std::size_t>(layer - 1) * spec.n_qubits + q) * 3 + k;
            if (k == 1) {
                out.gates.push_back(qsim::Gate::ry(q, slot));
            } else {
                out.gates.push_back(qsim::Gate::rx(q, slot));
            }
            EncodingSlotInfo info{slot, layer, q, -1, -1};
            if (k < spec.n_features) {
                info.feature = k;
                info.xi_index =
                    (static_cast<std::ptrdiff_t>(q) * spec.layers + (layer - 1)) *
                        spec.n_features +
                    k;
            }
            out.encoding_slots.push_back(info);
        }
    }
}

}  // namespace

CompiledCircuit build_circuit(const CircuitSpec& spec) {
    validate_circuit_spec(spec);
    CompiledCircuit out;
    out.spec = spec;
    out.n_theta_slots = theta_count(spec);
    const std::size_t enc_per_layer =
        (spec.encoding == EncodingScheme::kSingle)
            ? static_cast<std::size_t>(spec.n_qubits)
            : static_cast<std::size_t>(spec.n_qubits) * 3;
    out.n_encoding_slots = enc_per_layer * static_cast<std::size_t>(spec.layers);

    emit_variational_block(out, 0);
    emit_entangler(out);
    for (int l = 1; l <= spec.layers; ++l) {
        emit_encoding(out, l);
        emit_variational_block(out, l);
        emit_entangler(out);
    }

    for (int j = 0; j < spec.n_actions; ++j) {
        out.observables.push_back(qsim::ObservableSpec{j});
    }
    return out;
}

}  // namespace qnav::pqc

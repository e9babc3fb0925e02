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

#include "qnav/pqc/spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace qnav::pqc {

FourierSpectrum analyze_spectrum(const CircuitSpec& spec,
                                 const ParameterSet& params, int n_samples) {
    validate_parameters(spec, params);
    if (spec.n_qubits != 1 || spec.encoding != EncodingScheme::kSingle) {
        throw std::invalid_argument(
            "spectrum diagnostic requires a single-qubit, single-encoding circuit");
    }
    const int L = spec.layers;
    if (n_samples < 2 * L + 1) {
        throw std::invalid_argument("too few sample points for the band");
    }

    const CompiledCircuit circuit = build_circuit(spec);
    qsim::StateVector state(1);
    std::vector<double> angles(circuit.total_slots(), 0.0);
    std::copy(params.theta.begin(), params.theta.end(), angles.begin());

    const auto M = static_cast<std::size_t>(n_samples);
    std::vector<double> f(M, 0.0);
    for (std::size_t m = 0; m < M; ++m) {
        const double x = 2.0 * std::numbers::pi * static_cast<double>(m) /
                         static_cast<double>(M);
        for (const EncodingSlotInfo& info : circuit.encoding_slots) {
            angles[info.slot] = x;
        }
        qsim::run_circuit_into(state, circuit.gates, angles);
        f[m] = qsim::expectation_z(state, circuit.observables[0]);
    }

    FourierSpectrum out;
    std::vector<std::pair<int, std::complex<double>>> band;
    for (std::size_t k = 0; k < M; ++k) {
        std::complex<double> c(0.0, 0.0);
        for (std::size_t m = 0; m < M; ++m) {
            const double phase = -2.0 * std::numbers::pi *
                                 static_cast<double>(k) *
                                 static_cast<double>(m) /
                                 static_cast<double>(M);
            c += f[m] * std::complex<double>(std::cos(phase), std::sin(phase));
        }
        c /= static_cast<double>(M);
        const int freq = (k <= M / 2) ? static_cast<int>(k)
                                      : static_cast<int>(k) - n_samples;
        if (std::abs(freq) <= L) {
            band.emplace_back(freq, c);
        } else {
            out.residual += std::norm(c);
        }
    }
    std::sort(band.begin(), band.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    for (const auto& [freq, c] : band) {
        out.frequencies.push_back(freq);
        out.coefficients.push_back(c);
    }
    return out;
}

}  // namespace qnav::pqc

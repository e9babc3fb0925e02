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
#include <span>
#include <vector>

#include "qnav/qsim/state_vector.hpp"

namespace qnav::qsim {

/// Row-major matrix of d<sigma_z^(j)>/d(angle_k): one row per observable,
/// one column per angle slot.
struct GradMatrix {
    std::size_t n_obs = 0;
    std::size_t n_slots = 0;
    std::vector<double> values;  // n_obs * n_slots

    GradMatrix() = default;
    GradMatrix(std::size_t obs, std::size_t slots)
        : n_obs(obs), n_slots(slots), values(obs * slots, 0.0) {}

    double& at(std::size_t obs, std::size_t slot) {
        return values[obs * n_slots + slot];
    }
    double at(std::size_t obs, std::size_t slot) const {
        return values[obs * n_slots + slot];
    }
    std::span<const double> row(std::size_t obs) const {
        return {values.data() + obs * n_slots, n_slots};
    }
};

enum class GradientMethod {
    /// Two-point shift identity d f/d phi = [f(phi+pi/2) - f(phi-pi/2)] / 2,
    /// applied per gate occurrence and summed per slot.
    kParameterShift,
    /// Single forward pass plus reverse sweep over the gate sequence.
    kAdjoint,
};

/// Gradients of every Pauli-Z expectation with respect to every angle slot.
/// Slots shared by multiple gates accumulate their occurrences' terms.
GradMatrix gradient(std::span<const Gate> gates, std::span<const double> angles,
                    std::span<const ObservableSpec> observables, int n_qubits,
                    GradientMethod method = GradientMethod::kParameterShift);

/// Reverse-sweep differentiator with reusable state buffers. One instance
/// serves repeated circuits of the same qubit count; not thread-safe, give
/// each concurrent task its own.
class AdjointDifferentiator {
  public:
    explicit AdjointDifferentiator(int n_qubits);

    /// Fills `grad` (resized to observables x angles) and returns the final
    /// state's expectations in `expectations` (resized to observables).
    void run(std::span<const Gate> gates, std::span<const double> angles,
             std::span<const ObservableSpec> observables, GradMatrix& grad,
             std::vector<double>& expectations);

  private:
    int n_qubits_;
    StateVector ket_;
    StateVector pauli_buf_;
    std::vector<StateVector> bras_;
};

}  // namespace qnav::qsim

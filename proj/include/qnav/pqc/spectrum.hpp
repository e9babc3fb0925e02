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
#include <vector>

#include "qnav/pqc/model.hpp"

namespace qnav::pqc {

/// Discrete spectrum of the circuit output as a function of the raw encoded
/// angle. Frequencies are the integer band [-L, L]; residual is the total
/// power the transform finds outside that band.
struct FourierSpectrum {
    std::vector<int> frequencies;
    std::vector<std::complex<double>> coefficients;
    double residual = 0.0;
};

/// Samples f(x) = <sigma_z>(x) for a single-qubit, single-feature re-upload
/// circuit at n_samples equispaced angles over [0, 2pi), feeding x into every
/// encoding slot directly (the arctan rescaling is bypassed for this
/// diagnostic), then runs a DFT. Requires n_samples to resolve the band,
/// i.e. n_samples >= 2L + 1, and the circuit to be single-qubit with single
/// encoding. The canonical sample count is 4L + 4.
FourierSpectrum analyze_spectrum(const CircuitSpec& spec,
                                 const ParameterSet& params, int n_samples);

}  // namespace qnav::pqc

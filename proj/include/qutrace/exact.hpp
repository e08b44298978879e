// Copyright 2026 The qutrace authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include "qutrace/circuit.hpp"
#include "qutrace/dist.hpp"
#include "qutrace/noise.hpp"

namespace qutrace {

inline constexpr size_t kExactLimit = 12;

Mat zero_density(size_t n);
Vec zero_state(size_t n);

/// |0..0> on all qubits except `subset`, which carries `sigma`
/// (dim 2^|subset|); subset[0] is sigma's least significant qubit.
Mat density_with_subset_state(size_t n, const std::vector<size_t>& subset, const Mat& sigma);

void apply_gate_density(Mat& rho, const Gate& g);
void apply_depolarizing_density(Mat& rho, const std::vector<size_t>& support, double p);
void apply_kraus_density(Mat& rho, const std::vector<size_t>& support,
                         const std::vector<Mat>& kraus);
void apply_thermal_density(Mat& rho, const Gate& g, const ThermalParams& t);

/// Explicit Pauli-mixture channel: probabilities must sum to 1.
struct PauliChannel {
    std::vector<std::pair<PauliString, double>> terms;
    bool is_identity() const;
    static PauliChannel identity(size_t n);
    static PauliChannel single_pauli(size_t n, size_t q, PauliLetter p, double prob);
    static PauliChannel depolarizing(size_t n, size_t q, double prob);
};
void apply_pauli_channel_density(Mat& rho, const PauliChannel& ch);

/// Applies each gate's unitary followed by its depolarizing channel. Trace
/// preserved; no readout error (that is a separate classical channel).
Mat simulate_exact(const Circuit& c, const NoiseModel& nm, size_t limit = kExactLimit);
Mat simulate_exact_from(Mat rho0, const Circuit& c, const NoiseModel& nm,
                        size_t limit = kExactLimit);

/// Noiseless statevector.
Vec simulate_ideal_state(const Circuit& c, size_t limit = 24);

Distribution distribution_from_density(const Mat& rho, size_t n);
Distribution distribution_from_state(const Vec& psi, size_t n);

/// Noiseless output distribution restricted to c.measured (all qubits if
/// the measured set is empty).
Distribution ideal_distribution(const Circuit& c);

double expectation_density(const Mat& rho, const PauliString& obs);

/// Heisenberg picture: returns A' with tr(Lambda(rho) A) = tr(rho A') where
/// Lambda is the circuit's noisy channel. Gates and depolarizing factors are
/// pulled back in reverse order.
Mat heisenberg_observable(const Circuit& c, const NoiseModel& nm, Mat obs, size_t limit = kExactLimit);

}  // namespace qutrace

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

namespace qutrace {

/// Inverse Fourier transform applied to the Fourier state of `value`;
/// the noiseless output is the bitstring of `value`.
Circuit gen_iqft(size_t n, uint64_t value);

/// Phase estimation with `ancillas` control qubits reading the eigenphase of
/// diag(1, e^{2 pi i phase}) on a |1>-prepared target.
Circuit gen_qpe(size_t ancillas, double phase);

/// Bernstein-Vazirani for the given secret (qubit 0 is the rightmost char).
Circuit gen_bv(const std::string& secret);

/// Fourier-space constant adder: |a> -> |a + b mod 2^n>.
Circuit gen_qft_adder(size_t n, uint64_t a, uint64_t b);

/// Fourier-space constant multiplier into a fresh register:
/// |a>|0> -> |a>|a*b mod 2^n_out>.
Circuit gen_qft_multiplier(size_t n_in, size_t n_out, uint64_t a, uint64_t b);

/// Hardware-efficient ansatz: per layer a Y-rotation wall plus
/// `entangle_reps` repetitions of the linear CZ chain, closed by a final
/// rotation wall. Angles are consumed row by row ((layers+1) * n values).
Circuit gen_vqe(size_t n, size_t layers, size_t entangle_reps, const std::vector<double>& angles);

/// Deterministic shallow angle schedule for the ansatz benchmarks.
std::vector<double> vqe_default_angles(size_t n, size_t layers, uint64_t seed);

/// MaxCut ansatz over the given edges: per layer the cost phases followed by
/// the transverse mixer wall.
Circuit gen_qaoa(size_t n, const std::vector<std::pair<size_t, size_t>>& edges,
                 const std::vector<double>& gammas, const std::vector<double>& betas);

std::vector<std::pair<size_t, size_t>> ring_edges(size_t n);

/// Dispatcher for config-driven generation; throws on invalid parameters.
Circuit gen_benchmark(const std::string& id, const nlohmann::json& params);

}  // namespace qutrace

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

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "qutrace/noise.hpp"
#include "qutrace/pauli.hpp"

namespace qutrace {

/// Probability map over bitstrings. Key convention (global): qubit 0 is the
/// RIGHTMOST character. std::map keeps key order deterministic.
using Distribution = std::map<std::string, double>;

struct Counts {
    std::map<std::string, uint64_t> counts;
    uint64_t shots = 0;

    void merge(const Counts& other);
};

std::string bitstring_of_index(size_t x, size_t n);
size_t index_of_bitstring(const std::string& key);

Distribution to_distribution(const Counts& c);
void normalize(Distribution& d);
bool is_normalized(const Distribution& d, double tol = 1e-9);

/// Sums out the qubits not in `subset`; subset[i] becomes local qubit i of
/// the output keys. Output is normalized.
Distribution marginal(const Distribution& d, const std::vector<size_t>& subset);

/// Independent per-qubit bit-flip confusion applied classically. Logical
/// qubit q of the keys uses nm.readout_for(q).
Distribution readout_channel(const Distribution& d, const NoiseModel& nm);

/// Parity-weighted sum over bitstrings; obs must contain only I and Z
/// letters (callers must have rotated any X/Y basis beforehand).
double expectation(const Distribution& d, const PauliString& obs);

/// Hellinger fidelity (sum_k sqrt(p_k q_k))^2, in [0,1].
double hellinger_fidelity(const Distribution& p, const Distribution& q);

}  // namespace qutrace

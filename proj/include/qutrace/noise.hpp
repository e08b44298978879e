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

#include <array>
#include <json.hpp>
#include <map>
#include <optional>

#include "qutrace/gate.hpp"

namespace qutrace {

struct QubitNoiseOverride {
    std::optional<double> p1;
    std::optional<double> p2;
    std::optional<std::array<double, 2>> readout;
};

struct ThermalParams {
    double t1 = 0;       // relaxation time
    double t2 = 0;       // dephasing time, t2 <= 2*t1
    double time_1q = 0;  // gate durations, same unit as t1/t2
    double time_2q = 0;
};

/// Per-gate depolarizing probabilities plus per-qubit readout flip pairs.
/// The depolarizing channel is rho -> (1-p) rho + p I/2^k on the gate's
/// k-qubit support. Readout entry q is (P(read 1 | prepared 0),
/// P(read 0 | prepared 1)); a single entry broadcasts to all qubits.
struct NoiseModel {
    double p1 = 0.0;
    double p2 = 0.0;
    std::vector<std::array<double, 2>> readout;
    std::map<size_t, QubitNoiseOverride> overrides;
    std::optional<ThermalParams> thermal;

    static NoiseModel ideal() { return NoiseModel{}; }
    static NoiseModel uniform(double p1, double p2, double readout_flip);

    /// Depolarizing probability for this gate; for two-qubit gates with
    /// per-qubit overrides the larger incident value wins.
    double gate_error(const Gate& g) const;
    std::array<double, 2> readout_for(size_t q) const;
    bool has_gate_noise() const;
    bool has_readout_noise() const;

    /// Logical-to-physical relabeling: noise parameters of physical qubit
    /// map[q] are looked up for logical qubit q.
    NoiseModel remapped(const std::vector<size_t>& map, size_t num_logical) const;

    nlohmann::ordered_json to_json() const;
    static NoiseModel from_json(const nlohmann::json& j);
};

void validate_probability(double p, const char* what);

}  // namespace qutrace

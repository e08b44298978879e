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

#include "qutrace/bench.hpp"
#include "qutrace/methods.hpp"

namespace qutrace {

/// Versioned experiment description; unknown keys are rejected.
struct ExperimentConfig {
    int schema_version = 1;
    std::string benchmark_id;
    nlohmann::json benchmark_params;
    NoiseModel noise;
    std::vector<std::string> methods;
    size_t subset_size = 1;
    uint64_t shots = 100000;
    std::vector<uint64_t> seeds{1};
    int layers_to_check = -1;
    bool sampled = false;
    bool remap = true;
    std::string symmetry;  // "", "ring"
    std::string sweep_param;  // "", "readout", "entangle_reps", "layers", "layers_to_check"
    std::vector<double> sweep_values;

    static ExperimentConfig from_json(const nlohmann::json& j);
    nlohmann::ordered_json to_json() const;
};

struct ReportRow {
    double sweep_value = 0.0;
    uint64_t seed = 0;
    std::string method;
    double fidelity = 0.0;
    double normalized_shots = 0.0;
    double avg_two_qubit_gates = 0.0;
    std::string error;  // non-empty on partial method failure
};

struct Report {
    ExperimentConfig config;
    std::vector<ReportRow> rows;
    std::vector<std::string> warnings;
    bool partial_failure = false;

    nlohmann::ordered_json to_json() const;
    static Report from_json(const nlohmann::json& j);

    /// Table-layout CSV (one row per sweep point/seed/method).
    std::string to_csv() const;
};

/// Runs every requested method over the sweep grid with shared seeds.
/// `jobs` > 1 evaluates grid points in a worker pool; the row order is
/// deterministic regardless.
Report run_experiment(const ExperimentConfig& cfg, size_t jobs = 1);

/// Long-format plot data: sweep_value,method,fidelity.
std::string emit_plotdata(const Report& report);

}  // namespace qutrace

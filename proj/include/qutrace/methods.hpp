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

#include "qutrace/recombine.hpp"

namespace qutrace {

struct MethodOptions {
    NoiseModel noise;
    bool sampled = false;
    uint64_t shots = 100000;
    uint64_t seed = 1;
    size_t subset_size = 1;
    int layers_to_check = -1;
    bool remap = true;
    std::vector<std::vector<size_t>> automorphisms;
};

struct MethodOutcome {
    Distribution dist;
    double normalized_shots = 1.0;
    double avg_two_qubit_gates = 0.0;
    std::vector<double> per_layer_improvement;  // filled by the framework runs
    std::vector<std::string> warnings;
};

/// Disjoint covering subsets of the requested size.
std::vector<std::vector<size_t>> default_subsets(const Circuit& c, size_t subset_size);

/// Unmitigated execution of the original circuit.
MethodOutcome run_original(const Circuit& c, const MethodOptions& opt);

/// Measurement subsetting: half the shots in global mode, half split across
/// subset circuits whose off-subset measurements are removed and whose
/// subset is remapped to low-readout qubits; local distributions refine the
/// global one in ascending subset order.
MethodOutcome run_jigsaw(const Circuit& c, const MethodOptions& opt);

/// Subsetting plus the circuit optimizations (causal-cone pruning, trailing
/// gate bypassing, remapping) but no checks.
MethodOutcome run_subsetting(const Circuit& c, const MethodOptions& opt);

/// Standard-cutting virtual-check baseline: full tomographic grids
/// (3^m * 4^n copies per check), no circuit optimizations; single checked
/// segment and subset size 1 only.
MethodOutcome run_sqem(const Circuit& c, const MethodOptions& opt);

/// The full framework: tracked subsets, per-layer virtual checks,
/// feed-forward, Bayesian recombination.
MethodOutcome run_qutracer(const Circuit& c, const MethodOptions& opt);

MethodOutcome run_method(const std::string& name, const Circuit& c, const MethodOptions& opt);

}  // namespace qutrace

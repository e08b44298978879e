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

#include "qutrace/planner.hpp"
#include "qutrace/sampler.hpp"

namespace qutrace {

/// Mitigated local distribution over a subset, with its basis and origin.
struct LocalResult {
    std::vector<size_t> subset;       // ascending global qubit indices
    std::vector<PauliLetter> basis;   // per subset qubit
    Distribution dist;                // keys over subset-local bits
    std::string provenance;
};

/// Reweights the global distribution so its marginal on local.subset equals
/// local.dist; conditionals are preserved. When the global marginal has no
/// mass on a pattern, that mass spreads uniformly over its completions.
Distribution bayes_update(const Distribution& global, const LocalResult& local);

/// Mitigated subset expectations carried across a cut. Letters keys follow
/// subset order; values are Pauli-product expectations.
struct LayerState {
    std::map<std::string, double> expectations;

    /// Pushes the expectations through a lifted 1q gate run (Heisenberg
    /// pullback of each requested product); unavailable inputs drop the
    /// output observable.
    LayerState pushed_through(const std::vector<Gate>& lifted,
                              const std::vector<size_t>& subset) const;

    /// Distribution over subset outcomes in the given basis; nullopt when a
    /// needed product expectation is missing.
    std::optional<std::vector<double>> basis_distribution(
        const std::vector<PauliLetter>& basis) const;
};

/// Bayes-refines the upstream record of every wire-cut copy whose upstream
/// basis has a mitigated distribution in `prev`; other copies pass through
/// (warned).
void feed_forward(const LayerState& prev, const std::vector<CircuitCopy>& copies,
                  std::vector<CopyResult>& results, std::vector<std::string>& warnings);

struct MultilayerOptions {
    NoiseModel noise;
    bool sampled = false;
    uint64_t shots = 100000;
    uint64_t seed = 1;
    int layers_to_check = -1;  // -1 = all checkable layers; k = the last k
    bool remap_copies = false;  // greedy noise-aware copy remapping
    std::vector<std::vector<size_t>> automorphisms;  // optional symmetry
};

struct SubsetOutcome {
    std::vector<size_t> subset;
    std::vector<MitigatedResult> per_layer;
    LocalResult final_local;
    Budget budget;
    size_t executed_copies = 0;
    size_t copy_two_qubit_gates = 0;  // summed over executed copies
    bool skipped = false;
    std::string skip_reason;
    bool replicated = false;  // filled in from a symmetric representative
};

struct MultilayerOutcome {
    Distribution global_raw;
    Distribution global_refined;
    std::vector<SubsetOutcome> per_subset;
    std::vector<std::string> warnings;
};

/// Executes the original circuit for the global distribution, chains
/// per-layer QSPC with feed-forward for each subset, and applies the final
/// mitigated local distributions in ascending subset order.
MultilayerOutcome run_multilayer(const Circuit& c,
                                 const std::vector<std::vector<size_t>>& subsets,
                                 const MultilayerOptions& options);

/// Raw global distribution for the circuit under the options' backend.
Distribution global_distribution(const Circuit& c, const NoiseModel& nm, bool sampled,
                                 uint64_t shots, uint64_t seed);

}  // namespace qutrace

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

#include "qutrace/qspc.hpp"

namespace qutrace {

/// Copy and shot accounting for one subset plan.
struct Budget {
    size_t copies_per_check_max = 0;
    size_t checks = 0;
    size_t total_copies = 0;
    uint64_t shots_per_copy = 0;
    double normalized_shots = 0.0;
    std::vector<size_t> copies_per_layer;
};

/// One checked layer of a subset plan.
struct PlanLayer {
    std::vector<Gate> lift_before;  // classical 1q gates ahead of the segment
    Circuit segment;                // ops in [cut_in, cut_out), full register
    size_t cut_in = 0;              // op boundary in the original circuit
    size_t cut_out = 0;
    CheckPair check;
    BasisSet bases;       // downstream bases required at the output cut
    bool bypassed = false;  // transparent for every required basis; no copies
};

struct SubsetPlan {
    std::vector<size_t> subset;
    size_t num_qubits = 0;
    Circuit original;
    std::vector<PlanLayer> layers;
    std::vector<Gate> lift_after;  // trailing classical 1q gates
    std::vector<CutPoint> cuts;    // skeleton cut markers on the subset wires
    Budget budget;

    size_t checked_layer_count() const;
    nlohmann::ordered_json to_json() const;
};

/// Greedy left-to-right cut placement: maximal commuting segments on the
/// subset wires, single-qubit subset gates lifted between them. Throws when
/// an op admits no subset-confined canonical check.
SubsetPlan place_cuts(const Circuit& c, const std::vector<size_t>& subset);

/// Causal-cone pruning with commutation-closure reordering: the output
/// distribution at the measured locations is preserved exactly. Locations
/// mark (wire, op boundary) watchpoints.
Circuit prune_false_dependencies(const Circuit& c, const std::vector<CutPoint>& measured);

/// Removes gates on the traced wire that commute with the basis Pauli
/// (diagonal gates on a Z-traced wire and analogs).
struct BypassResult {
    Circuit circuit;
    std::vector<size_t> bypassed_ops;  // indices into the input circuit
};
BypassResult bypass_gates(const Circuit& c, size_t qubit, PauliLetter basis);

/// Lifts maximal runs of single-qubit gates on subset wires out of the
/// circuit for classical simulation.
struct LocalSimulation {
    std::vector<Gate> lifted;
    Circuit residual;
};
LocalSimulation simulate_local(const Circuit& c, const std::vector<size_t>& subset);

/// Backward basis-requirement dataflow; fills layer.bases and bypass flags.
void traceback(SubsetPlan& plan);

/// Applies a 2x2 unitary sequence to a tracked subset state (classical gate
/// lift); gates must act on subset wires only.
Mat lift_gates_apply(const Mat& state, const std::vector<Gate>& gates,
                     const std::vector<size_t>& subset);

/// Pullback of per-qubit axis requirements through a lifted gate run.
std::vector<std::vector<PauliLetter>> pullback_axes(
    const std::vector<std::vector<PauliLetter>>& needed, const std::vector<Gate>& lifted,
    const std::vector<size_t>& subset);

/// Greedy noise-aware assignment of the copy's live qubits onto the device:
/// lowest summed readout-plus-incident-gate-error qubits win, ties broken by
/// index. Sets copy.qubit_map.
void remap(CircuitCopy& copy, const NoiseModel& device, size_t device_qubits);

/// Compacts a copy's registers to the live qubits, recording the
/// compact-to-original map so device noise is looked up correctly.
void compact_copy(CircuitCopy& copy);

Budget compute_budget(const SubsetPlan& plan, const std::vector<size_t>& copies_per_layer,
                      uint64_t shots_original);

/// Orbit reduction under a caller-declared qubit-permutation automorphism
/// group. Every permutation is spot-checked against the circuit (ideal
/// distributions must match); failures throw.
struct SymmetryOrbits {
    // representative subset -> all subsets in its orbit with the permutation
    // mapping the representative onto each member.
    std::vector<std::pair<std::vector<size_t>,
                          std::vector<std::pair<std::vector<size_t>, std::vector<size_t>>>>>
        orbits;
};
SymmetryOrbits exploit_symmetry(const Circuit& c, const std::vector<std::vector<size_t>>& subsets,
                                const std::vector<std::vector<size_t>>& automorphisms);

/// Builds the copy ensemble for one layer of a plan: tracked input for the
/// first checked layer, wire-cut input afterwards. Payload and prefix are
/// pruned and compacted. `tracked_in` is the classical input state at the
/// layer's input cut (used by the first checked layer).
CopyEnsemble build_layer_copies(const SubsetPlan& plan, size_t layer_idx, const Mat& tracked_in,
                                bool first_checked_layer);

}  // namespace qutrace

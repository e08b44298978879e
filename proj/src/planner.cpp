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

#include "qutrace/planner.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>

namespace qutrace {

namespace {

bool touches(const Gate& g, const std::vector<size_t>& subset) {
    for (size_t q : g.qubits) {
        if (std::find(subset.begin(), subset.end(), q) != subset.end()) return true;
    }
    return false;
}

bool commutes_with_subset_z(const Gate& g, const std::vector<size_t>& subset, size_t n) {
    for (size_t q : g.qubits) {
        if (std::find(subset.begin(), subset.end(), q) == subset.end()) continue;
        if (!commutes(g, PauliString::single(n, q, PauliLetter::Z))) return false;
    }
    return true;
}

// Kept original-op indices after causal-cone pruning with commutation-based
// false-dependency removal.
std::vector<size_t> prune_indices(const Circuit& c, const std::vector<CutPoint>& measured) {
    size_t max_b = 0;
    for (const auto& loc : measured) max_b = std::max(max_b, loc.after_op);
    std::vector<bool> keep(c.ops.size(), false);
    std::set<size_t> live;
    std::map<size_t, size_t> measured_after;  // wire -> last watched boundary
    for (const auto& loc : measured) {
        auto it = measured_after.find(loc.qubit);
        if (it == measured_after.end() || it->second < loc.after_op) {
            measured_after[loc.qubit] = loc.after_op;
        }
    }
    std::vector<size_t> kept_order;
    for (size_t i = max_b; i-- > 0;) {
        for (const auto& loc : measured) {
            if (loc.after_op == i + 1) live.insert(loc.qubit);
        }
        const Gate& g = c.ops[i];
        bool hits_live = false;
        for (size_t q : g.qubits) hits_live |= live.count(q) > 0;
        if (!hits_live) continue;

        bool hits_watched = false;
        for (size_t q : g.qubits) {
            auto it = measured_after.find(q);
            if (it != measured_after.end() && it->second > i) hits_watched = true;
        }
        if (!hits_watched) {
            // False dependency when it commutes past every kept op behind it.
            bool clears = true;
            for (size_t j : kept_order) {
                bool overlap = false;
                for (size_t q : g.qubits) {
                    for (size_t r : c.ops[j].qubits) overlap |= q == r;
                }
                if (overlap && !commutes(g, c.ops[j])) {
                    clears = false;
                    break;
                }
            }
            if (clears) continue;
        }
        keep[i] = true;
        kept_order.push_back(i);
        for (size_t q : g.qubits) live.insert(q);
    }
    std::vector<size_t> out;
    for (size_t i = 0; i < c.ops.size(); i++) {
        if (keep[i]) out.push_back(i);
    }
    return out;
}

Mat gate_matrix_on_subset(const Gate& g, const std::vector<size_t>& subset) {
    std::vector<size_t> local;
    for (size_t q : g.qubits) {
        auto it = std::find(subset.begin(), subset.end(), q);
        if (it == subset.end()) throw std::invalid_argument("lifted gate leaves the subset");
        local.push_back(size_t(it - subset.begin()));
    }
    return embed(gate_unitary(g), local, subset.size());
}

}  // namespace

size_t SubsetPlan::checked_layer_count() const {
    size_t n = 0;
    for (const auto& l : layers) n += l.bypassed ? 0 : 1;
    return n;
}

nlohmann::ordered_json SubsetPlan::to_json() const {
    nlohmann::ordered_json j;
    j["subset"] = subset;
    j["cuts"] = nlohmann::ordered_json::array();
    for (const auto& c : cuts) j["cuts"].push_back({{"qubit", c.qubit}, {"after_op", c.after_op}});
    j["layers"] = nlohmann::ordered_json::array();
    for (const auto& l : layers) {
        nlohmann::ordered_json jl;
        jl["cut_in"] = l.cut_in;
        jl["cut_out"] = l.cut_out;
        jl["check_left"] = l.check.c_left.str();
        jl["check_right"] = l.check.c_right.str();
        jl["bypassed"] = l.bypassed;
        jl["bases"] = nlohmann::ordered_json::array();
        for (const auto& b : l.bases) jl["bases"].push_back(letters_key(b));
        jl["segment"] = l.segment.to_json();
        j["layers"].push_back(jl);
    }
    nlohmann::ordered_json jb;
    jb["copies_per_check_max"] = budget.copies_per_check_max;
    jb["checks"] = budget.checks;
    jb["total_copies"] = budget.total_copies;
    jb["shots_per_copy"] = budget.shots_per_copy;
    jb["normalized_shots"] = budget.normalized_shots;
    jb["copies_per_layer"] = budget.copies_per_layer;
    j["budget"] = jb;
    return j;
}

SubsetPlan place_cuts(const Circuit& c, const std::vector<size_t>& subset) {
    if (subset.empty() || subset.size() > 2) {
        throw std::invalid_argument("subset size must be 1 or 2");
    }
    SubsetPlan plan;
    plan.subset = subset;
    std::sort(plan.subset.begin(), plan.subset.end());
    plan.num_qubits = c.num_qubits;
    plan.original = c;

    std::vector<Gate> pending_lift;
    bool open = false;
    size_t cut_in = 0;
    auto close_segment = [&](size_t boundary) {
        if (!open) return;
        PlanLayer layer;
        layer.cut_in = cut_in;
        layer.cut_out = boundary;
        layer.lift_before = pending_lift;
        layer.segment = Circuit(c.num_qubits);
        for (size_t i = cut_in; i < boundary; i++) layer.segment.append(c.ops[i]);
        layer.check = CheckPair::canonical_z(c.num_qubits, plan.subset);
        plan.layers.push_back(std::move(layer));
        pending_lift.clear();
        open = false;
    };

    for (size_t i = 0; i < c.ops.size(); i++) {
        const Gate& g = c.ops[i];
        if (!touches(g, plan.subset)) continue;
        if (g.qubits.size() == 1) {
            close_segment(i);
            pending_lift.push_back(g);
            continue;
        }
        if (!commutes_with_subset_z(g, plan.subset, c.num_qubits)) {
            throw std::invalid_argument(std::string("op admits no subset-confined check: ") +
                                        gate_name(g.kind) + " at index " + std::to_string(i));
        }
        if (!open) {
            open = true;
            cut_in = i;
        }
    }
    close_segment(c.ops.size());
    plan.lift_after = pending_lift;

    traceback(plan);

    plan.cuts.clear();
    for (const auto& layer : plan.layers) {
        for (size_t q : plan.subset) plan.cuts.push_back({q, layer.cut_in});
        if (!layer.bypassed) {
            for (size_t q : plan.subset) plan.cuts.push_back({q, layer.cut_out});
        }
    }
    return plan;
}

Circuit prune_false_dependencies(const Circuit& c, const std::vector<CutPoint>& measured) {
    auto kept = prune_indices(c, measured);
    Circuit out(c.num_qubits);
    for (size_t i : kept) out.append(c.ops[i]);
    out.measured = c.measured;
    return out;
}

BypassResult bypass_gates(const Circuit& c, size_t qubit, PauliLetter basis) {
    // Only the trailing commuting run is removable: once a non-commuting
    // gate appears on the wire (walking backward), the traced basis no
    // longer survives to the marginal and earlier gates must stay.
    BypassResult out;
    PauliString p = PauliString::single(c.num_qubits, qubit, basis);
    std::vector<bool> drop(c.ops.size(), false);
    for (size_t i = c.ops.size(); i-- > 0;) {
        const Gate& g = c.ops[i];
        bool on_wire = std::find(g.qubits.begin(), g.qubits.end(), qubit) != g.qubits.end();
        if (!on_wire) continue;
        if (commutes(g, p)) {
            drop[i] = true;
        } else {
            break;
        }
    }
    out.circuit = Circuit(c.num_qubits);
    for (size_t i = 0; i < c.ops.size(); i++) {
        if (drop[i]) {
            out.bypassed_ops.push_back(i);
        } else {
            out.circuit.append(c.ops[i]);
        }
    }
    out.circuit.measured = c.measured;
    return out;
}

LocalSimulation simulate_local(const Circuit& c, const std::vector<size_t>& subset) {
    LocalSimulation out;
    out.residual = Circuit(c.num_qubits);
    for (const auto& g : c.ops) {
        if (g.qubits.size() == 1 && touches(g, subset)) {
            out.lifted.push_back(g);
        } else {
            out.residual.append(g);
        }
    }
    out.residual.measured = c.measured;
    return out;
}

Mat lift_gates_apply(const Mat& state, const std::vector<Gate>& gates,
                     const std::vector<size_t>& subset) {
    Mat rho = state;
    for (const auto& g : gates) {
        Mat u = gate_matrix_on_subset(g, subset);
        rho = u * rho * u.adjoint();
    }
    return rho;
}

std::vector<std::vector<PauliLetter>> pullback_axes(
    const std::vector<std::vector<PauliLetter>>& needed, const std::vector<Gate>& lifted,
    const std::vector<size_t>& subset) {
    std::vector<std::vector<PauliLetter>> out(needed.size());
    for (size_t i = 0; i < subset.size(); i++) {
        std::vector<Gate> on_wire;
        for (const auto& g : lifted) {
            if (g.qubits[0] == subset[i]) on_wire.push_back(g);
        }
        std::set<PauliLetter> axes;
        for (PauliLetter p : needed[i]) {
            Mat m = pauli_matrix(p);
            for (size_t k = on_wire.size(); k-- > 0;) {
                Mat u = gate_unitary(on_wire[k]);
                m = u.adjoint() * m * u;
            }
            for (PauliLetter axis : {PauliLetter::X, PauliLetter::Y, PauliLetter::Z}) {
                cplx coef = (pauli_matrix(axis) * m).trace() / 2.0;
                if (std::abs(coef) > 1e-12) axes.insert(axis);
            }
        }
        out[i].assign(axes.begin(), axes.end());
    }
    return out;
}

void traceback(SubsetPlan& plan) {
    size_t s = plan.subset.size();
    std::vector<std::vector<PauliLetter>> needed(s, {PauliLetter::Z});
    needed = pullback_axes(needed, plan.lift_after, plan.subset);
    for (size_t k = plan.layers.size(); k-- > 0;) {
        auto& layer = plan.layers[k];
        layer.bases.clear();
        std::vector<size_t> idx(s, 0);
        while (true) {
            std::vector<PauliLetter> basis(s);
            for (size_t q = 0; q < s; q++) basis[q] = needed[q][idx[q]];
            layer.bases.push_back(basis);
            size_t q = 0;
            while (q < s && ++idx[q] == needed[q].size()) idx[q++] = 0;
            if (q == s) break;
        }
        // Gate bypassing: a segment transparent for every required axis is
        // carried classically instead of being checked.
        layer.bypassed = true;
        for (size_t i = 0; i < s && layer.bypassed; i++) {
            for (PauliLetter p : needed[i]) {
                PauliString obs = PauliString::single(plan.num_qubits, plan.subset[i], p);
                for (const auto& g : layer.segment.ops) {
                    bool on_wire = std::find(g.qubits.begin(), g.qubits.end(), plan.subset[i]) !=
                                   g.qubits.end();
                    if (on_wire && !commutes(g, obs)) {
                        layer.bypassed = false;
                        break;
                    }
                }
                if (!layer.bypassed) break;
            }
        }
        needed = pullback_axes(needed, layer.lift_before, plan.subset);
    }
}

void remap(CircuitCopy& copy, const NoiseModel& device, size_t device_qubits) {
    std::set<size_t> live_set(copy.subset.begin(), copy.subset.end());
    for (const auto& g : copy.prefix.ops) {
        for (size_t q : g.qubits) live_set.insert(q);
    }
    for (const auto& g : copy.payload.ops) {
        for (size_t q : g.qubits) live_set.insert(q);
    }
    size_t live = live_set.size();
    if (device_qubits < live) {
        throw std::invalid_argument("device has fewer qubits than the copy needs");
    }
    std::vector<std::pair<double, size_t>> scored;
    for (size_t q = 0; q < device_qubits; q++) {
        auto r = device.readout_for(q);
        double p2 = device.p2;
        auto it = device.overrides.find(q);
        if (it != device.overrides.end() && it->second.p2) p2 = *it->second.p2;
        scored.emplace_back(0.5 * (r[0] + r[1]) + p2, q);
    }
    std::stable_sort(scored.begin(), scored.end());
    std::vector<size_t> chosen;
    for (size_t i = 0; i < live; i++) chosen.push_back(scored[i].second);
    std::sort(chosen.begin(), chosen.end());

    copy.qubit_map.assign(copy.payload.num_qubits, 0);
    std::vector<size_t> live_sorted(live_set.begin(), live_set.end());
    std::set<size_t> used;
    size_t pick = 0;
    for (size_t q : live_sorted) {
        copy.qubit_map[q] = chosen[pick];
        used.insert(chosen[pick]);
        pick++;
    }
    size_t fallback = 0;
    for (size_t q = 0; q < copy.payload.num_qubits; q++) {
        if (live_set.count(q)) continue;
        while (used.count(fallback) && fallback + 1 < device_qubits) fallback++;
        copy.qubit_map[q] = fallback;
        used.insert(fallback);
    }
}

void compact_copy(CircuitCopy& copy) {
    std::set<size_t> live_set(copy.subset.begin(), copy.subset.end());
    for (const auto& g : copy.prefix.ops) {
        for (size_t q : g.qubits) live_set.insert(q);
    }
    for (const auto& g : copy.payload.ops) {
        for (size_t q : g.qubits) live_set.insert(q);
    }
    std::vector<size_t> live(live_set.begin(), live_set.end());
    std::map<size_t, size_t> to_compact;
    for (size_t i = 0; i < live.size(); i++) to_compact[live[i]] = i;

    auto relabel = [&](const Circuit& c) {
        Circuit out(live.size());
        for (auto g : c.ops) {
            for (auto& q : g.qubits) q = to_compact.at(q);
            out.append(std::move(g));
        }
        return out;
    };
    std::vector<size_t> new_map(live.size());
    for (size_t i = 0; i < live.size(); i++) {
        new_map[i] = copy.qubit_map.empty() ? live[i] : copy.qubit_map[live[i]];
    }
    copy.prefix = relabel(copy.prefix);
    copy.payload = relabel(copy.payload);
    for (auto& q : copy.subset) q = to_compact.at(q);
    copy.qubit_map = new_map;
}

Budget compute_budget(const SubsetPlan& plan, const std::vector<size_t>& copies_per_layer,
                      uint64_t shots_original) {
    Budget b;
    b.copies_per_layer = copies_per_layer;
    for (size_t c : copies_per_layer) {
        b.total_copies += c;
        b.copies_per_check_max = std::max(b.copies_per_check_max, c);
        if (c > 0) b.checks++;
    }
    size_t s = plan.subset.size();
    size_t n = std::max<size_t>(1, plan.num_qubits);
    b.shots_per_copy = uint64_t(std::ceil(double(s) / double(n) * double(shots_original)));
    b.normalized_shots =
        shots_original == 0
            ? 0.0
            : double(b.total_copies) * double(b.shots_per_copy) / double(shots_original);
    return b;
}

SymmetryOrbits exploit_symmetry(const Circuit& c, const std::vector<std::vector<size_t>>& subsets,
                                const std::vector<std::vector<size_t>>& automorphisms) {
    Distribution reference = ideal_distribution(c);
    for (const auto& perm : automorphisms) {
        if (perm.size() != c.num_qubits) {
            throw std::invalid_argument("permutation size mismatch");
        }
        Circuit mapped(c.num_qubits);
        for (auto g : c.ops) {
            for (auto& q : g.qubits) q = perm[q];
            mapped.append(std::move(g));
        }
        for (size_t q : c.measured) mapped.measured.insert(perm[q]);
        Distribution permuted = ideal_distribution(mapped);
        if (hellinger_fidelity(reference, permuted) < 1.0 - 1e-9) {
            throw std::invalid_argument("supplied permutation is not a circuit automorphism");
        }
    }

    auto apply_perm = [](const std::vector<size_t>& subset, const std::vector<size_t>& perm) {
        std::vector<size_t> out;
        for (size_t q : subset) out.push_back(perm[q]);
        std::sort(out.begin(), out.end());
        return out;
    };

    SymmetryOrbits orbits;
    std::set<std::vector<size_t>> assigned;
    std::vector<std::vector<size_t>> sorted_subsets = subsets;
    for (auto& s : sorted_subsets) std::sort(s.begin(), s.end());
    std::sort(sorted_subsets.begin(), sorted_subsets.end());
    std::vector<size_t> identity(c.num_qubits);
    for (size_t q = 0; q < c.num_qubits; q++) identity[q] = q;
    for (const auto& subset : sorted_subsets) {
        if (assigned.count(subset)) continue;
        std::vector<std::pair<std::vector<size_t>, std::vector<size_t>>> members;
        std::vector<std::vector<size_t>> perms = automorphisms;
        perms.insert(perms.begin(), identity);
        for (const auto& perm : perms) {
            auto image = apply_perm(subset, perm);
            if (std::find(sorted_subsets.begin(), sorted_subsets.end(), image) ==
                sorted_subsets.end()) {
                continue;
            }
            if (assigned.count(image)) continue;
            assigned.insert(image);
            members.emplace_back(image, perm);
        }
        orbits.orbits.emplace_back(subset, std::move(members));
    }
    return orbits;
}

CopyEnsemble build_layer_copies(const SubsetPlan& plan, size_t layer_idx, const Mat& tracked_in,
                                bool first_checked_layer) {
    const PlanLayer& layer = plan.layers[layer_idx];
    if (layer.bypassed) {
        throw std::invalid_argument("bypassed layers produce no copies");
    }
    const Circuit& c = plan.original;

    std::vector<CutPoint> locations;
    for (size_t q : plan.subset) locations.push_back({q, layer.cut_out});
    if (!first_checked_layer) {
        for (size_t q : plan.subset) locations.push_back({q, layer.cut_in});
    }
    auto kept = prune_indices(c, locations);

    Circuit prefix(c.num_qubits);
    Circuit payload(c.num_qubits);
    for (size_t i : kept) {
        if (i < layer.cut_in) {
            prefix.append(c.ops[i]);
        } else if (i < layer.cut_out) {
            payload.append(c.ops[i]);
        }
    }

    CircuitCopy shape;
    shape.subset = plan.subset;
    if (first_checked_layer) {
        // Classical wire: subset-wire prefix gates are the lifted runs that
        // were already folded into tracked_in.
        Circuit merged(c.num_qubits);
        for (const auto& g : prefix.ops) {
            if (touches(g, plan.subset)) {
                if (g.qubits.size() != 1) {
                    throw std::logic_error("tracked prefix still carries subset entanglers");
                }
                continue;
            }
            merged.append(g);
        }
        for (const auto& g : payload.ops) merged.append(g);
        shape.payload = merged;
        shape.prefix = Circuit(c.num_qubits);
    } else {
        shape.prefix = prefix;
        shape.payload = payload;
    }
    compact_copy(shape);

    CheckPair check = CheckPair::canonical_z(shape.payload.num_qubits, shape.subset);
    CopyEnsemble ensemble =
        first_checked_layer
            ? build_copies(shape.payload, check, tracked_in, layer.bases)
            : build_copies_measured(shape.prefix, shape.payload, check, layer.bases);
    for (auto& copy : ensemble.copies) {
        copy.qubit_map = shape.qubit_map;
    }
    return ensemble;
}

}  // namespace qutrace

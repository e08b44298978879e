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

#include "qutrace/methods.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>

namespace qutrace {

namespace {

std::vector<size_t> measured_list(const Circuit& c) {
    std::vector<size_t> out(c.measured.begin(), c.measured.end());
    if (out.empty()) {
        out.resize(c.num_qubits);
        for (size_t q = 0; q < c.num_qubits; q++) out[q] = q;
    }
    return out;
}

// Permutation that parks the subset on the lowest-readout physical qubits.
std::vector<size_t> subset_first_map(const NoiseModel& nm, size_t n,
                                     const std::vector<size_t>& subset) {
    std::vector<std::pair<double, size_t>> scored;
    for (size_t q = 0; q < n; q++) {
        auto r = nm.readout_for(q);
        scored.emplace_back(0.5 * (r[0] + r[1]), q);
    }
    std::stable_sort(scored.begin(), scored.end());
    std::vector<size_t> map(n, size_t(-1));
    std::set<size_t> used;
    size_t pick = 0;
    for (size_t q : subset) {
        map[q] = scored[pick].second;
        used.insert(scored[pick].second);
        pick++;
    }
    size_t next = 0;
    for (size_t q = 0; q < n; q++) {
        if (map[q] != size_t(-1)) continue;
        while (used.count(next)) next++;
        map[q] = next;
        used.insert(next);
    }
    return map;
}

Distribution local_distribution(const Circuit& c, const NoiseModel& nm, bool sampled,
                                uint64_t shots, uint64_t seed) {
    if (sampled) {
        return to_distribution(sample(c, nm, std::max<uint64_t>(1, shots), seed));
    }
    Mat rho = simulate_exact(c, nm);
    Distribution full = distribution_from_density(rho, c.num_qubits);
    full = readout_channel(full, nm);
    auto measured = measured_list(c);
    if (measured.size() == c.num_qubits) return full;
    return marginal(full, measured);
}

MethodOutcome subsetting_common(const Circuit& c, const MethodOptions& opt, bool optimize) {
    MethodOutcome out;
    auto subsets = default_subsets(c, opt.subset_size);
    uint64_t global_shots = opt.shots / 2;
    uint64_t local_shots = subsets.empty() ? 0 : (opt.shots / 2) / subsets.size();

    out.dist = global_distribution(c, opt.noise, opt.sampled, std::max<uint64_t>(1, global_shots),
                                   opt.seed);
    double gate_sum = 0;
    size_t gate_count = 0;

    size_t idx = 0;
    for (const auto& subset : subsets) {
        Circuit local = c;
        local.measured.clear();
        for (size_t q : subset) local.measured.insert(q);
        if (optimize) {
            std::vector<CutPoint> locations;
            for (size_t q : subset) locations.push_back({q, c.ops.size()});
            local = prune_false_dependencies(local, locations);
            for (size_t q : subset) {
                auto bp = bypass_gates(local, q, PauliLetter::Z);
                local = bp.circuit;
            }
            local.measured.clear();
            for (size_t q : subset) local.measured.insert(q);
        }
        NoiseModel nm = opt.noise;
        if (opt.remap) {
            if (optimize) {
                CircuitCopy pseudo;
                pseudo.payload = local;
                pseudo.subset = subset;
                remap(pseudo, opt.noise, c.num_qubits);
                nm = opt.noise.remapped(pseudo.qubit_map, c.num_qubits);
            } else {
                nm = opt.noise.remapped(subset_first_map(opt.noise, c.num_qubits, subset),
                                        c.num_qubits);
            }
        }
        Distribution ld =
            local_distribution(local, nm, opt.sampled, local_shots, opt.seed + 31 * (idx + 1));
        LocalResult lr;
        lr.subset = subset;
        lr.basis = std::vector<PauliLetter>(subset.size(), PauliLetter::Z);
        lr.dist = ld;
        lr.provenance = optimize ? "subsetting" : "jigsaw";
        out.dist = bayes_update(out.dist, lr);
        gate_sum += double(local.count_two_qubit_gates());
        gate_count++;
        idx++;
    }
    out.normalized_shots = 1.0;
    out.avg_two_qubit_gates = gate_count ? gate_sum / double(gate_count)
                                         : double(c.count_two_qubit_gates());
    return out;
}

}  // namespace

std::vector<std::vector<size_t>> default_subsets(const Circuit& c, size_t subset_size) {
    auto measured = measured_list(c);
    std::vector<std::vector<size_t>> out;
    if (subset_size == 1) {
        for (size_t q : measured) out.push_back({q});
        return out;
    }
    if (subset_size != 2) throw std::invalid_argument("subset size must be 1 or 2");
    for (size_t i = 0; i + 1 < measured.size(); i += 2) {
        out.push_back({measured[i], measured[i + 1]});
    }
    if (measured.size() % 2 == 1) out.push_back({measured.back()});
    return out;
}

MethodOutcome run_original(const Circuit& c, const MethodOptions& opt) {
    MethodOutcome out;
    out.dist = global_distribution(c, opt.noise, opt.sampled, opt.shots, opt.seed);
    out.normalized_shots = 1.0;
    out.avg_two_qubit_gates = double(c.count_two_qubit_gates());
    return out;
}

MethodOutcome run_jigsaw(const Circuit& c, const MethodOptions& opt) {
    return subsetting_common(c, opt, /*optimize=*/false);
}

MethodOutcome run_subsetting(const Circuit& c, const MethodOptions& opt) {
    return subsetting_common(c, opt, /*optimize=*/true);
}

MethodOutcome run_sqem(const Circuit& c, const MethodOptions& opt) {
    if (opt.subset_size != 1) {
        throw std::invalid_argument("the tomographic baseline supports subset size 1 only");
    }
    MethodOutcome out;
    out.dist = global_distribution(c, opt.noise, opt.sampled, opt.shots, opt.seed);
    auto subsets = default_subsets(c, 1);
    uint64_t shots_per_copy = uint64_t(
        std::ceil(1.0 / double(std::max<size_t>(1, c.num_qubits)) * double(opt.shots)));
    double total_copy_shots = 0;
    double gate_sum = 0;
    size_t gate_count = 0;
    size_t idx = 0;
    for (const auto& subset : subsets) {
        SubsetPlan plan = place_cuts(c, subset);
        if (plan.layers.size() != 1) {
            throw std::invalid_argument(
                "the tomographic baseline handles a single checked segment only");
        }
        const auto& layer = plan.layers[0];
        Circuit prefix(c.num_qubits);
        for (size_t i = 0; i < layer.cut_in; i++) prefix.append(c.ops[i]);
        CheckPair check = CheckPair::canonical_z(c.num_qubits, plan.subset);
        auto grid = build_copies_grid(prefix, layer.segment, check, /*checked=*/true);

        CopyExecutionOptions exec;
        exec.noise = opt.noise;
        exec.sampled = opt.sampled;
        exec.shots_per_copy = shots_per_copy;
        exec.seed = opt.seed + 131 * (idx + 1);
        auto results = execute_copies(grid.copies, exec);
        auto mit = assemble(grid, results);

        LayerState st;
        st.expectations = mit.expectations;
        st = st.pushed_through(plan.lift_after, plan.subset);
        auto dist = st.basis_distribution({PauliLetter::Z});
        if (!dist) throw std::runtime_error("tomographic reconstruction incomplete");

        LocalResult lr;
        lr.subset = plan.subset;
        lr.basis = {PauliLetter::Z};
        for (size_t e = 0; e < dist->size(); e++) {
            if ((*dist)[e] > 0) lr.dist[bitstring_of_index(e, 1)] = (*dist)[e];
        }
        lr.provenance = "sqem";
        out.dist = bayes_update(out.dist, lr);

        total_copy_shots += double(grid.copies.size()) * double(shots_per_copy);
        for (const auto& copy : grid.copies) {
            gate_sum += double(copy.prefix.count_two_qubit_gates() +
                               copy.payload.count_two_qubit_gates());
            gate_count++;
        }
        idx++;
    }
    out.normalized_shots = 1.0 + total_copy_shots / double(std::max<uint64_t>(1, opt.shots));
    out.avg_two_qubit_gates =
        gate_count ? gate_sum / double(gate_count) : double(c.count_two_qubit_gates());
    return out;
}

MethodOutcome run_qutracer(const Circuit& c, const MethodOptions& opt) {
    MultilayerOptions mo;
    mo.noise = opt.noise;
    mo.sampled = opt.sampled;
    mo.shots = opt.shots;
    mo.seed = opt.seed;
    mo.layers_to_check = opt.layers_to_check;
    mo.remap_copies = opt.remap;
    mo.automorphisms = opt.automorphisms;
    auto ml = run_multilayer(c, default_subsets(c, opt.subset_size), mo);

    MethodOutcome out;
    out.dist = ml.global_refined;
    out.warnings = ml.warnings;
    double total_norm = 1.0;
    double gate_sum = 0;
    size_t copy_count = 0;
    for (const auto& so : ml.per_subset) {
        if (so.skipped || so.replicated) continue;
        total_norm += so.budget.normalized_shots;
        gate_sum += double(so.copy_two_qubit_gates);
        copy_count += so.executed_copies;
    }
    out.normalized_shots = total_norm;
    out.avg_two_qubit_gates =
        copy_count ? gate_sum / double(copy_count) : double(c.count_two_qubit_gates());
    return out;
}

MethodOutcome run_method(const std::string& name, const Circuit& c, const MethodOptions& opt) {
    if (name == "original") return run_original(c, opt);
    if (name == "jigsaw") return run_jigsaw(c, opt);
    if (name == "subsetting") return run_subsetting(c, opt);
    if (name == "sqem") return run_sqem(c, opt);
    if (name == "qutracer") return run_qutracer(c, opt);
    throw std::invalid_argument("unknown method: " + name);
}

}  // namespace qutrace

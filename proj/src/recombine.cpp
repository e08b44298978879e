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

#include "qutrace/recombine.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <stdexcept>

namespace qutrace {

namespace {

std::string pattern_of(const std::string& key, const std::vector<size_t>& subset) {
    size_t n = key.size();
    std::string local(subset.size(), '0');
    for (size_t i = 0; i < subset.size(); i++) {
        local[subset.size() - 1 - i] = key[n - 1 - subset[i]];
    }
    return local;
}

}  // namespace

Distribution bayes_update(const Distribution& global, const LocalResult& local) {
    if (!is_normalized(local.dist, 1e-6)) {
        throw std::invalid_argument("local distribution must be normalized");
    }
    for (PauliLetter b : local.basis) {
        if (b != PauliLetter::Z) {
            throw std::invalid_argument("global update requires a Z-basis local distribution");
        }
    }
    if (global.empty()) throw std::invalid_argument("global distribution is empty");
    size_t n = global.begin()->first.size();
    size_t s = local.subset.size();

    Distribution marg;
    for (const auto& [key, p] : global) marg[pattern_of(key, local.subset)] += p;

    Distribution out;
    for (const auto& [key, p] : global) {
        std::string pat = pattern_of(key, local.subset);
        double m = 0.0;
        auto it = local.dist.find(pat);
        if (it != local.dist.end()) m = it->second;
        double pm = marg[pat];
        if (pm > 0.0 && m > 0.0 && p > 0.0) out[key] = p * m / pm;
    }
    // Zero-marginal rule: local mass on unseen patterns spreads uniformly
    // over all completions so the marginal postcondition stays exact.
    size_t completions = size_t(1) << (n - s);
    for (const auto& [pat, m] : local.dist) {
        if (m <= 0.0) continue;
        auto it = marg.find(pat);
        if (it != marg.end() && it->second > 0.0) continue;
        size_t pat_idx = index_of_bitstring(pat);
        for (size_t rest = 0; rest < completions; rest++) {
            size_t key_idx = 0;
            size_t rest_pos = 0;
            for (size_t q = 0; q < n; q++) {
                auto sit = std::find(local.subset.begin(), local.subset.end(), q);
                if (sit != local.subset.end()) {
                    size_t i = size_t(sit - local.subset.begin());
                    key_idx |= ((pat_idx >> i) & 1u) << q;
                } else {
                    key_idx |= ((rest >> rest_pos) & 1u) << q;
                    rest_pos++;
                }
            }
            out[bitstring_of_index(key_idx, n)] += m / double(completions);
        }
    }
    return out;
}

LayerState LayerState::pushed_through(const std::vector<Gate>& lifted,
                                      const std::vector<size_t>& subset) const {
    size_t s = subset.size();
    LayerState out;
    // For every product observable P at the downstream side, the pulled-back
    // operator decomposes over Pauli products at the upstream side; the
    // pushed expectation exists when every contributing input is known.
    size_t count = size_t(1) << (2 * s);
    for (size_t code = 0; code < count; code++) {
        std::vector<PauliLetter> letters(s);
        bool trivial = true;
        for (size_t q = 0; q < s; q++) {
            letters[q] = PauliLetter((code >> (2 * q)) & 3u);
            if (letters[q] != PauliLetter::I) trivial = false;
        }
        if (trivial) continue;
        Mat m = PauliString(letters, 0).matrix();
        for (size_t k = lifted.size(); k-- > 0;) {
            auto it = std::find(subset.begin(), subset.end(), lifted[k].qubits[0]);
            if (it == subset.end()) throw std::invalid_argument("lifted gate leaves the subset");
            std::vector<size_t> local{size_t(it - subset.begin())};
            Mat u = embed(gate_unitary(lifted[k]), local, s);
            m = u.adjoint() * m * u;
        }
        // Expand in the Pauli product basis of the upstream side.
        double value = 0.0;
        bool available = true;
        size_t dim = size_t(1) << s;
        for (size_t in_code = 0; in_code < count && available; in_code++) {
            std::vector<PauliLetter> in_letters(s);
            bool in_trivial = true;
            for (size_t q = 0; q < s; q++) {
                in_letters[q] = PauliLetter((in_code >> (2 * q)) & 3u);
                if (in_letters[q] != PauliLetter::I) in_trivial = false;
            }
            Mat basis_op = PauliString(in_letters, 0).matrix();
            cplx coef = (basis_op * m).trace() / double(dim);
            if (std::abs(coef) < 1e-12) continue;
            if (std::abs(coef.imag()) > 1e-9) {
                available = false;
                break;
            }
            if (in_trivial) {
                value += coef.real();
                continue;
            }
            auto it = expectations.find(letters_key(in_letters));
            if (it == expectations.end()) {
                available = false;
                break;
            }
            value += coef.real() * it->second;
        }
        if (available) out.expectations[letters_key(letters)] = value;
    }
    return out;
}

std::optional<std::vector<double>> LayerState::basis_distribution(
    const std::vector<PauliLetter>& basis) const {
    size_t s = basis.size();
    size_t dim = size_t(1) << s;
    std::vector<double> vals(dim, 1.0);
    for (size_t mask = 1; mask < dim; mask++) {
        std::vector<PauliLetter> letters(s, PauliLetter::I);
        for (size_t q = 0; q < s; q++) {
            if ((mask >> q) & 1u) letters[q] = basis[q];
        }
        auto it = expectations.find(letters_key(letters));
        if (it == expectations.end()) return std::nullopt;
        vals[mask] = it->second;
    }
    std::vector<double> dist(dim, 0.0);
    double total = 0;
    for (size_t e = 0; e < dim; e++) {
        double p = 0;
        for (size_t mask = 0; mask < dim; mask++) {
            int sign = (std::popcount(e & mask) & 1) ? -1 : 1;
            p += sign * vals[mask];
        }
        dist[e] = std::max(0.0, p / double(dim));
        total += dist[e];
    }
    if (total <= 0) return std::nullopt;
    for (auto& p : dist) p /= total;
    return dist;
}

void feed_forward(const LayerState& prev, const std::vector<CircuitCopy>& copies,
                  std::vector<CopyResult>& results, std::vector<std::string>& warnings) {
    std::map<std::string, std::optional<std::vector<double>>> cache;
    for (size_t k = 0; k < copies.size(); k++) {
        if (copies[k].upstream_basis.empty()) continue;
        std::string key = letters_key(copies[k].upstream_basis);
        auto it = cache.find(key);
        if (it == cache.end()) {
            it = cache.emplace(key, prev.basis_distribution(copies[k].upstream_basis)).first;
            if (!it->second.has_value()) {
                warnings.push_back("feed-forward: no mitigated distribution for basis " + key +
                                   "; copies pass through unrefined");
            }
        }
        if (it->second.has_value()) {
            results[k].replace_upstream_marginal(*it->second);
        }
    }
}

Distribution global_distribution(const Circuit& c, const NoiseModel& nm, bool sampled,
                                 uint64_t shots, uint64_t seed) {
    std::vector<size_t> measured(c.measured.begin(), c.measured.end());
    if (measured.empty()) {
        measured.resize(c.num_qubits);
        for (size_t q = 0; q < c.num_qubits; q++) measured[q] = q;
    }
    if (sampled) {
        return to_distribution(sample(c, nm, shots, seed));
    }
    Mat rho = simulate_exact(c, nm);
    Distribution full = distribution_from_density(rho, c.num_qubits);
    full = readout_channel(full, nm);
    if (measured.size() == c.num_qubits) return full;
    return marginal(full, measured);
}

namespace {

struct ChainResult {
    std::vector<MitigatedResult> per_layer;
    LocalResult final_local;
    Budget budget;
    size_t executed_copies = 0;
    size_t copy_two_qubit_gates = 0;
    bool skipped = false;
    std::string skip_reason;
};

ChainResult run_chain(const Circuit& c, const std::vector<size_t>& subset,
                      const MultilayerOptions& options, std::vector<std::string>& warnings,
                      uint64_t subset_seed) {
    ChainResult out;
    SubsetPlan plan = place_cuts(c, subset);
    size_t s = plan.subset.size();

    // Checked set: the last `layers_to_check` non-bypassed layers.
    std::vector<size_t> checkable;
    for (size_t k = 0; k < plan.layers.size(); k++) {
        if (!plan.layers[k].bypassed) checkable.push_back(k);
    }
    size_t want = options.layers_to_check < 0
                      ? checkable.size()
                      : std::min<size_t>(size_t(options.layers_to_check), checkable.size());
    std::set<size_t> checked(checkable.end() - long(want), checkable.end());

    uint64_t shots_per_copy = uint64_t(
        std::ceil(double(s) / double(std::max<size_t>(1, c.num_qubits)) * double(options.shots)));

    // Tracked state entering the current position (valid until the first
    // non-classical step that is not checked).
    bool tracked_valid = true;
    Mat tracked = zero_density(s);
    std::optional<LayerState> carried;  // mitigated expectations at the current point
    std::vector<size_t> copies_per_layer;

    auto state_to_layerstate = [&](const Mat& rho, const BasisSet& bases) {
        LayerState st;
        for (const auto& basis : bases) {
            for (size_t mask = 1; mask < (size_t(1) << s); mask++) {
                std::vector<PauliLetter> letters(s, PauliLetter::I);
                for (size_t q = 0; q < s; q++) {
                    if ((mask >> q) & 1u) letters[q] = basis[q];
                }
                st.expectations[letters_key(letters)] =
                    (PauliString(letters, 0).matrix() * rho).trace().real();
            }
        }
        return st;
    };

    for (size_t k = 0; k < plan.layers.size(); k++) {
        auto& layer = plan.layers[k];
        // Lifted run ahead of the layer.
        if (tracked_valid) tracked = lift_gates_apply(tracked, layer.lift_before, plan.subset);
        if (carried) carried = carried->pushed_through(layer.lift_before, plan.subset);

        if (layer.bypassed) {
            // Transparent for every required axis; the carried expectations
            // survive unchanged. Full-state tracking ends here because only
            // the required axes are guaranteed.
            if (tracked_valid && !layer.segment.ops.empty()) {
                carried = state_to_layerstate(tracked, layer.bases);
                tracked_valid = false;
            }
            copies_per_layer.push_back(0);
            continue;
        }

        bool is_checked = checked.count(k) > 0;
        if (!is_checked) {
            // Raw segment: classical tracking is lost; mitigated info cannot
            // cross an unchecked segment either.
            tracked_valid = false;
            if (carried) {
                warnings.push_back("unchecked segment interrupts the mitigated chain");
                carried.reset();
            }
            copies_per_layer.push_back(0);
            continue;
        }

        bool mechanism_a = tracked_valid;
        CopyEnsemble ensemble;
        try {
            ensemble = build_layer_copies(plan, k, mechanism_a ? tracked : Mat(), mechanism_a);
        } catch (const std::exception& e) {
            out.skipped = true;
            out.skip_reason = e.what();
            return out;
        }
        if (options.remap_copies) {
            for (auto& copy : ensemble.copies) {
                remap(copy, options.noise, c.num_qubits);
            }
        }
        copies_per_layer.push_back(ensemble.copies.size());
        out.executed_copies += ensemble.copies.size();
        for (const auto& copy : ensemble.copies) {
            out.copy_two_qubit_gates +=
                copy.prefix.count_two_qubit_gates() + copy.payload.count_two_qubit_gates();
        }

        CopyExecutionOptions exec;
        exec.noise = options.noise;
        exec.sampled = options.sampled;
        exec.shots_per_copy = shots_per_copy;
        exec.seed = subset_seed + 7919 * k;
        std::vector<CopyResult> results = execute_copies(ensemble.copies, exec);
        if (!mechanism_a && carried) {
            feed_forward(*carried, ensemble.copies, results, warnings);
        }
        MitigatedResult mit;
        try {
            mit = assemble(ensemble, results);
        } catch (const std::exception& e) {
            out.skipped = true;
            out.skip_reason = e.what();
            return out;
        }
        out.per_layer.push_back(mit);

        LayerState next;
        next.expectations = mit.expectations;
        carried = next;
        tracked_valid = false;
    }

    if (!carried) {
        if (tracked_valid) {
            tracked = lift_gates_apply(tracked, plan.lift_after, plan.subset);
            carried = state_to_layerstate(tracked, all_bases(s));
        } else {
            out.skipped = true;
            out.skip_reason = "no mitigated information reached the measurement";
            return out;
        }
    } else {
        carried = carried->pushed_through(plan.lift_after, plan.subset);
    }

    auto final_dist = carried->basis_distribution(std::vector<PauliLetter>(s, PauliLetter::Z));
    if (!final_dist) {
        out.skipped = true;
        out.skip_reason = "final Z-basis distribution incomplete";
        return out;
    }
    out.final_local.subset = plan.subset;
    out.final_local.basis = std::vector<PauliLetter>(s, PauliLetter::Z);
    for (size_t e = 0; e < final_dist->size(); e++) {
        if ((*final_dist)[e] > 0) {
            out.final_local.dist[bitstring_of_index(e, s)] = (*final_dist)[e];
        }
    }
    out.final_local.provenance = "qspc-chain";
    out.budget = compute_budget(plan, copies_per_layer, options.shots);
    return out;
}

}  // namespace

MultilayerOutcome run_multilayer(const Circuit& c,
                                 const std::vector<std::vector<size_t>>& subsets,
                                 const MultilayerOptions& options) {
    MultilayerOutcome out;
    out.global_raw = global_distribution(c, options.noise, options.sampled, options.shots,
                                         options.seed);
    out.global_refined = out.global_raw;
    if (options.layers_to_check == 0) {
        for (const auto& subset : subsets) {
            SubsetOutcome so;
            so.subset = subset;
            std::sort(so.subset.begin(), so.subset.end());
            so.skipped = true;
            so.skip_reason = "layers_to_check = 0";
            out.per_subset.push_back(std::move(so));
        }
        return out;
    }

    // Orbit reduction: representatives execute, members replicate.
    std::vector<std::vector<size_t>> sorted_subsets = subsets;
    for (auto& s : sorted_subsets) std::sort(s.begin(), s.end());
    std::sort(sorted_subsets.begin(), sorted_subsets.end());
    SymmetryOrbits orbits;
    if (!options.automorphisms.empty()) {
        orbits = exploit_symmetry(c, sorted_subsets, options.automorphisms);
    } else {
        for (const auto& s : sorted_subsets) {
            orbits.orbits.emplace_back(
                s, std::vector<std::pair<std::vector<size_t>, std::vector<size_t>>>{
                       {s, std::vector<size_t>{}}});
        }
    }

    std::map<std::vector<size_t>, SubsetOutcome> outcomes;
    uint64_t rep_idx = 0;
    for (const auto& [rep, members] : orbits.orbits) {
        ChainResult chain =
            run_chain(c, rep, options, out.warnings, options.seed + 104729 * (rep_idx + 1));
        rep_idx++;
        for (const auto& [member, perm] : members) {
            SubsetOutcome so;
            so.subset = member;
            so.skipped = chain.skipped;
            so.skip_reason = chain.skip_reason;
            so.per_layer = chain.per_layer;
            so.budget = chain.budget;
            so.executed_copies = chain.executed_copies;
            so.copy_two_qubit_gates = chain.copy_two_qubit_gates;
            so.replicated = member != rep;
            if (!chain.skipped) {
                so.final_local.subset = member;
                so.final_local.basis = chain.final_local.basis;
                so.final_local.provenance =
                    so.replicated ? "qspc-chain (symmetry replica)" : chain.final_local.provenance;
                // Bit i of the representative's local keys belongs to
                // rep[i]; under the permutation it serves perm(rep[i]).
                std::vector<size_t> positions(rep.size());
                for (size_t i = 0; i < rep.size(); i++) {
                    size_t image = perm.empty() ? rep[i] : perm[rep[i]];
                    auto it = std::find(member.begin(), member.end(), image);
                    positions[i] = size_t(it - member.begin());
                }
                for (const auto& [key, p] : chain.final_local.dist) {
                    size_t idx = index_of_bitstring(key);
                    size_t mapped = 0;
                    for (size_t i = 0; i < rep.size(); i++) {
                        mapped |= ((idx >> i) & 1u) << positions[i];
                    }
                    so.final_local.dist[bitstring_of_index(mapped, rep.size())] += p;
                }
            }
            outcomes[member] = std::move(so);
        }
    }

    // Ascending lexicographic subset order for the sequential updates.
    for (auto& [subset, so] : outcomes) {
        if (!so.skipped) {
            if (so.skip_reason.empty()) {
                try {
                    out.global_refined = bayes_update(out.global_refined, so.final_local);
                } catch (const std::exception& e) {
                    so.skipped = true;
                    so.skip_reason = e.what();
                    out.warnings.push_back(std::string("subset update skipped: ") + e.what());
                }
            }
        } else if (!so.skip_reason.empty() && so.skip_reason != "layers_to_check = 0") {
            out.warnings.push_back("subset update skipped: " + so.skip_reason);
        }
        out.per_subset.push_back(so);
    }
    return out;
}

}  // namespace qutrace

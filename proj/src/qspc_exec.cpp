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

#include <Eigen/Eigenvalues>
#include <bit>
#include <cmath>
#include <map>
#include <random>
#include <stdexcept>

#include "qutrace/qspc.hpp"
#include "qutrace/sampler.hpp"

namespace qutrace {

namespace {

// Measuring basis b on rho is measuring Z on V rho V^dagger.
std::vector<Gate> basis_rotation_gates(PauliLetter b, size_t q) {
    switch (b) {
        case PauliLetter::X: return {make_gate(GateKind::H, {q})};
        case PauliLetter::Y:
            return {make_gate(GateKind::Sdg, {q}), make_gate(GateKind::H, {q})};
        case PauliLetter::Z: return {};
        case PauliLetter::I: return {};
    }
    return {};
}

void rotate_density(Mat& rho, const std::vector<PauliLetter>& basis,
                    const std::vector<size_t>& subset) {
    for (size_t i = 0; i < subset.size(); i++) {
        for (const auto& g : basis_rotation_gates(basis[i], subset[i])) {
            apply_gate_density(rho, g);
        }
    }
}

void rotate_state(Vec& psi, const std::vector<PauliLetter>& basis,
                  const std::vector<size_t>& subset) {
    for (size_t i = 0; i < subset.size(); i++) {
        for (const auto& g : basis_rotation_gates(basis[i], subset[i])) {
            apply_local_state(psi, gate_unitary(g), g.qubits);
        }
    }
}

Mat prep_density_for(const CircuitCopy& copy) {
    size_t s = copy.subset.size();
    if (!copy.prep.direct) return product_prep_density(copy.prep.packed_basis, s);
    Mat sigma = copy.tracked_state;
    if (sigma.rows() != Eigen::Index(size_t(1) << s)) {
        throw std::invalid_argument("direct preparation needs the tracked state");
    }
    for (size_t q = 0; q < s; q++) {
        if ((copy.prep.conj_mask >> q) & 1u) {
            Mat z = pauli_matrix(PauliLetter::Z);
            apply_local_left(sigma, z, {q});
            apply_local_right_dagger(sigma, z, {q});
        }
    }
    return sigma;
}

// sigma on `subset` tensored with `rest` on the remaining qubits.
Mat compose_density(size_t n, const std::vector<size_t>& subset, const Mat& sigma,
                    const Mat& rest) {
    size_t dim = size_t(1) << n;
    size_t s = subset.size();
    size_t sub = size_t(1) << s;
    std::vector<size_t> others;
    for (size_t q = 0; q < n; q++) {
        if (std::find(subset.begin(), subset.end(), q) == subset.end()) others.push_back(q);
    }
    auto sub_offs = scatter_offsets(subset);
    auto rest_offs = scatter_offsets(others);
    size_t rest_dim = dim >> s;
    Mat out = Mat::Zero(Eigen::Index(dim), Eigen::Index(dim));
    for (size_t a = 0; a < sub; a++) {
        for (size_t b = 0; b < sub; b++) {
            cplx sv = sigma(Eigen::Index(a), Eigen::Index(b));
            if (sv == cplx(0, 0)) continue;
            for (size_t r = 0; r < rest_dim; r++) {
                for (size_t c = 0; c < rest_dim; c++) {
                    cplx rv = rest(Eigen::Index(r), Eigen::Index(c));
                    if (rv == cplx(0, 0)) continue;
                    out(Eigen::Index(sub_offs[a] + rest_offs[r]),
                        Eigen::Index(sub_offs[b] + rest_offs[c])) = sv * rv;
                }
            }
        }
    }
    return out;
}

// Unnormalized rest-operator of the subset-diagonal block e.
Mat subset_block(const Mat& rho, const std::vector<size_t>& subset, size_t n, size_t e) {
    std::vector<size_t> others;
    for (size_t q = 0; q < n; q++) {
        if (std::find(subset.begin(), subset.end(), q) == subset.end()) others.push_back(q);
    }
    auto sub_offs = scatter_offsets(subset);
    auto rest_offs = scatter_offsets(others);
    size_t rest_dim = size_t(1) << others.size();
    Mat out{Eigen::Index(rest_dim), Eigen::Index(rest_dim)};
    for (size_t r = 0; r < rest_dim; r++) {
        for (size_t c = 0; c < rest_dim; c++) {
            out(Eigen::Index(r), Eigen::Index(c)) =
                rho(Eigen::Index(sub_offs[e] + rest_offs[r]),
                    Eigen::Index(sub_offs[e] + rest_offs[c]));
        }
    }
    return out;
}

std::vector<double> subset_distribution(const Mat& rho, const std::vector<size_t>& subset,
                                        size_t n) {
    std::vector<size_t> others;
    for (size_t q = 0; q < n; q++) {
        if (std::find(subset.begin(), subset.end(), q) == subset.end()) others.push_back(q);
    }
    Mat reduced = partial_trace(rho, others, n);
    std::vector<double> dist(size_t(reduced.rows()));
    for (size_t e = 0; e < dist.size(); e++) {
        dist[e] = reduced(Eigen::Index(e), Eigen::Index(e)).real();
    }
    return dist;
}

// Per-subset-qubit readout confusion on an outcome distribution indexed by
// subset-order bitmasks.
std::vector<double> confuse(const std::vector<double>& dist, const CircuitCopy& copy,
                            const NoiseModel& nm) {
    size_t s = copy.subset.size();
    std::vector<double> cur = dist;
    std::vector<double> next(cur.size());
    for (size_t i = 0; i < s; i++) {
        auto r = nm.readout_for(copy.subset[i]);
        if (r[0] == 0 && r[1] == 0) continue;
        size_t bit = size_t(1) << i;
        for (size_t e = 0; e < cur.size(); e++) {
            double p0 = cur[e & ~bit];
            double p1 = cur[e | bit];
            next[e] = (e & bit) ? p0 * r[0] + p1 * (1 - r[1]) : p0 * (1 - r[0]) + p1 * r[1];
        }
        cur.swap(next);
    }
    return cur;
}

NoiseModel remapped_noise(const CircuitCopy& copy, const NoiseModel& base, size_t n) {
    if (copy.qubit_map.empty()) return base;
    return base.remapped(copy.qubit_map, n);
}

std::vector<double> walsh_to_distribution(const std::vector<double>& parities) {
    size_t dim = parities.size();
    std::vector<double> dist(dim, 0.0);
    for (size_t e = 0; e < dim; e++) {
        double p = 0;
        for (size_t mask = 0; mask < dim; mask++) {
            int sign = (std::popcount(e & mask) & 1) ? -1 : 1;
            p += sign * parities[mask];
        }
        dist[e] = p / double(dim);
    }
    return dist;
}

// ---------------------------------------------------------------------------
// Exact backend, direct density evolution.

CopyResult run_exact_direct(const CircuitCopy& copy, const CopyExecutionOptions& options) {
    size_t n = copy.payload.num_qubits;
    size_t s = copy.subset.size();
    size_t dim_s = size_t(1) << s;
    NoiseModel nm = remapped_noise(copy, options.noise, n);

    CopyResult result;
    result.subset_size = s;
    result.has_upstream = !copy.upstream_basis.empty();

    if (!result.has_upstream) {
        Mat rho = density_with_subset_state(n, copy.subset, prep_density_for(copy));
        rho = simulate_exact_from(std::move(rho), copy.payload, nm, options.exact_limit);
        if (options.injected_channel) apply_pauli_channel_density(rho, *options.injected_channel);
        rotate_density(rho, copy.measure_basis, copy.subset);
        auto dist = subset_distribution(rho, copy.subset, n);
        result.joint = confuse(dist, copy, nm);
        return result;
    }

    Mat rho = simulate_exact(copy.prefix, nm, options.exact_limit);
    rotate_density(rho, copy.upstream_basis, copy.subset);
    Mat sigma = prep_density_for(copy);
    result.joint.assign(dim_s * dim_s, 0.0);
    std::vector<std::vector<double>> rows(dim_s);
    for (size_t e = 0; e < dim_s; e++) {
        Mat rest = subset_block(rho, copy.subset, n, e);
        double pe = rest.trace().real();
        if (pe <= 1e-15) {
            rows[e].assign(dim_s, 0.0);
            continue;
        }
        Mat branch = compose_density(n, copy.subset, sigma, rest);
        branch = simulate_exact_from(std::move(branch), copy.payload, nm, options.exact_limit);
        if (options.injected_channel) {
            apply_pauli_channel_density(branch, *options.injected_channel);
        }
        rotate_density(branch, copy.measure_basis, copy.subset);
        rows[e] = subset_distribution(branch, copy.subset, n);
        rows[e] = confuse(rows[e], copy, nm);
    }
    // Upstream readout confusion mixes the recorded rows.
    for (size_t e_rec = 0; e_rec < dim_s; e_rec++) {
        for (size_t e_true = 0; e_true < dim_s; e_true++) {
            double w = 1.0;
            for (size_t i = 0; i < s; i++) {
                auto r = nm.readout_for(copy.subset[i]);
                int bt = int((e_true >> i) & 1u);
                int br = int((e_rec >> i) & 1u);
                double flip = bt ? r[1] : r[0];
                w *= (bt == br) ? (1 - flip) : flip;
            }
            if (w == 0) continue;
            for (size_t e_out = 0; e_out < dim_s; e_out++) {
                result.joint[e_rec * dim_s + e_out] += w * rows[e_true][e_out];
            }
        }
    }
    return result;
}

// ---------------------------------------------------------------------------
// Exact backend, Heisenberg fast path. Copies sharing circuits reuse the
// pulled-back parity observables; preparations reduce to 2^s x 2^s
// contractions.

struct HeisenbergCache {
    // key: payload identity | basis letters | parity mask
    std::map<std::string, Mat> pulled;  // contracted to the subset when tracked
    std::map<std::string, Mat> prefix_states;
    std::map<std::string, std::string> circuit_keys;
    size_t next_circuit_id = 0;

    std::string circuit_key(const Circuit& c) {
        std::string dump = c.to_json().dump();
        auto it = circuit_keys.find(dump);
        if (it != circuit_keys.end()) return it->second;
        std::string id = std::to_string(next_circuit_id++);
        circuit_keys[dump] = id;
        return id;
    }
};

// Pulls the parity observable of `mask` (after basis rotation) backward
// through the payload and optional injected channel.
Mat pulled_observable(const CircuitCopy& copy, const NoiseModel& nm,
                      const CopyExecutionOptions& options, size_t mask) {
    size_t n = copy.payload.num_qubits;
    PauliString parity(n);
    for (size_t i = 0; i < copy.subset.size(); i++) {
        if ((mask >> i) & 1u) parity.set_letter(copy.subset[i], PauliLetter::Z);
    }
    Mat a = parity.matrix_embedded(n);
    // Backward order: rotation adjoint, then channel adjoint, then payload.
    for (size_t i = copy.subset.size(); i-- > 0;) {
        auto gates = basis_rotation_gates(copy.measure_basis[i], copy.subset[i]);
        for (size_t k = gates.size(); k-- > 0;) {
            Mat u = gate_unitary(gates[k]);
            Mat ud = u.adjoint();
            apply_local_left(a, ud, gates[k].qubits);
            apply_local_right_dagger(a, ud, gates[k].qubits);
        }
    }
    if (options.injected_channel) apply_pauli_channel_density(a, *options.injected_channel);
    return heisenberg_observable(copy.payload, nm, std::move(a), options.exact_limit);
}

// tr((sigma (x) rest) A) as a subset-local matrix acting on sigma:
// out(a', a) = sum_{r,r'} rest(r, r') A((a', r'), (a, r)).
Mat contract_rest(const Mat& a, const Mat& rest, const std::vector<size_t>& subset, size_t n) {
    std::vector<size_t> others;
    for (size_t q = 0; q < n; q++) {
        if (std::find(subset.begin(), subset.end(), q) == subset.end()) others.push_back(q);
    }
    auto sub_offs = scatter_offsets(subset);
    auto rest_offs = scatter_offsets(others);
    size_t sub = size_t(1) << subset.size();
    size_t rest_dim = size_t(1) << others.size();
    Mat out = Mat::Zero(Eigen::Index(sub), Eigen::Index(sub));
    for (size_t ap = 0; ap < sub; ap++) {
        for (size_t av = 0; av < sub; av++) {
            cplx acc = 0;
            for (size_t r = 0; r < rest_dim; r++) {
                for (size_t rp = 0; rp < rest_dim; rp++) {
                    cplx rv = rest(Eigen::Index(r), Eigen::Index(rp));
                    if (rv == cplx(0, 0)) continue;
                    acc += rv * a(Eigen::Index(sub_offs[ap] + rest_offs[rp]),
                                  Eigen::Index(sub_offs[av] + rest_offs[r]));
                }
            }
            out(Eigen::Index(ap), Eigen::Index(av)) = acc;
        }
    }
    return out;
}

CopyResult run_exact_heisenberg(const CircuitCopy& copy, const CopyExecutionOptions& options,
                                HeisenbergCache& cache) {
    size_t n = copy.payload.num_qubits;
    size_t s = copy.subset.size();
    size_t dim_s = size_t(1) << s;
    NoiseModel nm = remapped_noise(copy, options.noise, n);

    CopyResult result;
    result.subset_size = s;
    result.has_upstream = !copy.upstream_basis.empty();

    std::string payload_key = cache.circuit_key(copy.payload) + "|" +
                              letters_key(copy.measure_basis) + "|map:";
    for (size_t q : copy.qubit_map) payload_key += std::to_string(q) + ",";

    auto pulled_for_mask = [&](size_t mask) -> const Mat& {
        std::string key = payload_key + "|" + std::to_string(mask);
        auto it = cache.pulled.find(key);
        if (it == cache.pulled.end()) {
            it = cache.pulled.emplace(key, pulled_observable(copy, nm, options, mask)).first;
        }
        return it->second;
    };

    if (!result.has_upstream) {
        Mat sigma = prep_density_for(copy);
        Mat rest0 = Mat::Zero(Eigen::Index(size_t(1) << (n - s)), Eigen::Index(size_t(1) << (n - s)));
        rest0(0, 0) = 1.0;
        std::vector<double> parities(dim_s, 1.0);
        for (size_t mask = 1; mask < dim_s; mask++) {
            Mat local = contract_rest(pulled_for_mask(mask), rest0, copy.subset, n);
            parities[mask] = (sigma * local).trace().real();
        }
        auto dist = walsh_to_distribution(parities);
        result.joint = confuse(dist, copy, nm);
        return result;
    }

    std::string prefix_key = cache.circuit_key(copy.prefix) + "|" +
                             letters_key(copy.upstream_basis) + "|map:";
    for (size_t q : copy.qubit_map) prefix_key += std::to_string(q) + ",";
    auto pit = cache.prefix_states.find(prefix_key);
    if (pit == cache.prefix_states.end()) {
        Mat rho = simulate_exact(copy.prefix, nm, options.exact_limit);
        rotate_density(rho, copy.upstream_basis, copy.subset);
        pit = cache.prefix_states.emplace(prefix_key, std::move(rho)).first;
    }
    const Mat& rho_pre = pit->second;

    Mat sigma = prep_density_for(copy);
    result.joint.assign(dim_s * dim_s, 0.0);
    std::vector<std::vector<double>> rows(dim_s);
    for (size_t e = 0; e < dim_s; e++) {
        Mat rest = subset_block(rho_pre, copy.subset, n, e);
        double pe = rest.trace().real();
        if (pe <= 1e-15) {
            rows[e].assign(dim_s, 0.0);
            continue;
        }
        std::vector<double> parities(dim_s, pe);
        for (size_t mask = 1; mask < dim_s; mask++) {
            Mat local = contract_rest(pulled_for_mask(mask), rest, copy.subset, n);
            parities[mask] = (sigma * local).trace().real();
        }
        rows[e] = walsh_to_distribution(parities);
        rows[e] = confuse(rows[e], copy, nm);
    }
    size_t sbits = s;
    for (size_t e_rec = 0; e_rec < dim_s; e_rec++) {
        for (size_t e_true = 0; e_true < dim_s; e_true++) {
            double w = 1.0;
            for (size_t i = 0; i < sbits; i++) {
                auto r = nm.readout_for(copy.subset[i]);
                int bt = int((e_true >> i) & 1u);
                int br = int((e_rec >> i) & 1u);
                double flip = bt ? r[1] : r[0];
                w *= (bt == br) ? (1 - flip) : flip;
            }
            if (w == 0) continue;
            for (size_t e_out = 0; e_out < dim_s; e_out++) {
                result.joint[e_rec * dim_s + e_out] += w * rows[e_true][e_out];
            }
        }
    }
    return result;
}

// ---------------------------------------------------------------------------
// Sampled backend: statevector trajectories per copy.

struct PrepSampler {
    // Mixture of pure states with probabilities (eigendecomposition).
    std::vector<Vec> states;
    std::vector<double> cumulative;

    explicit PrepSampler(const Mat& sigma) {
        Eigen::SelfAdjointEigenSolver<Mat> es(sigma);
        double acc = 0;
        for (Eigen::Index k = 0; k < es.eigenvalues().size(); k++) {
            double lam = std::max(0.0, es.eigenvalues()(k));
            if (lam < 1e-12) continue;
            states.push_back(es.eigenvectors().col(k));
            acc += lam;
            cumulative.push_back(acc);
        }
        if (states.empty()) throw std::runtime_error("preparation state has no mass");
        for (auto& c : cumulative) c /= acc;
    }

    const Vec& draw(double u) const {
        auto it = std::lower_bound(cumulative.begin(), cumulative.end(), u);
        if (it == cumulative.end()) --it;
        return states[size_t(it - cumulative.begin())];
    }
};

void set_subset_state(Vec& psi, const std::vector<size_t>& subset, size_t collapsed,
                      const Vec& prep) {
    // After a projective collapse the subset factor is |collapsed>; rotate it
    // into the prepared pure state.
    size_t s = subset.size();
    for (size_t i = 0; i < s; i++) {
        if ((collapsed >> i) & 1u) {
            apply_local_state(psi, pauli_matrix(PauliLetter::X), {subset[i]});
        }
    }
    // prep is a 2^s vector; build the unitary sending |0..0> to it via a
    // Householder-style completion.
    size_t dim = size_t(1) << s;
    Mat u = Mat::Identity(Eigen::Index(dim), Eigen::Index(dim));
    u.col(0) = prep;
    // Gram-Schmidt the remaining columns.
    for (Eigen::Index c = 1; c < u.cols(); c++) {
        for (Eigen::Index prev = 0; prev < c; prev++) {
            u.col(c) -= u.col(prev).dot(u.col(c)) * u.col(prev);
        }
        double nrm = u.col(c).norm();
        if (nrm < 1e-9) {
            // Degenerate direction; pick another basis vector.
            u.col(c).setZero();
            u(Eigen::Index((size_t(c) + 1) % dim), c) = 1.0;
            for (Eigen::Index prev = 0; prev < c; prev++) {
                u.col(c) -= u.col(prev).dot(u.col(c)) * u.col(prev);
            }
            nrm = u.col(c).norm();
        }
        u.col(c) /= nrm;
    }
    apply_local_state(psi, u, subset);
}

CopyResult run_sampled(const CircuitCopy& copy, const CopyExecutionOptions& options,
                       std::mt19937_64& rng) {
    size_t n = copy.payload.num_qubits;
    size_t s = copy.subset.size();
    size_t dim_s = size_t(1) << s;
    NoiseModel nm = remapped_noise(copy, options.noise, n);
    std::uniform_real_distribution<double> unif(0.0, 1.0);

    CopyResult result;
    result.subset_size = s;
    result.has_upstream = !copy.upstream_basis.empty();
    result.joint.assign(result.has_upstream ? dim_s * dim_s : dim_s, 0.0);

    PrepSampler prep_sampler(prep_density_for(copy));
    uint64_t shots = options.shots_per_copy > 0 ? options.shots_per_copy : 1000;

    auto traject = [&](Vec& psi, const Circuit& c) {
        for (const auto& g : c.ops) {
            apply_local_state(psi, gate_unitary(g), g.qubits);
            double p = nm.gate_error(g);
            size_t k = g.qubits.size();
            double frac = double((size_t(1) << (2 * k)) - 1) / double(size_t(1) << (2 * k));
            if (p > 0 && unif(rng) < p * frac) {
                size_t count = (size_t(1) << (2 * k)) - 1;
                std::uniform_int_distribution<size_t> pick(1, count);
                size_t code = pick(rng);
                for (size_t i = 0; i < k; i++) {
                    PauliLetter l = PauliLetter((code >> (2 * i)) & 3u);
                    if (l != PauliLetter::I) {
                        apply_local_state(psi, pauli_matrix(l), {g.qubits[i]});
                    }
                }
            }
        }
    };

    auto inject = [&](Vec& psi) {
        if (!options.injected_channel) return;
        double u = unif(rng);
        double acc = 0;
        for (const auto& [p, prob] : options.injected_channel->terms) {
            acc += prob;
            if (u < acc) {
                auto supp = p.support();
                if (!supp.empty()) apply_local_state(psi, p.local_matrix(supp), supp);
                return;
            }
        }
    };

    auto measure_subset = [&](Vec& psi, bool collapse) -> size_t {
        // Subset outcome probabilities.
        std::vector<double> probs(dim_s, 0.0);
        auto offs = scatter_offsets(copy.subset);
        size_t mask = support_mask(copy.subset);
        for (size_t x = 0; x < (size_t(1) << n); x++) {
            size_t e = 0;
            for (size_t i = 0; i < s; i++) e |= ((x >> copy.subset[i]) & 1u) << i;
            probs[e] += std::norm(psi(Eigen::Index(x)));
        }
        double u = unif(rng);
        double acc = 0;
        size_t outcome = dim_s - 1;
        for (size_t e = 0; e < dim_s; e++) {
            acc += probs[e];
            if (u < acc) {
                outcome = e;
                break;
            }
        }
        if (collapse) {
            double norm = std::sqrt(std::max(probs[outcome], 1e-300));
            for (size_t x = 0; x < (size_t(1) << n); x++) {
                size_t e = 0;
                for (size_t i = 0; i < s; i++) e |= ((x >> copy.subset[i]) & 1u) << i;
                if (e != outcome) {
                    psi(Eigen::Index(x)) = 0;
                } else {
                    psi(Eigen::Index(x)) /= norm;
                }
            }
        }
        (void)mask;
        (void)offs;
        return outcome;
    };

    auto flip_bits = [&](size_t e) {
        size_t out = 0;
        for (size_t i = 0; i < s; i++) {
            int bit = int((e >> i) & 1u);
            auto r = nm.readout_for(copy.subset[i]);
            double flip = bit ? r[1] : r[0];
            if (flip > 0 && unif(rng) < flip) bit ^= 1;
            out |= size_t(bit) << i;
        }
        return out;
    };

    for (uint64_t shot = 0; shot < shots; shot++) {
        Vec psi = zero_state(n);
        size_t e_in = 0;
        if (result.has_upstream) {
            traject(psi, copy.prefix);
            rotate_state(psi, copy.upstream_basis, copy.subset);
            size_t collapsed = measure_subset(psi, true);
            e_in = flip_bits(collapsed);
            const Vec& prep = prep_sampler.draw(unif(rng));
            set_subset_state(psi, copy.subset, collapsed, prep);
        } else {
            const Vec& prep = prep_sampler.draw(unif(rng));
            set_subset_state(psi, copy.subset, 0, prep);
        }
        traject(psi, copy.payload);
        inject(psi);
        rotate_state(psi, copy.measure_basis, copy.subset);
        size_t e_out = flip_bits(measure_subset(psi, false));
        if (result.has_upstream) {
            result.joint[e_in * dim_s + e_out] += 1.0;
        } else {
            result.joint[e_out] += 1.0;
        }
    }
    for (auto& v : result.joint) v /= double(shots);
    return result;
}

}  // namespace

std::vector<CopyResult> execute_copies(const std::vector<CircuitCopy>& copies,
                                       const CopyExecutionOptions& options) {
    std::vector<CopyResult> results;
    results.reserve(copies.size());
    if (options.sampled) {
        std::mt19937_64 rng(options.seed);
        for (const auto& copy : copies) results.push_back(run_sampled(copy, options, rng));
        return results;
    }
    if (options.use_heisenberg) {
        HeisenbergCache cache;
        for (const auto& copy : copies) {
            results.push_back(run_exact_heisenberg(copy, options, cache));
        }
        return results;
    }
    for (const auto& copy : copies) results.push_back(run_exact_direct(copy, options));
    return results;
}

}  // namespace qutrace

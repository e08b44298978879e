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

#include "qutrace/sampler.hpp"

#include <cmath>
#include <memory>
#include <random>
#include <stdexcept>

#include "qutrace/exact.hpp"

namespace qutrace {

namespace {

// Cumulative distribution over basis states for O(log) outcome draws.
struct CumulativeSampler {
    std::vector<double> cdf;

    explicit CumulativeSampler(const Vec& psi) {
        cdf.resize(size_t(psi.size()));
        double acc = 0;
        for (size_t x = 0; x < cdf.size(); x++) {
            acc += std::norm(psi(Eigen::Index(x)));
            cdf[x] = acc;
        }
    }

    size_t draw(double u) const {
        double target = u * cdf.back();
        auto it = std::lower_bound(cdf.begin(), cdf.end(), target);
        if (it == cdf.end()) --it;
        return size_t(it - cdf.begin());
    }
};

void insert_random_pauli(Vec& psi, const std::vector<size_t>& support, std::mt19937_64& rng) {
    size_t k = support.size();
    size_t count = (size_t(1) << (2 * k)) - 1;  // non-identity Paulis
    std::uniform_int_distribution<size_t> pick(1, count);
    size_t code = pick(rng);
    for (size_t i = 0; i < k; i++) {
        PauliLetter l = PauliLetter((code >> (2 * i)) & 3u);
        if (l != PauliLetter::I) {
            apply_local_state(psi, pauli_matrix(l), {support[i]});
        }
    }
}

void quantum_jump_thermal(Vec& psi, const Gate& g, const ThermalParams& t,
                          std::mt19937_64& rng) {
    double duration = g.is_two_qubit() ? t.time_2q : t.time_1q;
    if (duration <= 0 || t.t1 <= 0) return;
    double gamma = 1.0 - std::exp(-duration / t.t1);
    double tphi_inv = (t.t2 > 0) ? std::max(0.0, 1.0 / t.t2 - 0.5 / t.t1) : 0.0;
    double lambda = 1.0 - std::exp(-2.0 * duration * tphi_inv);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    for (size_t q : g.qubits) {
        // Amplitude damping as a two-branch generalized measurement.
        double p_one = 0;
        for (Eigen::Index x = 0; x < psi.size(); x++) {
            if ((size_t(x) >> q) & 1u) p_one += std::norm(psi(x));
        }
        double p_jump = gamma * p_one;
        Mat k(2, 2);
        if (unif(rng) < p_jump) {
            k << 0, 1, 0, 0;  // normalized jump
        } else {
            k << 1, 0, 0, std::sqrt(1.0 - gamma);
        }
        apply_local_state(psi, k, {q});
        psi.normalize();
        if (lambda > 0 && unif(rng) < lambda / 2.0) {
            // Dephasing unraveled as a probabilistic Z kick.
            apply_local_state(psi, pauli_matrix(PauliLetter::Z), {q});
        }
    }
}

}  // namespace

Counts sample(const Circuit& c, const NoiseModel& nm, uint64_t shots, uint64_t seed) {
    if (shots == 0) throw std::invalid_argument("shots must be positive");
    if (c.num_qubits > 24) throw std::invalid_argument("sampler limited to 24 qubits");
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unif(0.0, 1.0);

    std::vector<size_t> measured(c.measured.begin(), c.measured.end());
    if (measured.empty()) {
        measured.resize(c.num_qubits);
        for (size_t q = 0; q < c.num_qubits; q++) measured[q] = q;
    }

    // Effective per-gate probability that a non-identity Pauli is inserted.
    std::vector<double> p_eff(c.ops.size(), 0.0);
    bool any_thermal = nm.thermal.has_value();
    for (size_t i = 0; i < c.ops.size(); i++) {
        double p = nm.gate_error(c.ops[i]);
        size_t k = c.ops[i].qubits.size();
        double frac = double((size_t(1) << (2 * k)) - 1) / double(size_t(1) << (2 * k));
        p_eff[i] = p * frac;
    }

    // Shots without any insertion reuse the noiseless output distribution.
    std::unique_ptr<CumulativeSampler> clean;
    auto clean_sampler = [&]() -> CumulativeSampler& {
        if (!clean) clean = std::make_unique<CumulativeSampler>(simulate_ideal_state(c));
        return *clean;
    };

    Counts out;
    out.shots = shots;
    std::vector<size_t> errored;
    for (uint64_t shot = 0; shot < shots; shot++) {
        errored.clear();
        for (size_t i = 0; i < c.ops.size(); i++) {
            if (p_eff[i] > 0 && unif(rng) < p_eff[i]) errored.push_back(i);
        }
        size_t outcome;
        if (errored.empty() && !any_thermal) {
            outcome = clean_sampler().draw(unif(rng));
        } else {
            Vec psi = zero_state(c.num_qubits);
            size_t next_err = 0;
            for (size_t i = 0; i < c.ops.size(); i++) {
                apply_local_state(psi, gate_unitary(c.ops[i]), c.ops[i].qubits);
                if (next_err < errored.size() && errored[next_err] == i) {
                    insert_random_pauli(psi, c.ops[i].qubits, rng);
                    next_err++;
                }
                if (any_thermal) quantum_jump_thermal(psi, c.ops[i], *nm.thermal, rng);
            }
            outcome = CumulativeSampler(psi).draw(unif(rng));
        }
        // Classical readout flips, then restrict to the measured set.
        std::string key(measured.size(), '0');
        for (size_t i = 0; i < measured.size(); i++) {
            size_t q = measured[i];
            int bit = int((outcome >> q) & 1u);
            auto r = nm.readout_for(q);
            double flip = bit ? r[1] : r[0];
            if (flip > 0 && unif(rng) < flip) bit ^= 1;
            key[measured.size() - 1 - i] = char('0' + bit);
        }
        out.counts[key]++;
    }
    return out;
}

}  // namespace qutrace

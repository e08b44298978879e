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

#include "qutrace/exact.hpp"

#include <cmath>
#include <stdexcept>

namespace qutrace {

Mat zero_density(size_t n) {
    size_t dim = size_t(1) << n;
    Mat rho = Mat::Zero(Eigen::Index(dim), Eigen::Index(dim));
    rho(0, 0) = 1.0;
    return rho;
}

Vec zero_state(size_t n) {
    size_t dim = size_t(1) << n;
    Vec v = Vec::Zero(Eigen::Index(dim));
    v(0) = 1.0;
    return v;
}

Mat density_with_subset_state(size_t n, const std::vector<size_t>& subset, const Mat& sigma) {
    size_t dim = size_t(1) << n;
    size_t sub = size_t(1) << subset.size();
    if (Eigen::Index(sub) != sigma.rows() || sigma.rows() != sigma.cols()) {
        throw std::invalid_argument("subset state dimension mismatch");
    }
    auto offs = scatter_offsets(subset);
    Mat rho = Mat::Zero(Eigen::Index(dim), Eigen::Index(dim));
    for (size_t a = 0; a < sub; a++) {
        for (size_t b = 0; b < sub; b++) {
            rho(Eigen::Index(offs[a]), Eigen::Index(offs[b])) = sigma(Eigen::Index(a), Eigen::Index(b));
        }
    }
    return rho;
}

void apply_gate_density(Mat& rho, const Gate& g) {
    Mat u = gate_unitary(g);
    apply_local_left(rho, u, g.qubits);
    apply_local_right_dagger(rho, u, g.qubits);
}

void apply_depolarizing_density(Mat& rho, const std::vector<size_t>& support, double p) {
    if (p == 0.0) return;
    size_t dim = size_t(rho.rows());
    size_t k = support.size();
    size_t sub = size_t(1) << k;
    size_t mask = support_mask(support);
    auto offs = scatter_offsets(support);
    // T = tr_S(rho) indexed by base patterns (support bits zero).
    // rho <- (1-p) rho + p/2^k * delta_{ab} T.
    std::vector<std::pair<size_t, size_t>> bases;
    size_t base = 0;
    while (true) {
        bases.emplace_back(base, 0);
        base = ((base | mask) + 1) & ~mask;
        if (base == 0 || base >= dim) break;
    }
    Mat t = Mat::Zero(Eigen::Index(bases.size()), Eigen::Index(bases.size()));
    for (size_t i = 0; i < bases.size(); i++) {
        for (size_t j = 0; j < bases.size(); j++) {
            cplx acc = 0;
            for (size_t a = 0; a < sub; a++) {
                acc += rho(Eigen::Index(bases[i].first + offs[a]),
                           Eigen::Index(bases[j].first + offs[a]));
            }
            t(Eigen::Index(i), Eigen::Index(j)) = acc;
        }
    }
    rho *= (1.0 - p);
    double scale = p / double(sub);
    for (size_t i = 0; i < bases.size(); i++) {
        for (size_t j = 0; j < bases.size(); j++) {
            cplx add = scale * t(Eigen::Index(i), Eigen::Index(j));
            for (size_t a = 0; a < sub; a++) {
                rho(Eigen::Index(bases[i].first + offs[a]),
                    Eigen::Index(bases[j].first + offs[a])) += add;
            }
        }
    }
}

void apply_kraus_density(Mat& rho, const std::vector<size_t>& support,
                         const std::vector<Mat>& kraus) {
    Mat acc = Mat::Zero(rho.rows(), rho.cols());
    for (const auto& k : kraus) {
        Mat term = rho;
        apply_local_left(term, k, support);
        apply_local_right_dagger(term, k, support);
        acc += term;
    }
    rho = acc;
}

void apply_thermal_density(Mat& rho, const Gate& g, const ThermalParams& t) {
    double duration = g.is_two_qubit() ? t.time_2q : t.time_1q;
    if (duration <= 0 || t.t1 <= 0) return;
    double gamma = 1.0 - std::exp(-duration / t.t1);
    // Pure dephasing rate beyond the T1 contribution.
    double tphi_inv = (t.t2 > 0) ? std::max(0.0, 1.0 / t.t2 - 0.5 / t.t1) : 0.0;
    double lambda = 1.0 - std::exp(-2.0 * duration * tphi_inv);
    Mat a0(2, 2), a1(2, 2);
    a0 << 1, 0, 0, std::sqrt(1.0 - gamma);
    a1 << 0, std::sqrt(gamma), 0, 0;
    Mat d0(2, 2), d1(2, 2);
    d0 << 1, 0, 0, std::sqrt(1.0 - lambda);
    d1 << 0, 0, 0, std::sqrt(lambda);
    for (size_t q : g.qubits) {
        apply_kraus_density(rho, {q}, {a0, a1});
        if (lambda > 0) apply_kraus_density(rho, {q}, {d0, d1});
    }
}

bool PauliChannel::is_identity() const {
    for (const auto& [p, prob] : terms) {
        if (prob > 0 && !p.is_identity_letters()) return false;
    }
    return true;
}

PauliChannel PauliChannel::identity(size_t n) {
    PauliChannel ch;
    ch.terms.emplace_back(PauliString(n), 1.0);
    return ch;
}

PauliChannel PauliChannel::single_pauli(size_t n, size_t q, PauliLetter p, double prob) {
    validate_probability(prob, "channel probability");
    PauliChannel ch;
    ch.terms.emplace_back(PauliString(n), 1.0 - prob);
    ch.terms.emplace_back(PauliString::single(n, q, p), prob);
    return ch;
}

PauliChannel PauliChannel::depolarizing(size_t n, size_t q, double prob) {
    validate_probability(prob, "channel probability");
    PauliChannel ch;
    ch.terms.emplace_back(PauliString(n), 1.0 - 0.75 * prob);
    ch.terms.emplace_back(PauliString::single(n, q, PauliLetter::X), prob / 4);
    ch.terms.emplace_back(PauliString::single(n, q, PauliLetter::Y), prob / 4);
    ch.terms.emplace_back(PauliString::single(n, q, PauliLetter::Z), prob / 4);
    return ch;
}

void apply_pauli_channel_density(Mat& rho, const PauliChannel& ch) {
    Mat acc = Mat::Zero(rho.rows(), rho.cols());
    for (const auto& [p, prob] : ch.terms) {
        if (prob == 0.0) continue;
        Mat term = rho;
        auto supp = p.support();
        if (!supp.empty()) {
            Mat local = p.local_matrix(supp);
            apply_local_left(term, local, supp);
            apply_local_right_dagger(term, local, supp);
        }
        acc += prob * term;
    }
    rho = acc;
}

Mat simulate_exact(const Circuit& c, const NoiseModel& nm, size_t limit) {
    if (c.num_qubits > limit) {
        throw std::invalid_argument("register too large for the exact backend; use the sampler");
    }
    return simulate_exact_from(zero_density(c.num_qubits), c, nm, limit);
}

Mat simulate_exact_from(Mat rho0, const Circuit& c, const NoiseModel& nm, size_t limit) {
    if (c.num_qubits > limit) {
        throw std::invalid_argument("register too large for the exact backend; use the sampler");
    }
    for (const auto& g : c.ops) {
        apply_gate_density(rho0, g);
        apply_depolarizing_density(rho0, g.qubits, nm.gate_error(g));
        if (nm.thermal) apply_thermal_density(rho0, g, *nm.thermal);
    }
    return rho0;
}

Vec simulate_ideal_state(const Circuit& c, size_t limit) {
    if (c.num_qubits > limit) throw std::invalid_argument("register too large for statevector");
    Vec v = zero_state(c.num_qubits);
    for (const auto& g : c.ops) {
        apply_local_state(v, gate_unitary(g), g.qubits);
    }
    return v;
}

Distribution distribution_from_density(const Mat& rho, size_t n) {
    Distribution d;
    size_t dim = size_t(1) << n;
    for (size_t x = 0; x < dim; x++) {
        double p = rho(Eigen::Index(x), Eigen::Index(x)).real();
        if (p > 0) d[bitstring_of_index(x, n)] = p;
    }
    return d;
}

Distribution distribution_from_state(const Vec& psi, size_t n) {
    Distribution d;
    size_t dim = size_t(1) << n;
    for (size_t x = 0; x < dim; x++) {
        double p = std::norm(psi(Eigen::Index(x)));
        if (p > 0) d[bitstring_of_index(x, n)] = p;
    }
    return d;
}

Distribution ideal_distribution(const Circuit& c) {
    Vec psi = simulate_ideal_state(c);
    Distribution full = distribution_from_state(psi, c.num_qubits);
    if (c.measured.empty() || c.measured.size() == c.num_qubits) return full;
    std::vector<size_t> subset(c.measured.begin(), c.measured.end());
    return marginal(full, subset);
}

double expectation_density(const Mat& rho, const PauliString& obs) {
    size_t dim = size_t(rho.rows());
    size_t n = 0;
    while ((size_t(1) << n) < dim) n++;
    size_t flip = 0;
    for (size_t q = 0; q < obs.size(); q++) {
        if (obs.letter(q) == PauliLetter::X || obs.letter(q) == PauliLetter::Y) {
            flip |= size_t(1) << q;
        }
    }
    cplx acc = 0;
    for (size_t r = 0; r < dim; r++) {
        size_t cidx = r ^ flip;
        // P(cidx, r) entry: product of per-letter factors.
        cplx val = obs.phase();
        for (size_t q = 0; q < obs.size() && q < n; q++) {
            size_t rbit = (r >> q) & 1u;
            switch (obs.letter(q)) {
                case PauliLetter::I: break;
                case PauliLetter::X: break;
                case PauliLetter::Y: val *= rbit ? cplx(0, -1) : cplx(0, 1); break;
                case PauliLetter::Z:
                    if (rbit) val = -val;
                    break;
            }
        }
        acc += rho(Eigen::Index(r), Eigen::Index(cidx)) * val;
    }
    double imag = std::abs(acc.imag());
    if (imag > 1e-8) {
        throw std::runtime_error("expectation has a non-real residue beyond tolerance");
    }
    return acc.real();
}

Mat heisenberg_observable(const Circuit& c, const NoiseModel& nm, Mat obs, size_t limit) {
    if (c.num_qubits > limit) {
        throw std::invalid_argument("register too large for the exact backend; use the sampler");
    }
    if (nm.thermal) {
        throw std::invalid_argument("heisenberg evolution does not support thermal channels");
    }
    for (size_t i = c.ops.size(); i-- > 0;) {
        const Gate& g = c.ops[i];
        double p = nm.gate_error(g);
        if (p > 0) {
            // The depolarizing channel is self-adjoint.
            apply_depolarizing_density(obs, g.qubits, p);
        }
        Mat u = gate_unitary(g);
        Mat ud = u.adjoint();
        apply_local_left(obs, ud, g.qubits);
        apply_local_right_dagger(obs, ud, g.qubits);
    }
    return obs;
}

}  // namespace qutrace

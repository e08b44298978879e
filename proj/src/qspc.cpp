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

#include "qutrace/qspc.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <bit>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace qutrace {

namespace {

constexpr double kWeightEps = 1e-12;

PauliString restrict_to_subset(const PauliString& p, const std::vector<size_t>& subset) {
    std::vector<PauliLetter> letters(subset.size(), PauliLetter::I);
    for (size_t q = 0; q < p.size(); q++) {
        if (p.letter(q) == PauliLetter::I) continue;
        bool found = false;
        for (size_t i = 0; i < subset.size(); i++) {
            if (subset[i] == q) {
                letters[i] = p.letter(q);
                found = true;
            }
        }
        if (!found) throw std::invalid_argument("check acts outside its subset");
    }
    return PauliString(letters, p.phase_power());
}

// Subset-local (left, right) check pairs: the identity plus the group
// generated by the pair. Canonical size-2 checks apply both per-qubit Z
// pairs simultaneously.
std::vector<std::pair<PauliString, PauliString>> check_group(const CheckPair& check) {
    size_t s = check.subset.size();
    std::vector<std::pair<PauliString, PauliString>> g;
    g.emplace_back(PauliString(s), PauliString(s));
    if (check.is_canonical_z() && s == 2) {
        g.emplace_back(PauliString::parse("ZI"), PauliString::parse("ZI"));
        g.emplace_back(PauliString::parse("IZ"), PauliString::parse("IZ"));
        g.emplace_back(PauliString::parse("ZZ"), PauliString::parse("ZZ"));
    } else {
        g.emplace_back(restrict_to_subset(check.c_left, check.subset),
                       restrict_to_subset(check.c_right, check.subset));
    }
    return g;
}

std::string group_tag(size_t i, size_t j, size_t group_size) {
    if (group_size <= 2) {
        if (i == 0 && j == 0) return "T5";
        if (i == 1 && j == 0) return "T6";
        if (i == 0 && j == 1) return "T7";
        return "T8";
    }
    std::ostringstream ss;
    ss << "T(" << i << "," << j << ")";
    return ss.str();
}

std::vector<std::string> collect_targets(const BasisSet& bases) {
    std::vector<std::string> out;
    for (const auto& basis : bases) {
        size_t s = basis.size();
        for (size_t mask = 1; mask < (size_t(1) << s); mask++) {
            std::vector<PauliLetter> letters(s, PauliLetter::I);
            for (size_t q = 0; q < s; q++) {
                if ((mask >> q) & 1u) letters[q] = basis[q];
            }
            std::string key = letters_key(letters);
            if (std::find(out.begin(), out.end(), key) == out.end()) out.push_back(key);
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<PauliLetter> letters_from_key(const std::string& key) {
    std::vector<PauliLetter> out;
    for (char c : key) out.push_back(letter_from_char(c));
    return out;
}

// Downstream basis letters for a Hermitian observable: the letter itself,
// with identity qubits parked in Z for copy reuse.
std::vector<PauliLetter> basis_for(const PauliString& h) {
    std::vector<PauliLetter> out(h.size(), PauliLetter::Z);
    for (size_t q = 0; q < h.size(); q++) {
        if (h.letter(q) != PauliLetter::I) out[q] = h.letter(q);
    }
    return out;
}

size_t mask_of(const PauliString& h) {
    size_t m = 0;
    for (size_t q = 0; q < h.size(); q++) {
        if (h.letter(q) != PauliLetter::I) m |= size_t(1) << q;
    }
    return m;
}

struct Builder {
    CopyEnsemble ensemble;
    std::map<std::string, size_t> index;

    size_t copy_for(CircuitCopy proto) {
        std::string key = proto.execution_key();
        auto it = index.find(key);
        if (it != index.end()) return it->second;
        ensemble.copies.push_back(std::move(proto));
        index[key] = ensemble.copies.size() - 1;
        return ensemble.copies.size() - 1;
    }

    void add(size_t copy_idx, TermContribution contrib) {
        auto& list = ensemble.copies[copy_idx].contributions;
        for (auto& existing : list) {
            if (existing.target == contrib.target && existing.obs_mask == contrib.obs_mask &&
                existing.upstream_mask == contrib.upstream_mask &&
                existing.doubled_real == contrib.doubled_real &&
                existing.denominator == contrib.denominator &&
                existing.term_tag == contrib.term_tag) {
                existing.coeff += contrib.coeff;
                return;
            }
        }
        list.push_back(std::move(contrib));
    }
};

// Shared term expansion over the check group. `measured` selects the
// wire-cut form (upstream Pauli-basis decomposition); the tracked form takes
// rho_in as classical data.
void expand_terms(Builder& builder, const CheckPair& check, const Circuit& prefix,
                  const Circuit& segment, const Mat& rho_in, const BasisSet& bases_needed,
                  bool measured, bool checked, bool full_grid) {
    size_t s = check.subset.size();
    if (s < 1 || s > 2) throw std::invalid_argument("subset size must be 1 or 2");
    auto g = check_group(check);
    if (!checked) g.resize(1);
    builder.ensemble.group_size = g.size();
    auto targets = collect_targets(bases_needed);
    builder.ensemble.targets = targets;

    std::vector<std::string> work = targets;
    work.emplace_back("");  // denominator

    auto proto_copy = [&](const std::vector<PauliLetter>& upstream, const PrepSpec& prep,
                          const std::vector<PauliLetter>& basis) {
        CircuitCopy c;
        c.prefix = prefix;
        c.payload = segment;
        c.subset = check.subset;
        c.upstream_basis = upstream;
        c.prep = prep;
        c.tracked_state = rho_in;
        c.measure_basis = basis;
        return c;
    };

    if (full_grid) {
        // The standard-cutting grid: every (upstream basis, prep, downstream
        // basis) combination exists, so the count is exactly 3^m * 4^n.
        for (const auto& up : all_bases(s)) {
            for (size_t packed = 0; packed < (size_t(1) << (2 * s)); packed++) {
                PrepSpec prep;
                prep.packed_basis = packed;
                for (const auto& down : all_bases(s)) {
                    builder.copy_for(proto_copy(up, prep, down));
                }
            }
        }
    }

    for (size_t j = 0; j < g.size(); j++) {
        for (size_t i = j; i < g.size(); i++) {
            // Ordered pair (alpha=i, beta=j); (j,i) is recovered as the
            // conjugate, so off-diagonal weights fold in as 2*Re(...).
            bool doubled = i != j;
            const auto& li = g[i].first;
            const auto& lj = g[j].first;
            const auto& ri = g[i].second;
            const auto& rj = g[j].second;
            for (const auto& target : work) {
                bool denom = target.empty();
                PauliString o = denom ? PauliString(s) : PauliString(letters_from_key(target), 0);
                PauliString w = pauli_multiply(rj, pauli_multiply(o, ri));
                cplx phase = w.phase();
                std::vector<PauliLetter> h_letters(s);
                for (size_t q = 0; q < s; q++) h_letters[q] = w.letter(q);
                PauliString h(h_letters, 0);
                std::string tag = group_tag(i, j, g.size()) + (denom ? ":den" : ":num:" + target);
                size_t obs_mask = mask_of(h);
                auto down = basis_for(h);

                if (!measured) {
                    if (i == j) {
                        PrepSpec prep;
                        prep.direct = true;
                        prep.conj_mask = mask_of(li);
                        if (obs_mask == 0) {
                            // tr(L rho L) = tr(rho) = 1 for self-inverse checks.
                            builder.ensemble.classical.push_back(
                                {tag, denom ? "" : target, 0, 0, phase, doubled, denom});
                        } else {
                            size_t idx = builder.copy_for(proto_copy({}, prep, down));
                            builder.add(idx, {tag, denom ? "" : target, obs_mask, 0, phase,
                                              doubled, denom});
                        }
                        continue;
                    }
                    Mat a = li.matrix() * rho_in * lj.matrix();
                    if (obs_mask == 0) {
                        cplx val = phase * a.trace();
                        if (std::abs(val) > kWeightEps) {
                            builder.ensemble.classical.push_back(
                                {tag, denom ? "" : target, 0, 0, val, doubled, denom});
                        }
                        continue;
                    }
                    auto weights = reduced_prep_weights_multi(a, s);
                    for (size_t packed = 0; packed < weights.size(); packed++) {
                        cplx coeff = phase * weights[packed];
                        if (std::abs(coeff) < kWeightEps) continue;
                        PrepSpec prep;
                        prep.packed_basis = packed;
                        size_t idx = builder.copy_for(proto_copy({}, prep, down));
                        builder.add(idx, {tag, denom ? "" : target, obs_mask, 0, coeff, doubled,
                                          denom});
                    }
                    continue;
                }

                // Wire-cut input: expand over the upstream Pauli basis.
                size_t m_count = size_t(1) << (2 * s);
                for (size_t m_idx = 0; m_idx < m_count; m_idx++) {
                    std::vector<PauliLetter> m_letters(s);
                    for (size_t q = 0; q < s; q++) {
                        m_letters[q] = PauliLetter((m_idx >> (2 * q)) & 3u);
                    }
                    Mat a = Mat::Identity(1, 1);
                    for (size_t q = s; q-- > 0;) {
                        Mat factor = pauli_matrix(li.letter(q)) * pauli_matrix(m_letters[q]) *
                                     pauli_matrix(lj.letter(q));
                        a = kron(a, factor);
                    }
                    a *= li.phase() * lj.phase();
                    std::vector<PauliLetter> up(s, PauliLetter::Z);
                    size_t up_mask = 0;
                    for (size_t q = 0; q < s; q++) {
                        if (m_letters[q] != PauliLetter::I) {
                            up[q] = m_letters[q];
                            up_mask |= size_t(1) << q;
                        }
                    }
                    double norm = 1.0 / double(size_t(1) << s);
                    if (obs_mask == 0) {
                        cplx val = norm * phase * a.trace();
                        if (std::abs(val) < kWeightEps) continue;
                        if (up_mask == 0) {
                            builder.ensemble.classical.push_back(
                                {tag, denom ? "" : target, 0, 0, val, doubled, denom});
                        } else {
                            PrepSpec prep;
                            size_t idx = builder.copy_for(
                                proto_copy(up, prep, std::vector<PauliLetter>(s, PauliLetter::Z)));
                            builder.add(idx, {tag, denom ? "" : target, 0, up_mask, val, doubled,
                                              denom});
                        }
                        continue;
                    }
                    auto weights = reduced_prep_weights_multi(a, s);
                    for (size_t packed = 0; packed < weights.size(); packed++) {
                        cplx coeff = norm * phase * weights[packed];
                        if (std::abs(coeff) < kWeightEps) continue;
                        PrepSpec prep;
                        prep.packed_basis = packed;
                        size_t idx = builder.copy_for(proto_copy(up, prep, down));
                        builder.add(idx, {tag, denom ? "" : target, obs_mask, up_mask, coeff,
                                          doubled, denom});
                    }
                }
            }
        }
    }
}

}  // namespace

CheckPair CheckPair::canonical_z(size_t n, std::vector<size_t> subset) {
    std::sort(subset.begin(), subset.end());
    PauliString z(n);
    for (size_t q : subset) z.set_letter(q, PauliLetter::Z);
    return CheckPair{z, z, std::move(subset)};
}

bool CheckPair::is_canonical_z() const {
    if (!(c_left == c_right) || c_left.phase_power() != 0) return false;
    for (size_t q = 0; q < c_left.size(); q++) {
        bool in_subset = std::find(subset.begin(), subset.end(), q) != subset.end();
        if (in_subset && c_left.letter(q) != PauliLetter::Z) return false;
        if (!in_subset && c_left.letter(q) != PauliLetter::I) return false;
    }
    return true;
}

std::string PrepSpec::label(size_t subset_size) const {
    if (direct) {
        std::string out = "rho";
        for (size_t q = 0; q < subset_size; q++) {
            if ((conj_mask >> q) & 1u) out += ":Z" + std::to_string(q);
        }
        return out;
    }
    std::string out;
    for (auto p : unpack_preps(packed_basis, subset_size)) {
        out += prep_state_name(p);
    }
    return out;
}

std::string CircuitCopy::execution_key() const {
    std::string key = prep.label(subset.size());
    key += "|u:";
    for (auto b : upstream_basis) key += letter_char(b);
    key += "|m:";
    for (auto b : measure_basis) key += letter_char(b);
    return key;
}

double CopyResult::parity(size_t upstream_mask, size_t obs_mask) const {
    size_t dim = size_t(1) << subset_size;
    size_t rows = has_upstream ? dim : 1;
    double acc = 0;
    for (size_t e_in = 0; e_in < rows; e_in++) {
        int su = (std::popcount(e_in & upstream_mask) & 1) ? -1 : 1;
        for (size_t e_out = 0; e_out < dim; e_out++) {
            int sd = (std::popcount(e_out & obs_mask) & 1) ? -1 : 1;
            acc += su * sd * joint[e_in * dim + e_out];
        }
    }
    return acc;
}

std::vector<double> CopyResult::upstream_marginal() const {
    size_t dim = size_t(1) << subset_size;
    std::vector<double> out(has_upstream ? dim : 1, 0.0);
    for (size_t e_in = 0; e_in < out.size(); e_in++) {
        for (size_t e_out = 0; e_out < dim; e_out++) {
            out[e_in] += joint[e_in * dim + e_out];
        }
    }
    return out;
}

void CopyResult::replace_upstream_marginal(const std::vector<double>& target) {
    if (!has_upstream) throw std::invalid_argument("copy has no upstream record");
    size_t dim = size_t(1) << subset_size;
    if (target.size() != dim) throw std::invalid_argument("marginal size mismatch");
    auto current = upstream_marginal();
    for (size_t e_in = 0; e_in < dim; e_in++) {
        if (current[e_in] > 0) {
            double scale = target[e_in] / current[e_in];
            for (size_t e_out = 0; e_out < dim; e_out++) {
                joint[e_in * dim + e_out] *= scale;
            }
        } else if (target[e_in] > 0) {
            // Zero-marginal rule: spread the mass uniformly over completions.
            for (size_t e_out = 0; e_out < dim; e_out++) {
                joint[e_in * dim + e_out] = target[e_in] / double(dim);
            }
        }
    }
}

double MitigatedResult::expectation(const std::string& letters) const {
    auto it = expectations.find(letters);
    if (it == expectations.end()) {
        throw std::invalid_argument("observable " + letters + " was not mitigated");
    }
    return it->second;
}

std::vector<double> MitigatedResult::basis_distribution(
    const std::vector<PauliLetter>& basis) const {
    size_t s = basis.size();
    size_t dim = size_t(1) << s;
    std::vector<double> vals(dim, 1.0);
    for (size_t mask = 1; mask < dim; mask++) {
        std::vector<PauliLetter> letters(s, PauliLetter::I);
        for (size_t q = 0; q < s; q++) {
            if ((mask >> q) & 1u) letters[q] = basis[q];
        }
        vals[mask] = expectation(letters_key(letters));
    }
    std::vector<double> dist(dim, 0.0);
    double total = 0.0;
    for (size_t e = 0; e < dim; e++) {
        double p = 0;
        for (size_t mask = 0; mask < dim; mask++) {
            int sign = (std::popcount(e & mask) & 1) ? -1 : 1;
            p += sign * vals[mask];
        }
        p /= double(dim);
        dist[e] = std::max(0.0, p);
        total += dist[e];
    }
    if (total <= 0) throw std::runtime_error("mitigated distribution has no mass");
    for (auto& p : dist) p /= total;
    return dist;
}

LeftCheckDecomposition decompose_left_check(const SingleQubitState& rho) {
    if (std::abs(rho.trace_real() - 1.0) > 1e-9) {
        throw std::invalid_argument("tracked state must have unit trace");
    }
    Mat a = pauli_matrix(PauliLetter::Z) * rho.matrix();
    auto w = reduced_prep_weights(a);
    LeftCheckDecomposition out;
    for (int k = 0; k < 4; k++) {
        if (std::abs(w[size_t(k)]) > kWeightEps) {
            out.terms.emplace_back(PrepState(k), w[size_t(k)]);
        }
    }
    return out;
}

Mat LeftCheckDecomposition::contraction() const {
    Mat acc = Mat::Zero(2, 2);
    for (const auto& [state, weight] : terms) {
        acc += weight * prep_state_density(state);
    }
    return acc;
}

BasisSet all_bases(size_t s) {
    std::vector<PauliLetter> axes{PauliLetter::X, PauliLetter::Y, PauliLetter::Z};
    BasisSet out;
    std::vector<size_t> idx(s, 0);
    while (true) {
        std::vector<PauliLetter> basis(s);
        for (size_t q = 0; q < s; q++) basis[q] = axes[idx[q]];
        out.push_back(basis);
        size_t q = 0;
        while (q < s && ++idx[q] == 3) idx[q++] = 0;
        if (q == s) break;
    }
    return out;
}

BasisSet single_basis(size_t s, PauliLetter b) {
    return {std::vector<PauliLetter>(s, b)};
}

std::string letters_key(const std::vector<PauliLetter>& letters) {
    std::string out;
    for (auto l : letters) out.push_back(letter_char(l));
    return out;
}

PauliString subset_observable(size_t n, const std::vector<size_t>& subset,
                              const std::vector<PauliLetter>& letters) {
    PauliString p(n);
    for (size_t i = 0; i < subset.size(); i++) p.set_letter(subset[i], letters[i]);
    return p;
}

CopyEnsemble build_copies(const Circuit& segment, const CheckPair& check, const Mat& rho_in,
                          const BasisSet& bases_needed) {
    size_t s = check.subset.size();
    if (rho_in.rows() != Eigen::Index(size_t(1) << s) || rho_in.rows() != rho_in.cols()) {
        throw std::invalid_argument("tracked state dimension mismatch");
    }
    if (std::abs(rho_in.trace().real() - 1.0) > 1e-6) {
        throw std::invalid_argument("tracked state must have unit trace");
    }
    if (!check_condition(segment, check.c_left, check.c_right)) {
        throw std::invalid_argument("check condition fails on the segment");
    }
    Builder builder;
    expand_terms(builder, check, Circuit(segment.num_qubits), segment, rho_in, bases_needed,
                 /*measured=*/false, /*checked=*/true, /*full_grid=*/false);
    return std::move(builder.ensemble);
}

CopyEnsemble build_copies_measured(const Circuit& prefix, const Circuit& segment,
                                   const CheckPair& check, const BasisSet& bases_needed,
                                   bool checked) {
    if (checked && !check_condition(segment, check.c_left, check.c_right)) {
        throw std::invalid_argument("check condition fails on the segment");
    }
    Builder builder;
    size_t s = check.subset.size();
    Mat unused = Mat::Identity(Eigen::Index(size_t(1) << s), Eigen::Index(size_t(1) << s));
    expand_terms(builder, check, prefix, segment, unused, bases_needed,
                 /*measured=*/true, checked, /*full_grid=*/false);
    return std::move(builder.ensemble);
}

CopyEnsemble build_copies_grid(const Circuit& prefix, const Circuit& segment,
                               const CheckPair& check, bool checked) {
    if (checked && !check_condition(segment, check.c_left, check.c_right)) {
        throw std::invalid_argument("check condition fails on the segment");
    }
    Builder builder;
    size_t s = check.subset.size();
    Mat unused = Mat::Identity(Eigen::Index(size_t(1) << s), Eigen::Index(size_t(1) << s));
    expand_terms(builder, check, prefix, segment, unused, all_bases(s),
                 /*measured=*/true, checked, /*full_grid=*/true);
    return std::move(builder.ensemble);
}

MitigatedResult assemble(const CopyEnsemble& ensemble, const std::vector<CopyResult>& results) {
    if (results.size() != ensemble.copies.size()) {
        throw std::invalid_argument("every copy needs a result");
    }
    std::map<std::string, cplx> num;
    for (const auto& t : ensemble.targets) num[t] = cplx(0, 0);
    cplx den(0, 0);

    auto accumulate = [&](const TermContribution& c, double parity_value) {
        cplx val = c.coeff * parity_value;
        if (c.doubled_real) val = cplx(2.0 * val.real(), 0.0);
        if (c.denominator) {
            den += val;
        } else {
            num[c.target] += val;
        }
    };

    for (size_t k = 0; k < ensemble.copies.size(); k++) {
        for (const auto& c : ensemble.copies[k].contributions) {
            accumulate(c, results[k].parity(c.upstream_mask, c.obs_mask));
        }
    }
    for (const auto& c : ensemble.classical) accumulate(c, 1.0);

    MitigatedResult out;
    out.numerators = num;
    out.denominator = den;
    double residue = std::abs(den.imag());
    for (const auto& [t, v] : num) residue = std::max(residue, std::abs(v.imag()));
    out.imag_residue = residue;
    out.residue_warning = residue > 1e-6;
    if (den.real() <= 1e-12) {
        throw std::runtime_error(
            "post-selection mass vanished: denominator is not positive (catastrophic noise or a "
            "wrong check)");
    }
    double g2 = double(ensemble.group_size) * double(ensemble.group_size);
    out.post_selection_rate = den.real() / g2;
    for (const auto& [t, v] : num) {
        out.expectations[t] = v.real() / den.real();
    }
    return out;
}

ReconstructedQubit reconstruct_qubit(double x, double y, double z, double shot_tolerance) {
    for (double v : {x, y, z}) {
        if (std::abs(v) > 1.0 + shot_tolerance) {
            throw std::invalid_argument("expectation outside the physical band; data inconsistent");
        }
    }
    double norm = std::sqrt(x * x + y * y + z * z);
    ReconstructedQubit out;
    if (norm > 1.0) {
        out.projection_correction = norm - 1.0;
        x /= norm;
        y /= norm;
        z /= norm;
    }
    out.state = SingleQubitState::from_bloch(x, y, z);
    return out;
}

ReconstructedPair reconstruct_pair(const std::map<std::string, double>& expectations) {
    Mat rho = Mat::Identity(4, 4) * 0.25;
    for (const auto& [key, value] : expectations) {
        if (key.size() != 2) throw std::invalid_argument("expect two-letter observable keys");
        PauliString p = PauliString::parse(key);
        if (p.is_identity_letters()) continue;
        rho += 0.25 * value * p.matrix();
    }
    Eigen::SelfAdjointEigenSolver<Mat> es(rho);
    Eigen::VectorXd evals = es.eigenvalues();
    double correction = 0;
    for (Eigen::Index k = 0; k < evals.size(); k++) {
        if (evals(k) < 0) {
            correction += -evals(k);
            evals(k) = 0;
        }
    }
    Mat clipped = es.eigenvectors() * evals.cast<cplx>().asDiagonal() * es.eigenvectors().adjoint();
    double tr = clipped.trace().real();
    if (tr <= 0) throw std::runtime_error("reconstructed state has no mass");
    ReconstructedPair out;
    out.state = clipped / tr;
    out.projection_correction = correction;
    return out;
}

PostSelectedState pcs_postselect_oracle(const Circuit& segment, const PauliChannel& channel,
                                        const CheckPair& check, const Mat& rho_in_full) {
    size_t n = segment.num_qubits;
    if (n > kExactLimit) throw std::invalid_argument("oracle limited to the exact backend size");
    size_t dim = size_t(1) << n;
    if (rho_in_full.rows() != Eigen::Index(dim)) {
        throw std::invalid_argument("input state dimension mismatch");
    }
    Mat rho_u = rho_in_full;
    for (const auto& g : segment.ops) apply_gate_density(rho_u, g);

    std::vector<Mat> group;
    for (const auto& [l, r] : check_group(check)) {
        PauliString full(n);
        for (size_t q = 0; q < check.subset.size(); q++) {
            full.set_letter(check.subset[q], r.letter(q));
        }
        group.push_back(full.matrix_embedded(n));
    }

    Mat acc = Mat::Zero(Eigen::Index(dim), Eigen::Index(dim));
    for (const auto& [p, prob] : channel.terms) {
        if (prob == 0.0) continue;
        Mat e = std::sqrt(prob) * p.matrix_embedded(n);
        Mat a = Mat::Zero(Eigen::Index(dim), Eigen::Index(dim));
        for (const auto& c : group) a += c * e * c.adjoint();
        acc += a * rho_u * a.adjoint();
    }
    double tr = acc.trace().real();
    if (tr <= 1e-14) throw std::runtime_error("post-selected state has zero trace");
    PostSelectedState out;
    out.state = acc / tr;
    out.acceptance = tr / (double(group.size()) * double(group.size()));
    return out;
}

CopyEnsemble tomographic_baseline(const Circuit& prefix, const Circuit& segment,
                                  const std::vector<size_t>& subset, size_t measure_sites,
                                  size_t prep_sites) {
    size_t s = subset.size();
    CheckPair trivial;
    trivial.c_left = PauliString(segment.num_qubits);
    trivial.c_right = PauliString(segment.num_qubits);
    trivial.subset = subset;

    if (measure_sites == 0 && prep_sites == 0) {
        CopyEnsemble out;
        CircuitCopy copy;
        copy.payload = prefix;
        for (const auto& g : segment.ops) copy.payload.append(g);
        copy.subset = subset;
        copy.prep.direct = true;
        copy.tracked_state = zero_density(s);
        copy.measure_basis = std::vector<PauliLetter>(s, PauliLetter::Z);
        out.copies.push_back(std::move(copy));
        out.group_size = 1;
        return out;
    }
    if (prep_sites == 0 && measure_sites == 1) {
        // No cut: tomography of the output state from the known |0> start.
        Circuit whole = prefix;
        for (const auto& g : segment.ops) whole.append(g);
        Builder builder;
        expand_terms(builder, trivial, Circuit(whole.num_qubits), whole, zero_density(s),
                     all_bases(s), /*measured=*/false, /*checked=*/false, /*full_grid=*/false);
        return std::move(builder.ensemble);
    }
    if (prep_sites == 1 && measure_sites == 2) {
        Builder builder;
        Mat unused = zero_density(s);
        expand_terms(builder, trivial, prefix, segment, unused, all_bases(s),
                     /*measured=*/true, /*checked=*/false, /*full_grid=*/true);
        return std::move(builder.ensemble);
    }
    throw std::invalid_argument("unsupported cut layout for the tomographic baseline");
}

nlohmann::ordered_json copy_manifest(const CopyEnsemble& ensemble) {
    nlohmann::ordered_json rows = nlohmann::ordered_json::array();
    auto copy_row = [](const CircuitCopy& copy, size_t k) {
        nlohmann::ordered_json row;
        row["prep"] = copy.prep.label(copy.subset.size());
        row["payload"] = "copy-" + std::to_string(k);
        row["basis"] = letters_key(copy.measure_basis);
        if (!copy.upstream_basis.empty()) row["upstream"] = letters_key(copy.upstream_basis);
        return row;
    };
    for (size_t k = 0; k < ensemble.copies.size(); k++) {
        const auto& copy = ensemble.copies[k];
        if (copy.contributions.empty()) {
            auto row = copy_row(copy, k);
            row["weight"] = {0.0, 0.0};
            row["term_tag"] = "grid";
            rows.push_back(row);
            continue;
        }
        for (const auto& c : copy.contributions) {
            auto row = copy_row(copy, k);
            row["weight"] = {c.coeff.real(), c.coeff.imag()};
            row["term_tag"] = c.term_tag;
            rows.push_back(row);
        }
    }
    for (const auto& c : ensemble.classical) {
        nlohmann::ordered_json row;
        row["prep"] = "classical";
        row["payload"] = "none";
        row["basis"] = "";
        row["weight"] = {c.coeff.real(), c.coeff.imag()};
        row["term_tag"] = c.term_tag;
        rows.push_back(row);
    }
    return rows;
}

}  // namespace qutrace

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

#include <Eigen/Dense>
#include <complex>
#include <cstdint>
#include <vector>

namespace qutrace {

using cplx = std::complex<double>;
using Mat = Eigen::MatrixXcd;
using Vec = Eigen::VectorXcd;

inline Mat kron(const Mat& a, const Mat& b) {
    Mat out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); i++) {
        for (Eigen::Index j = 0; j < a.cols(); j++) {
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
        }
    }
    return out;
}

inline double frobenius_norm(const Mat& m) {
    return m.norm();
}

/// Embeds an operator acting on `support` (support[0] is the least
/// significant index of the operator's own space) into an n-qubit matrix.
/// Index bit j of the full space corresponds to qubit j.
inline Mat embed(const Mat& op, const std::vector<size_t>& support, size_t num_qubits) {
    size_t k = support.size();
    size_t dim = size_t(1) << num_qubits;
    size_t sub = size_t(1) << k;
    Mat out = Mat::Zero(Eigen::Index(dim), Eigen::Index(dim));
    size_t rest_dim = dim >> k;
    std::vector<size_t> rest;
    rest.reserve(num_qubits - k);
    for (size_t q = 0; q < num_qubits; q++) {
        bool in_support = false;
        for (size_t s : support) {
            if (s == q) in_support = true;
        }
        if (!in_support) rest.push_back(q);
    }
    auto compose = [&](size_t sub_bits, size_t rest_bits) {
        size_t idx = 0;
        for (size_t i = 0; i < k; i++) {
            idx |= ((sub_bits >> i) & 1u) << support[i];
        }
        for (size_t i = 0; i < rest.size(); i++) {
            idx |= ((rest_bits >> i) & 1u) << rest[i];
        }
        return idx;
    };
    for (size_t r = 0; r < rest_dim; r++) {
        for (size_t a = 0; a < sub; a++) {
            for (size_t b = 0; b < sub; b++) {
                cplx v = op(Eigen::Index(a), Eigen::Index(b));
                if (v != cplx(0.0, 0.0)) {
                    out(Eigen::Index(compose(a, r)), Eigen::Index(compose(b, r))) = v;
                }
            }
        }
    }
    return out;
}

/// Partial trace over the qubits listed in `traced`; remaining qubits keep
/// their relative order (least significant first).
inline Mat partial_trace(const Mat& rho, const std::vector<size_t>& traced, size_t num_qubits) {
    std::vector<size_t> kept;
    for (size_t q = 0; q < num_qubits; q++) {
        bool is_traced = false;
        for (size_t t : traced) {
            if (t == q) is_traced = true;
        }
        if (!is_traced) kept.push_back(q);
    }
    size_t kd = size_t(1) << kept.size();
    size_t td = size_t(1) << traced.size();
    Mat out = Mat::Zero(Eigen::Index(kd), Eigen::Index(kd));
    auto compose = [&](size_t kept_bits, size_t traced_bits) {
        size_t idx = 0;
        for (size_t i = 0; i < kept.size(); i++) {
            idx |= ((kept_bits >> i) & 1u) << kept[i];
        }
        for (size_t i = 0; i < traced.size(); i++) {
            idx |= ((traced_bits >> i) & 1u) << traced[i];
        }
        return idx;
    };
    for (size_t a = 0; a < kd; a++) {
        for (size_t b = 0; b < kd; b++) {
            cplx s = 0.0;
            for (size_t t = 0; t < td; t++) {
                s += rho(Eigen::Index(compose(a, t)), Eigen::Index(compose(b, t)));
            }
            out(Eigen::Index(a), Eigen::Index(b)) = s;
        }
    }
    return out;
}

inline bool approx_equal(const Mat& a, const Mat& b, double tol) {
    return (a - b).norm() < tol;
}

/// Scatter offsets: local index a -> bits of a placed at support positions.
inline std::vector<size_t> scatter_offsets(const std::vector<size_t>& support) {
    size_t sub = size_t(1) << support.size();
    std::vector<size_t> offs(sub, 0);
    for (size_t a = 0; a < sub; a++) {
        for (size_t i = 0; i < support.size(); i++) {
            offs[a] |= ((a >> i) & 1u) << support[i];
        }
    }
    return offs;
}

inline size_t support_mask(const std::vector<size_t>& support) {
    size_t mask = 0;
    for (size_t s : support) mask |= size_t(1) << s;
    return mask;
}

/// m <- (local embedded on support) * m, without building the embedding.
inline void apply_local_left(Mat& m, const Mat& local, const std::vector<size_t>& support) {
    const size_t dim = size_t(m.rows());
    const size_t sub = size_t(1) << support.size();
    const size_t mask = support_mask(support);
    const auto offs = scatter_offsets(support);
    Mat rows(sub, m.cols());
    size_t base = 0;
    while (true) {
        for (size_t a = 0; a < sub; a++) rows.row(Eigen::Index(a)) = m.row(Eigen::Index(base + offs[a]));
        rows = local * rows;
        for (size_t a = 0; a < sub; a++) m.row(Eigen::Index(base + offs[a])) = rows.row(Eigen::Index(a));
        base = ((base | mask) + 1) & ~mask;
        if (base == 0 || base >= dim) break;
    }
}

/// m <- m * (local embedded on support)^dagger.
inline void apply_local_right_dagger(Mat& m, const Mat& local, const std::vector<size_t>& support) {
    const size_t dim = size_t(m.cols());
    const size_t sub = size_t(1) << support.size();
    const size_t mask = support_mask(support);
    const auto offs = scatter_offsets(support);
    Mat cols(m.rows(), sub);
    size_t base = 0;
    while (true) {
        for (size_t a = 0; a < sub; a++) cols.col(Eigen::Index(a)) = m.col(Eigen::Index(base + offs[a]));
        cols = cols * local.adjoint();
        for (size_t a = 0; a < sub; a++) m.col(Eigen::Index(base + offs[a])) = cols.col(Eigen::Index(a));
        base = ((base | mask) + 1) & ~mask;
        if (base == 0 || base >= dim) break;
    }
}

/// v <- (local embedded on support) * v for a state vector.
inline void apply_local_state(Vec& v, const Mat& local, const std::vector<size_t>& support) {
    const size_t dim = size_t(v.size());
    const size_t sub = size_t(1) << support.size();
    const size_t mask = support_mask(support);
    const auto offs = scatter_offsets(support);
    Vec tmp(sub);
    size_t base = 0;
    while (true) {
        for (size_t a = 0; a < sub; a++) tmp(Eigen::Index(a)) = v(Eigen::Index(base + offs[a]));
        tmp = local * tmp;
        for (size_t a = 0; a < sub; a++) v(Eigen::Index(base + offs[a])) = tmp(Eigen::Index(a));
        base = ((base | mask) + 1) & ~mask;
        if (base == 0 || base >= dim) break;
    }
}

}  // namespace qutrace

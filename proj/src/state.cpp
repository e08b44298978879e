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

#include "qutrace/state.hpp"

#include <cmath>
#include <stdexcept>

namespace qutrace {

const char* prep_state_name(PrepState s) {
    switch (s) {
        case PrepState::Zero: return "0";
        case PrepState::One: return "1";
        case PrepState::Plus: return "+";
        case PrepState::PlusI: return "i";
    }
    return "?";
}

Vec prep_state_vector(PrepState s) {
    Vec v(2);
    const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
    switch (s) {
        case PrepState::Zero: v << 1, 0; break;
        case PrepState::One: v << 0, 1; break;
        case PrepState::Plus: v << inv_sqrt2, inv_sqrt2; break;
        case PrepState::PlusI: v << inv_sqrt2, cplx(0, inv_sqrt2); break;
    }
    return v;
}

Mat prep_state_density(PrepState s) {
    Vec v = prep_state_vector(s);
    return v * v.adjoint();
}

SingleQubitState SingleQubitState::physical(const Mat& m) {
    if (m.rows() != 2 || m.cols() != 2) throw std::invalid_argument("state must be 2x2");
    if ((m - m.adjoint()).norm() > 1e-9) throw std::invalid_argument("state not Hermitian");
    if (std::abs(m.trace().real() - 1.0) > 1e-9 || std::abs(m.trace().imag()) > 1e-9) {
        throw std::invalid_argument("state trace differs from 1");
    }
    SingleQubitState out;
    out.m_ = m;
    auto b = out.bloch();
    double norm = std::sqrt(b[0] * b[0] + b[1] * b[1] + b[2] * b[2]);
    if (norm > 1.0 + 1e-9) throw std::invalid_argument("Bloch norm exceeds 1");
    return out;
}

SingleQubitState SingleQubitState::virtual_op(const Mat& m) {
    if (m.rows() != 2 || m.cols() != 2) throw std::invalid_argument("state must be 2x2");
    SingleQubitState out;
    out.m_ = m;
    out.virtual_ = true;
    return out;
}

SingleQubitState SingleQubitState::from_bloch(double x, double y, double z) {
    Mat m(2, 2);
    m << cplx(1 + z, 0), cplx(x, -y), cplx(x, y), cplx(1 - z, 0);
    return physical(0.5 * m);
}

std::array<double, 3> SingleQubitState::bloch() const {
    return {
        (m_ * pauli_matrix(PauliLetter::X)).trace().real(),
        (m_ * pauli_matrix(PauliLetter::Y)).trace().real(),
        (m_ * pauli_matrix(PauliLetter::Z)).trace().real(),
    };
}

SingleQubitState SingleQubitState::conjugated(const Mat& u) const {
    SingleQubitState out = *this;
    out.m_ = u * m_ * u.adjoint();
    return out;
}

std::array<cplx, 4> reduced_prep_weights(const Mat& a) {
    cplx t = a.trace();
    cplx tx = (pauli_matrix(PauliLetter::X) * a).trace();
    cplx ty = (pauli_matrix(PauliLetter::Y) * a).trace();
    cplx tz = (pauli_matrix(PauliLetter::Z) * a).trace();
    return {
        0.5 * (t - tx - ty + tz),
        0.5 * (t - tx - ty - tz),
        tx,
        ty,
    };
}

std::vector<cplx> reduced_prep_weights_multi(const Mat& a, size_t s) {
    if (s == 1) {
        auto w = reduced_prep_weights(a);
        return {w[0], w[1], w[2], w[3]};
    }
    if (s != 2) throw std::invalid_argument("subset size must be 1 or 2");
    // Pauli coefficients c_{QP} = tr((Q tensor P) a) / 4, then the per-qubit
    // prep transform K applied on each factor.
    static const double K[4][4] = {
        // rows: prep {0,1,+,i}; cols: Pauli {I,X,Y,Z}
        {1, -1, -1, 1},
        {1, -1, -1, -1},
        {0, 2, 0, 0},
        {0, 0, 2, 0},
    };
    cplx c[4][4];
    for (int p = 0; p < 4; p++) {
        for (int q = 0; q < 4; q++) {
            // qubit 0's Pauli p is the low kron factor
            Mat op = kron(pauli_matrix(PauliLetter(q)), pauli_matrix(PauliLetter(p)));
            c[p][q] = (op * a).trace() / 4.0;
        }
    }
    std::vector<cplx> w(16, cplx(0, 0));
    for (int k = 0; k < 4; k++) {      // prep on qubit 0
        for (int l = 0; l < 4; l++) {  // prep on qubit 1
            cplx acc = 0;
            for (int p = 0; p < 4; p++) {
                for (int q = 0; q < 4; q++) {
                    acc += K[k][p] * K[l][q] * c[p][q];
                }
            }
            w[size_t(l) * 4 + size_t(k)] = acc;
        }
    }
    return w;
}

std::vector<PrepState> unpack_preps(size_t packed, size_t s) {
    std::vector<PrepState> out(s);
    for (size_t i = 0; i < s; i++) {
        out[i] = PrepState((packed >> (2 * i)) & 3u);
    }
    return out;
}

Mat product_prep_density(size_t packed, size_t s) {
    auto preps = unpack_preps(packed, s);
    Mat m = Mat::Identity(1, 1);
    for (size_t i = s; i-- > 0;) {
        m = kron(m, prep_state_density(preps[i]));
    }
    return m;
}

}  // namespace qutrace

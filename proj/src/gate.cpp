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

#include "qutrace/gate.hpp"

#include <cmath>
#include <stdexcept>
#include <unordered_map>

namespace qutrace {

const char* gate_name(GateKind k) {
    switch (k) {
        case GateKind::H: return "H";
        case GateKind::X: return "X";
        case GateKind::Y: return "Y";
        case GateKind::Z: return "Z";
        case GateKind::S: return "S";
        case GateKind::Sdg: return "Sdg";
        case GateKind::RX: return "RX";
        case GateKind::RY: return "RY";
        case GateKind::RZ: return "RZ";
        case GateKind::CP: return "CP";
        case GateKind::CX: return "CX";
        case GateKind::CZ: return "CZ";
        case GateKind::SWAP: return "SWAP";
        case GateKind::CU1Q: return "CU1Q";
        case GateKind::U1Q: return "U1Q";
    }
    return "?";
}

GateKind gate_kind_from_name(const std::string& name) {
    static const std::unordered_map<std::string, GateKind> table = {
        {"H", GateKind::H},       {"X", GateKind::X},     {"Y", GateKind::Y},
        {"Z", GateKind::Z},       {"S", GateKind::S},     {"Sdg", GateKind::Sdg},
        {"RX", GateKind::RX},     {"RY", GateKind::RY},   {"RZ", GateKind::RZ},
        {"CP", GateKind::CP},     {"CX", GateKind::CX},   {"CZ", GateKind::CZ},
        {"SWAP", GateKind::SWAP}, {"CU1Q", GateKind::CU1Q}, {"U1Q", GateKind::U1Q},
    };
    auto it = table.find(name);
    if (it == table.end()) throw std::invalid_argument("unknown gate kind: " + name);
    return it->second;
}

size_t gate_arity(GateKind k) {
    switch (k) {
        case GateKind::CP:
        case GateKind::CX:
        case GateKind::CZ:
        case GateKind::SWAP:
        case GateKind::CU1Q:
            return 2;
        default:
            return 1;
    }
}

size_t gate_param_count(GateKind k) {
    switch (k) {
        case GateKind::RX:
        case GateKind::RY:
        case GateKind::RZ:
        case GateKind::CP:
            return 1;
        default:
            return 0;
    }
}

bool gate_is_diagonal(GateKind k) {
    switch (k) {
        case GateKind::Z:
        case GateKind::S:
        case GateKind::Sdg:
        case GateKind::RZ:
        case GateKind::CP:
        case GateKind::CZ:
            return true;
        default:
            return false;
    }
}

Gate make_gate(GateKind kind, std::vector<size_t> qubits, std::vector<double> params) {
    Gate g;
    g.kind = kind;
    g.qubits = std::move(qubits);
    g.params = std::move(params);
    if (g.qubits.size() != gate_arity(kind)) {
        throw std::invalid_argument(std::string("wrong qubit count for ") + gate_name(kind));
    }
    if (g.qubits.size() == 2 && g.qubits[0] == g.qubits[1]) {
        throw std::invalid_argument("duplicate qubit operands");
    }
    if (g.params.size() != gate_param_count(kind)) {
        throw std::invalid_argument(std::string("wrong parameter count for ") + gate_name(kind));
    }
    return g;
}

Gate make_u1q(size_t q, const Mat& u) {
    Gate g;
    g.kind = GateKind::U1Q;
    g.qubits = {q};
    g.matrix2 = u;
    if (u.rows() != 2 || u.cols() != 2) throw std::invalid_argument("U1Q payload must be 2x2");
    return g;
}

Gate make_cu1q(size_t control, size_t target, const Mat& u) {
    Gate g;
    g.kind = GateKind::CU1Q;
    g.qubits = {control, target};
    g.matrix2 = u;
    if (control == target) throw std::invalid_argument("duplicate qubit operands");
    if (u.rows() != 2 || u.cols() != 2) throw std::invalid_argument("CU1Q payload must be 2x2");
    return g;
}

Mat gate_unitary(const Gate& g) {
    const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
    Mat m;
    switch (g.kind) {
        case GateKind::H:
            m.resize(2, 2);
            m << inv_sqrt2, inv_sqrt2, inv_sqrt2, -inv_sqrt2;
            return m;
        case GateKind::X: return pauli_matrix(PauliLetter::X);
        case GateKind::Y: return pauli_matrix(PauliLetter::Y);
        case GateKind::Z: return pauli_matrix(PauliLetter::Z);
        case GateKind::S:
            m.resize(2, 2);
            m << 1, 0, 0, cplx(0, 1);
            return m;
        case GateKind::Sdg:
            m.resize(2, 2);
            m << 1, 0, 0, cplx(0, -1);
            return m;
        case GateKind::RX: {
            double c = std::cos(g.params[0] / 2), s = std::sin(g.params[0] / 2);
            m.resize(2, 2);
            m << c, cplx(0, -s), cplx(0, -s), c;
            return m;
        }
        case GateKind::RY: {
            double c = std::cos(g.params[0] / 2), s = std::sin(g.params[0] / 2);
            m.resize(2, 2);
            m << c, -s, s, c;
            return m;
        }
        case GateKind::RZ: {
            m.resize(2, 2);
            m << std::exp(cplx(0, -g.params[0] / 2)), 0, 0, std::exp(cplx(0, g.params[0] / 2));
            return m;
        }
        case GateKind::CP: {
            // Local index = target_bit*2 + control_bit.
            m = Mat::Identity(4, 4);
            m(3, 3) = std::exp(cplx(0, g.params[0]));
            return m;
        }
        case GateKind::CX: {
            m = Mat::Zero(4, 4);
            m(0, 0) = 1;  // t=0,c=0
            m(3, 1) = 1;  // t=0,c=1 -> t=1,c=1
            m(2, 2) = 1;  // t=1,c=0
            m(1, 3) = 1;  // t=1,c=1 -> t=0,c=1
            return m;
        }
        case GateKind::CZ: {
            m = Mat::Identity(4, 4);
            m(3, 3) = -1;
            return m;
        }
        case GateKind::SWAP: {
            m = Mat::Zero(4, 4);
            m(0, 0) = 1;
            m(1, 2) = 1;
            m(2, 1) = 1;
            m(3, 3) = 1;
            return m;
        }
        case GateKind::CU1Q: {
            // Control is local bit 0, target local bit 1.
            m = Mat::Identity(4, 4);
            m(1, 1) = g.matrix2(0, 0);
            m(1, 3) = g.matrix2(0, 1);
            m(3, 1) = g.matrix2(1, 0);
            m(3, 3) = g.matrix2(1, 1);
            return m;
        }
        case GateKind::U1Q:
            return g.matrix2;
    }
    throw std::logic_error("unreachable");
}

Mat matrix_power_unitary(const Mat& u, uint64_t power) {
    auto polar_project = [](const Mat& m) {
        Eigen::JacobiSVD<Mat> svd(m, Eigen::ComputeFullU | Eigen::ComputeFullV);
        return Mat(svd.matrixU() * svd.matrixV().adjoint());
    };
    Mat result = Mat::Identity(u.rows(), u.cols());
    Mat base = u;
    uint64_t p = power;
    while (p > 0) {
        if (p & 1) result = polar_project(result * base);
        p >>= 1;
        if (p > 0) base = polar_project(base * base);
    }
    return result;
}

namespace {

// Joint-support matrices for two operators; local index bit i of the joint
// space is joint[i].
Mat on_joint_support(const Mat& op, const std::vector<size_t>& own,
                     const std::vector<size_t>& joint) {
    std::vector<size_t> positions;
    positions.reserve(own.size());
    for (size_t q : own) {
        for (size_t i = 0; i < joint.size(); i++) {
            if (joint[i] == q) positions.push_back(i);
        }
    }
    return embed(op, positions, joint.size());
}

std::vector<size_t> support_union(const std::vector<size_t>& a, const std::vector<size_t>& b) {
    std::vector<size_t> u = a;
    for (size_t q : b) {
        bool found = false;
        for (size_t p : u) {
            if (p == q) found = true;
        }
        if (!found) u.push_back(q);
    }
    std::sort(u.begin(), u.end());
    return u;
}

bool commutator_vanishes(const Mat& a, const Mat& b) {
    return frobenius_norm(a * b - b * a) < 1e-10;
}

}  // namespace

bool commutes(const Gate& a, const Gate& b) {
    auto joint = support_union(a.qubits, b.qubits);
    Mat ma = on_joint_support(gate_unitary(a), a.qubits, joint);
    Mat mb = on_joint_support(gate_unitary(b), b.qubits, joint);
    return commutator_vanishes(ma, mb);
}

bool commutes(const Gate& a, const PauliString& b) {
    // Letters outside the gate's support factor out of the commutator, so the
    // decision reduces to the gate's own qubits.
    std::vector<PauliLetter> restricted;
    restricted.reserve(a.qubits.size());
    for (size_t q : a.qubits) {
        restricted.push_back(q < b.size() ? b.letter(q) : PauliLetter::I);
    }
    PauliString local(restricted, 0);
    return commutator_vanishes(gate_unitary(a), local.matrix());
}

bool commutes(const PauliString& a, const PauliString& b) {
    return pauli_commutes(a, b);
}

}  // namespace qutrace

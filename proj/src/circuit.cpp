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

#include "qutrace/circuit.hpp"

#include <stdexcept>

namespace qutrace {

Circuit& Circuit::append(Gate g) {
    for (size_t q : g.qubits) {
        if (q >= num_qubits) throw std::invalid_argument("gate qubit out of range");
    }
    ops.push_back(std::move(g));
    return *this;
}

size_t Circuit::count_two_qubit_gates() const {
    // CU1Q counts as 2 per the controlled-unitary decomposition estimate.
    size_t n = 0;
    for (const auto& g : ops) {
        if (g.kind == GateKind::CU1Q) {
            n += 2;
        } else if (g.is_two_qubit()) {
            n += 1;
        }
    }
    return n;
}

nlohmann::ordered_json Circuit::to_json() const {
    nlohmann::ordered_json j;
    j["n"] = num_qubits;
    j["ops"] = nlohmann::ordered_json::array();
    for (const auto& g : ops) {
        nlohmann::ordered_json op;
        op["kind"] = gate_name(g.kind);
        op["qubits"] = g.qubits;
        if (!g.params.empty()) op["params"] = g.params;
        if (g.kind == GateKind::U1Q || g.kind == GateKind::CU1Q) {
            auto m = nlohmann::ordered_json::array();
            for (Eigen::Index r = 0; r < 2; r++) {
                for (Eigen::Index c = 0; c < 2; c++) {
                    m.push_back({g.matrix2(r, c).real(), g.matrix2(r, c).imag()});
                }
            }
            op["matrix"] = m;
        }
        j["ops"].push_back(op);
    }
    j["cuts"] = nlohmann::ordered_json::array();
    for (const auto& c : cuts) {
        j["cuts"].push_back({{"qubit", c.qubit}, {"after_op", c.after_op}});
    }
    j["measured"] = std::vector<size_t>(measured.begin(), measured.end());
    return j;
}

Circuit Circuit::from_json(const nlohmann::json& j) {
    Circuit c(j.at("n").get<size_t>());
    for (const auto& op : j.at("ops")) {
        GateKind kind = gate_kind_from_name(op.at("kind").get<std::string>());
        std::vector<size_t> qubits = op.at("qubits").get<std::vector<size_t>>();
        std::vector<double> params;
        if (op.contains("params")) params = op.at("params").get<std::vector<double>>();
        if (kind == GateKind::U1Q || kind == GateKind::CU1Q) {
            const auto& m = op.at("matrix");
            if (m.size() != 4) throw std::invalid_argument("matrix payload must have 4 entries");
            Mat u(2, 2);
            for (size_t i = 0; i < 4; i++) {
                u(Eigen::Index(i / 2), Eigen::Index(i % 2)) =
                    cplx(m[i][0].get<double>(), m[i][1].get<double>());
            }
            if (kind == GateKind::U1Q) {
                c.append(make_u1q(qubits.at(0), u));
            } else {
                c.append(make_cu1q(qubits.at(0), qubits.at(1), u));
            }
        } else {
            c.append(make_gate(kind, qubits, params));
        }
    }
    if (j.contains("cuts")) {
        for (const auto& cut : j.at("cuts")) {
            c.cuts.push_back({cut.at("qubit").get<size_t>(), cut.at("after_op").get<size_t>()});
        }
    }
    if (j.contains("measured")) {
        for (const auto& q : j.at("measured")) c.measured.insert(q.get<size_t>());
    }
    return c;
}

Mat circuit_unitary(const Circuit& c, size_t limit) {
    if (c.num_qubits > limit) {
        throw std::invalid_argument("circuit too large for dense unitary construction");
    }
    size_t dim = size_t(1) << c.num_qubits;
    Mat u = Mat::Identity(Eigen::Index(dim), Eigen::Index(dim));
    for (const auto& g : c.ops) {
        apply_local_left(u, gate_unitary(g), g.qubits);
    }
    return u;
}

bool check_condition(const Circuit& segment, const PauliString& c_left,
                     const PauliString& c_right, size_t limit) {
    if (segment.num_qubits > limit) {
        throw std::invalid_argument(
            "segment exceeds the exact verification limit; verify per commuting sub-segment");
    }
    Mat u = circuit_unitary(segment, limit);
    Mat lhs = u;
    auto supp_l = c_left.support();
    if (supp_l.empty()) {
        lhs *= c_left.phase();
    } else {
        // lhs <- lhs * C_L
        apply_local_right_dagger(lhs, c_left.local_matrix(supp_l).adjoint(), supp_l);
    }
    auto supp_r = c_right.support();
    if (supp_r.empty()) {
        lhs *= c_right.phase();
    } else {
        apply_local_left(lhs, c_right.local_matrix(supp_r), supp_r);
    }
    return frobenius_norm(lhs - u) < 1e-9;
}

}  // namespace qutrace

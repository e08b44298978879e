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

#include <json.hpp>
#include <set>
#include <string>
#include <vector>

#include "qutrace/gate.hpp"

namespace qutrace {

/// A cut marker on a single wire. The cut sits on the op-list boundary
/// `after_op`, i.e. after the first `after_op` ops.
struct CutPoint {
    size_t qubit = 0;
    size_t after_op = 0;
    bool operator==(const CutPoint& o) const {
        return qubit == o.qubit && after_op == o.after_op;
    }
};

struct Circuit {
    size_t num_qubits = 0;
    std::vector<Gate> ops;
    std::vector<CutPoint> cuts;
    std::set<size_t> measured;

    Circuit() = default;
    explicit Circuit(size_t n) : num_qubits(n) {}

    Circuit& append(Gate g);
    Circuit& h(size_t q) { return append(make_gate(GateKind::H, {q})); }
    Circuit& x(size_t q) { return append(make_gate(GateKind::X, {q})); }
    Circuit& y(size_t q) { return append(make_gate(GateKind::Y, {q})); }
    Circuit& z(size_t q) { return append(make_gate(GateKind::Z, {q})); }
    Circuit& s(size_t q) { return append(make_gate(GateKind::S, {q})); }
    Circuit& sdg(size_t q) { return append(make_gate(GateKind::Sdg, {q})); }
    Circuit& rx(double theta, size_t q) { return append(make_gate(GateKind::RX, {q}, {theta})); }
    Circuit& ry(double theta, size_t q) { return append(make_gate(GateKind::RY, {q}, {theta})); }
    Circuit& rz(double theta, size_t q) { return append(make_gate(GateKind::RZ, {q}, {theta})); }
    Circuit& cp(double theta, size_t c, size_t t) {
        return append(make_gate(GateKind::CP, {c, t}, {theta}));
    }
    Circuit& cx(size_t c, size_t t) { return append(make_gate(GateKind::CX, {c, t})); }
    Circuit& cz(size_t a, size_t b) { return append(make_gate(GateKind::CZ, {a, b})); }
    Circuit& swap(size_t a, size_t b) { return append(make_gate(GateKind::SWAP, {a, b})); }
    Circuit& cu(size_t c, size_t t, const Mat& u) { return append(make_cu1q(c, t, u)); }
    Circuit& u1q(size_t q, const Mat& u) { return append(make_u1q(q, u)); }

    size_t count_two_qubit_gates() const;

    nlohmann::ordered_json to_json() const;
    static Circuit from_json(const nlohmann::json& j);
};

/// Dense unitary of the whole circuit (unitary ops only). Throws if
/// num_qubits exceeds `limit`.
Mat circuit_unitary(const Circuit& c, size_t limit = 12);

/// Eq.-style check condition: || C_R * U * C_L - U ||_F < 1e-9 with U the
/// dense unitary of the segment. The segment must fit the exact limit;
/// larger segments should be verified per commuting sub-segment.
bool check_condition(const Circuit& segment, const PauliString& c_left,
                     const PauliString& c_right, size_t limit = 10);

}  // namespace qutrace

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

#include <string>
#include <vector>

#include "qutrace/linalg.hpp"
#include "qutrace/pauli.hpp"

namespace qutrace {

enum class GateKind {
    H,
    X,
    Y,
    Z,
    S,
    Sdg,
    RX,
    RY,
    RZ,
    CP,
    CX,
    CZ,
    SWAP,
    CU1Q,  // controlled single-qubit unitary, explicit 2x2 payload
    U1Q,   // arbitrary single-qubit unitary, explicit 2x2 payload
};

const char* gate_name(GateKind k);
GateKind gate_kind_from_name(const std::string& name);
size_t gate_arity(GateKind k);
size_t gate_param_count(GateKind k);
bool gate_is_diagonal(GateKind k);

struct Gate {
    GateKind kind = GateKind::H;
    std::vector<size_t> qubits;   // for controlled kinds, qubits[0] is the control
    std::vector<double> params;   // rotation angles in radians
    Mat matrix2;                  // 2x2 payload, only for U1Q/CU1Q

    bool is_two_qubit() const { return qubits.size() == 2; }
};

Gate make_gate(GateKind kind, std::vector<size_t> qubits, std::vector<double> params = {});
Gate make_u1q(size_t q, const Mat& u);
Gate make_cu1q(size_t control, size_t target, const Mat& u);

/// Dense unitary over the gate's own qubits; qubits[0] is the least
/// significant bit of the local index.
Mat gate_unitary(const Gate& g);

/// U^power by repeated squaring, re-unitarized by polar projection to keep
/// accumulated drift below ~1e-12.
Mat matrix_power_unitary(const Mat& u, uint64_t power);

/// Numerical commutation on the joint support: Frobenius norm of the
/// commutator below 1e-10.
bool commutes(const Gate& a, const Gate& b);
bool commutes(const Gate& a, const PauliString& b);
bool commutes(const PauliString& a, const PauliString& b);

}  // namespace qutrace

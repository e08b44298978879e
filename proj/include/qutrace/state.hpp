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

#include <array>
#include <vector>

#include "qutrace/linalg.hpp"
#include "qutrace/pauli.hpp"

namespace qutrace {

/// The reduced preparation set. |-> and |-i> are eliminated through
/// |-><-| = |0><0| + |1><1| - |+><+| and the Y-basis analog.
enum class PrepState : uint8_t { Zero = 0, One = 1, Plus = 2, PlusI = 3 };

const char* prep_state_name(PrepState s);
Vec prep_state_vector(PrepState s);
Mat prep_state_density(PrepState s);

/// Single-qubit density operator with a Bloch-vector view. Non-Hermitian
/// matrices are permitted only when flagged virtual (e.g. Z*rho carriers).
class SingleQubitState {
  public:
    SingleQubitState() : m_(Mat::Zero(2, 2)) { m_(0, 0) = 1.0; }

    /// Validates Hermiticity, unit trace, and Bloch norm <= 1 + 1e-9.
    static SingleQubitState physical(const Mat& m);
    static SingleQubitState virtual_op(const Mat& m);
    static SingleQubitState from_bloch(double x, double y, double z);

    const Mat& matrix() const { return m_; }
    bool is_virtual() const { return virtual_; }
    std::array<double, 3> bloch() const;
    double trace_real() const { return m_.trace().real(); }

    /// rho -> g rho g^dagger for a 2x2 unitary (classical gate lift).
    SingleQubitState conjugated(const Mat& u) const;

  private:
    Mat m_;
    bool virtual_ = false;
};

/// Weights w over the reduced prep set so that
/// a = w0|0><0| + w1|1><1| + w2|+><+| + w3|i><i| for any 2x2 operator a.
std::array<cplx, 4> reduced_prep_weights(const Mat& a);

/// Tensor generalization for operators on `s` qubits (s in {1,2}):
/// returns weights over the 4^s product preps, indexed with qubit 0's prep
/// in the low base-4 digit.
std::vector<cplx> reduced_prep_weights_multi(const Mat& a, size_t s);

/// Density of a product prep over `s` qubits given the packed base-4 index.
Mat product_prep_density(size_t packed, size_t s);
std::vector<PrepState> unpack_preps(size_t packed, size_t s);

}  // namespace qutrace

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

#include <cstdint>
#include <string>
#include <vector>

#include "qutrace/linalg.hpp"

namespace qutrace {

enum class PauliLetter : uint8_t { I = 0, X = 1, Y = 2, Z = 3 };

char letter_char(PauliLetter p);
PauliLetter letter_from_char(char c);

/// 2x2 matrix of a single Pauli letter.
Mat pauli_matrix(PauliLetter p);

/// Phased n-qubit Pauli operator. The phase is i^phase_power with
/// phase_power in {0,1,2,3}, i.e. one of {+1, +i, -1, -i}.
class PauliString {
  public:
    PauliString() = default;
    explicit PauliString(size_t n) : letters_(n, PauliLetter::I) {}
    PauliString(std::vector<PauliLetter> letters, int phase_power = 0)
        : letters_(std::move(letters)), phase_power_(((phase_power % 4) + 4) % 4) {}

    /// Parses strings like "ZII", "+iXY", "-ZZ". Letter order is qubit 0
    /// first, matching the internal layout.
    static PauliString parse(const std::string& text);

    /// Identity except for `p` on qubit `q`.
    static PauliString single(size_t n, size_t q, PauliLetter p);

    size_t size() const { return letters_.size(); }
    PauliLetter letter(size_t q) const { return letters_[q]; }
    void set_letter(size_t q, PauliLetter p) { letters_[q] = p; }
    int phase_power() const { return phase_power_; }
    cplx phase() const;
    bool is_identity_letters() const;
    std::vector<size_t> support() const;

    /// Hermitian iff the phase is +1 or -1.
    bool is_hermitian() const { return phase_power_ % 2 == 0; }

    /// Dense matrix, phase included, over all size() qubits.
    Mat matrix() const;

    /// Dense matrix embedded into `num_qubits` (requires size() <= num_qubits
    /// and support within range).
    Mat matrix_embedded(size_t num_qubits) const;

    /// Matrix over just the listed qubits (phase included); the listed qubits
    /// must cover the non-identity support. support[0] is the local LSB.
    Mat local_matrix(const std::vector<size_t>& support) const;

    std::string str() const;

    bool operator==(const PauliString& o) const {
        return letters_ == o.letters_ && phase_power_ == o.phase_power_;
    }

  private:
    std::vector<PauliLetter> letters_;
    int phase_power_ = 0;
};

/// Product a*b with the accumulated group phase. Lengths must match.
PauliString pauli_multiply(const PauliString& a, const PauliString& b);

/// Exact symplectic commutation test (phases do not matter).
bool pauli_commutes(const PauliString& a, const PauliString& b);

}  // namespace qutrace

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

#include "qutrace/pauli.hpp"

#include <stdexcept>

namespace qutrace {

char letter_char(PauliLetter p) {
    switch (p) {
        case PauliLetter::I: return 'I';
        case PauliLetter::X: return 'X';
        case PauliLetter::Y: return 'Y';
        case PauliLetter::Z: return 'Z';
    }
    return '?';
}

PauliLetter letter_from_char(char c) {
    switch (c) {
        case 'I': return PauliLetter::I;
        case 'X': return PauliLetter::X;
        case 'Y': return PauliLetter::Y;
        case 'Z': return PauliLetter::Z;
        default: throw std::invalid_argument(std::string("not a Pauli letter: ") + c);
    }
}

Mat pauli_matrix(PauliLetter p) {
    Mat m(2, 2);
    switch (p) {
        case PauliLetter::I: m << 1, 0, 0, 1; break;
        case PauliLetter::X: m << 0, 1, 1, 0; break;
        case PauliLetter::Y: m << 0, cplx(0, -1), cplx(0, 1), 0; break;
        case PauliLetter::Z: m << 1, 0, 0, -1; break;
    }
    return m;
}

PauliString PauliString::parse(const std::string& text) {
    size_t i = 0;
    int phase = 0;
    if (i < text.size() && (text[i] == '+' || text[i] == '-')) {
        if (text[i] == '-') phase = 2;
        i++;
    }
    if (i < text.size() && text[i] == 'i') {
        phase += 1;
        i++;
    }
    std::vector<PauliLetter> letters;
    for (; i < text.size(); i++) {
        letters.push_back(letter_from_char(text[i]));
    }
    return PauliString(std::move(letters), phase);
}

PauliString PauliString::single(size_t n, size_t q, PauliLetter p) {
    PauliString out(n);
    if (q >= n) throw std::invalid_argument("qubit index out of range");
    out.set_letter(q, p);
    return out;
}

cplx PauliString::phase() const {
    static const cplx table[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
    return table[phase_power_];
}

bool PauliString::is_identity_letters() const {
    for (auto l : letters_) {
        if (l != PauliLetter::I) return false;
    }
    return true;
}

std::vector<size_t> PauliString::support() const {
    std::vector<size_t> out;
    for (size_t q = 0; q < letters_.size(); q++) {
        if (letters_[q] != PauliLetter::I) out.push_back(q);
    }
    return out;
}

Mat PauliString::matrix() const {
    Mat m = Mat::Identity(1, 1);
    // Qubit 0 is the least significant index bit, so it sits rightmost in
    // the kron chain.
    for (size_t q = letters_.size(); q-- > 0;) {
        m = kron(m, pauli_matrix(letters_[q]));
    }
    return phase() * m;
}

Mat PauliString::matrix_embedded(size_t num_qubits) const {
    if (letters_.size() > num_qubits) throw std::invalid_argument("Pauli longer than register");
    Mat m = Mat::Identity(1, 1);
    for (size_t q = num_qubits; q-- > 0;) {
        PauliLetter l = q < letters_.size() ? letters_[q] : PauliLetter::I;
        m = kron(m, pauli_matrix(l));
    }
    return phase() * m;
}

Mat PauliString::local_matrix(const std::vector<size_t>& support) const {
    for (size_t q = 0; q < letters_.size(); q++) {
        if (letters_[q] == PauliLetter::I) continue;
        bool covered = false;
        for (size_t s : support) {
            if (s == q) covered = true;
        }
        if (!covered) throw std::invalid_argument("support does not cover Pauli letters");
    }
    Mat m = Mat::Identity(1, 1);
    for (size_t i = support.size(); i-- > 0;) {
        size_t q = support[i];
        PauliLetter l = q < letters_.size() ? letters_[q] : PauliLetter::I;
        m = kron(m, pauli_matrix(l));
    }
    return phase() * m;
}

std::string PauliString::str() const {
    static const char* prefix[4] = {"+", "+i", "-", "-i"};
    std::string out = prefix[phase_power_];
    for (auto l : letters_) out.push_back(letter_char(l));
    return out;
}

namespace {

// letter_product[a][b] = (result letter, phase power of i)
struct LetterProduct {
    PauliLetter letter;
    int phase;
};

LetterProduct letter_multiply(PauliLetter a, PauliLetter b) {
    if (a == PauliLetter::I) return {b, 0};
    if (b == PauliLetter::I) return {a, 0};
    if (a == b) return {PauliLetter::I, 0};
    // XY=iZ, YZ=iX, ZX=iY and the reversed orders pick up -i.
    int ai = int(a), bi = int(b);
    // X=1, Y=2, Z=3; cyclic (1,2,3) forward means +i.
    bool forward = (bi - ai + 3) % 3 == 1;
    PauliLetter rest = PauliLetter(6 - ai - bi);
    return {rest, forward ? 1 : 3};
}

}  // namespace

PauliString pauli_multiply(const PauliString& a, const PauliString& b) {
    if (a.size() != b.size()) throw std::invalid_argument("Pauli length mismatch");
    std::vector<PauliLetter> letters(a.size());
    int phase = a.phase_power() + b.phase_power();
    for (size_t q = 0; q < a.size(); q++) {
        auto prod = letter_multiply(a.letter(q), b.letter(q));
        letters[q] = prod.letter;
        phase += prod.phase;
    }
    return PauliString(std::move(letters), phase);
}

bool pauli_commutes(const PauliString& a, const PauliString& b) {
    if (a.size() != b.size()) throw std::invalid_argument("Pauli length mismatch");
    int anti = 0;
    for (size_t q = 0; q < a.size(); q++) {
        PauliLetter la = a.letter(q), lb = b.letter(q);
        if (la != PauliLetter::I && lb != PauliLetter::I && la != lb) anti ^= 1;
    }
    return anti == 0;
}

}  // namespace qutrace

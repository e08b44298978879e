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

#include "qutrace/dist.hpp"

#include <cmath>
#include <stdexcept>

namespace qutrace {

void Counts::merge(const Counts& other) {
    for (const auto& [k, v] : other.counts) counts[k] += v;
    shots += other.shots;
}

std::string bitstring_of_index(size_t x, size_t n) {
    std::string s(n, '0');
    for (size_t j = 0; j < n; j++) {
        if ((x >> j) & 1u) s[n - 1 - j] = '1';
    }
    return s;
}

size_t index_of_bitstring(const std::string& key) {
    size_t x = 0;
    size_t n = key.size();
    for (size_t j = 0; j < n; j++) {
        if (key[n - 1 - j] == '1') x |= size_t(1) << j;
    }
    return x;
}

Distribution to_distribution(const Counts& c) {
    Distribution d;
    if (c.shots == 0) return d;
    for (const auto& [k, v] : c.counts) d[k] = double(v) / double(c.shots);
    return d;
}

void normalize(Distribution& d) {
    double total = 0;
    for (const auto& [k, v] : d) total += v;
    if (total <= 0) throw std::invalid_argument("cannot normalize zero-mass distribution");
    for (auto& [k, v] : d) v /= total;
}

bool is_normalized(const Distribution& d, double tol) {
    double total = 0;
    for (const auto& [k, v] : d) {
        if (v < -tol) return false;
        total += v;
    }
    return std::abs(total - 1.0) < tol;
}

Distribution marginal(const Distribution& d, const std::vector<size_t>& subset) {
    Distribution out;
    size_t s = subset.size();
    for (const auto& [key, p] : d) {
        size_t n = key.size();
        std::string local(s, '0');
        for (size_t i = 0; i < s; i++) {
            if (subset[i] >= n) throw std::invalid_argument("subset index out of range");
            local[s - 1 - i] = key[n - 1 - subset[i]];
        }
        out[local] += p;
    }
    normalize(out);
    return out;
}

Distribution readout_channel(const Distribution& d, const NoiseModel& nm) {
    if (d.empty()) return d;
    size_t n = d.begin()->first.size();
    if (n > 24) throw std::invalid_argument("readout channel limited to 24 qubits");
    std::vector<double> dense(size_t(1) << n, 0.0);
    for (const auto& [key, p] : d) {
        if (key.size() != n) throw std::invalid_argument("mixed key lengths");
        dense[index_of_bitstring(key)] += p;
    }
    std::vector<double> next(dense.size());
    for (size_t q = 0; q < n; q++) {
        auto r = nm.readout_for(q);
        if (r[0] == 0.0 && r[1] == 0.0) continue;
        size_t bit = size_t(1) << q;
        for (size_t x = 0; x < dense.size(); x++) {
            double p0 = dense[x & ~bit];  // prepared 0
            double p1 = dense[x | bit];   // prepared 1
            if (x & bit) {
                next[x] = p0 * r[0] + p1 * (1.0 - r[1]);
            } else {
                next[x] = p0 * (1.0 - r[0]) + p1 * r[1];
            }
        }
        dense.swap(next);
    }
    Distribution out;
    for (size_t x = 0; x < dense.size(); x++) {
        if (dense[x] != 0.0) out[bitstring_of_index(x, n)] = dense[x];
    }
    return out;
}

double expectation(const Distribution& d, const PauliString& obs) {
    if (!obs.is_hermitian()) throw std::invalid_argument("observable must be Hermitian");
    for (size_t q = 0; q < obs.size(); q++) {
        if (obs.letter(q) == PauliLetter::X || obs.letter(q) == PauliLetter::Y) {
            throw std::invalid_argument(
                "X/Y observable against a Z-basis distribution; rotate the basis first");
        }
    }
    double sign = obs.phase().real();
    double acc = 0;
    for (const auto& [key, p] : d) {
        int parity = 1;
        size_t n = key.size();
        for (size_t q = 0; q < obs.size() && q < n; q++) {
            if (obs.letter(q) == PauliLetter::Z && key[n - 1 - q] == '1') parity = -parity;
        }
        acc += p * parity;
    }
    return sign * acc;
}

double hellinger_fidelity(const Distribution& p, const Distribution& q) {
    double bc = 0;
    for (const auto& [k, vp] : p) {
        auto it = q.find(k);
        if (it != q.end() && vp > 0 && it->second > 0) {
            bc += std::sqrt(vp * it->second);
        }
    }
    double f = bc * bc;
    if (f > 1.0) f = 1.0;
    if (f < 0.0) f = 0.0;
    return f;
}

}  // namespace qutrace

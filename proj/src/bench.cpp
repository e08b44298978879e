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

#include "qutrace/bench.hpp"

#include <cmath>
#include <random>
#include <stdexcept>

namespace qutrace {

namespace {

constexpr double kPi = 3.14159265358979323846;

// Fourier-state phase on qubit q of an n-qubit value register.
double fourier_angle(uint64_t value, size_t q) {
    uint64_t window = uint64_t(1) << (q + 1);
    return 2.0 * kPi * double(value % window) / double(window);
}

void append_iqft(Circuit& c, const std::vector<size_t>& wires) {
    size_t n = wires.size();
    for (size_t j = 0; j < n; j++) {
        for (size_t m = 0; m < j; m++) {
            c.cp(-kPi / double(uint64_t(1) << (j - m)), wires[m], wires[j]);
        }
        c.h(wires[j]);
    }
}

void append_qft(Circuit& c, const std::vector<size_t>& wires) {
    size_t n = wires.size();
    for (size_t j = n; j-- > 0;) {
        c.h(wires[j]);
        for (size_t m = j; m-- > 0;) {
            c.cp(kPi / double(uint64_t(1) << (j - m)), wires[m], wires[j]);
        }
    }
}

}  // namespace

Circuit gen_iqft(size_t n, uint64_t value) {
    if (n == 0 || n > 20) throw std::invalid_argument("iqft size out of range");
    if (value >= (uint64_t(1) << n)) throw std::invalid_argument("value exceeds the register");
    Circuit c(n);
    for (size_t q = 0; q < n; q++) {
        c.h(q);
        double theta = fourier_angle(value, q);
        if (theta != 0.0) c.rz(theta, q);
    }
    std::vector<size_t> wires(n);
    for (size_t q = 0; q < n; q++) wires[q] = q;
    append_iqft(c, wires);
    for (size_t q = 0; q < n; q++) c.measured.insert(q);
    return c;
}

Circuit gen_qpe(size_t ancillas, double phase) {
    if (ancillas == 0 || ancillas > 16) throw std::invalid_argument("ancilla count out of range");
    size_t n = ancillas + 1;
    size_t target = ancillas;
    Circuit c(n);
    Mat u(2, 2);
    u << 1, 0, 0, std::exp(cplx(0, 2.0 * kPi * phase));
    c.x(target);
    for (size_t q = 0; q < ancillas; q++) c.h(q);
    for (size_t q = 0; q < ancillas; q++) {
        c.cu(q, target, matrix_power_unitary(u, uint64_t(1) << (ancillas - 1 - q)));
    }
    std::vector<size_t> wires(ancillas);
    for (size_t q = 0; q < ancillas; q++) wires[q] = q;
    append_iqft(c, wires);
    for (size_t q = 0; q < ancillas; q++) c.measured.insert(q);
    return c;
}

Circuit gen_bv(const std::string& secret) {
    size_t n = secret.size();
    if (n == 0 || n > 20) throw std::invalid_argument("secret length out of range");
    for (char ch : secret) {
        if (ch != '0' && ch != '1') throw std::invalid_argument("secret must be binary");
    }
    Circuit c(n + 1);
    size_t ancilla = n;
    for (size_t q = 0; q < n; q++) c.h(q);
    c.x(ancilla);
    c.h(ancilla);
    for (size_t q = 0; q < n; q++) {
        if (secret[n - 1 - q] == '1') c.cx(q, ancilla);
    }
    for (size_t q = 0; q < n; q++) c.h(q);
    for (size_t q = 0; q < n; q++) c.measured.insert(q);
    return c;
}

Circuit gen_qft_adder(size_t n, uint64_t a, uint64_t b) {
    if (n == 0 || n > 20) throw std::invalid_argument("register size out of range");
    if (a >= (uint64_t(1) << n)) throw std::invalid_argument("addend exceeds the register");
    Circuit c(n);
    for (size_t q = 0; q < n; q++) {
        if ((a >> q) & 1u) c.x(q);
    }
    std::vector<size_t> wires(n);
    for (size_t q = 0; q < n; q++) wires[q] = q;
    append_qft(c, wires);
    for (size_t q = 0; q < n; q++) {
        double theta = fourier_angle(b, q);
        if (theta != 0.0) c.rz(theta, q);
    }
    append_iqft(c, wires);
    for (size_t q = 0; q < n; q++) c.measured.insert(q);
    return c;
}

Circuit gen_qft_multiplier(size_t n_in, size_t n_out, uint64_t a, uint64_t b) {
    if (n_in == 0 || n_out == 0 || n_in + n_out > 20) {
        throw std::invalid_argument("register sizes out of range");
    }
    if (a >= (uint64_t(1) << n_in)) throw std::invalid_argument("input exceeds the register");
    Circuit c(n_in + n_out);
    for (size_t q = 0; q < n_in; q++) {
        if ((a >> q) & 1u) c.x(q);
    }
    std::vector<size_t> out_wires(n_out);
    for (size_t q = 0; q < n_out; q++) out_wires[q] = n_in + q;
    // Fourier transform of |0..0> is the plus wall.
    for (size_t q : out_wires) c.h(q);
    uint64_t modulus = uint64_t(1) << n_out;
    for (size_t i = 0; i < n_in; i++) {
        uint64_t addend = (b << i) % modulus;
        for (size_t j = 0; j < n_out; j++) {
            double theta = fourier_angle(addend, j);
            if (theta != 0.0) c.cp(theta, i, out_wires[j]);
        }
    }
    append_iqft(c, out_wires);
    for (size_t q = 0; q < c.num_qubits; q++) c.measured.insert(q);
    return c;
}

Circuit gen_vqe(size_t n, size_t layers, size_t entangle_reps, const std::vector<double>& angles) {
    if (n < 2 || n > 20) throw std::invalid_argument("register size out of range");
    if (layers == 0 || entangle_reps == 0) {
        throw std::invalid_argument("layer counts must be positive");
    }
    if (angles.size() != (layers + 1) * n) {
        throw std::invalid_argument("expected (layers+1)*n rotation angles");
    }
    Circuit c(n);
    size_t idx = 0;
    for (size_t l = 0; l < layers; l++) {
        for (size_t q = 0; q < n; q++) c.ry(angles[idx++], q);
        for (size_t rep = 0; rep < entangle_reps; rep++) {
            for (size_t q = 0; q + 1 < n; q++) c.cz(q, q + 1);
        }
    }
    for (size_t q = 0; q < n; q++) c.ry(angles[idx++], q);
    for (size_t q = 0; q < n; q++) c.measured.insert(q);
    return c;
}

std::vector<double> vqe_default_angles(size_t n, size_t layers, uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> d(0.15, 0.65);
    std::vector<double> out((layers + 1) * n);
    for (auto& a : out) a = d(rng);
    return out;
}

Circuit gen_qaoa(size_t n, const std::vector<std::pair<size_t, size_t>>& edges,
                 const std::vector<double>& gammas, const std::vector<double>& betas) {
    if (n < 2 || n > 20) throw std::invalid_argument("register size out of range");
    if (gammas.size() != betas.size() || gammas.empty()) {
        throw std::invalid_argument("gamma and beta schedules must match and be non-empty");
    }
    Circuit c(n);
    for (size_t q = 0; q < n; q++) c.h(q);
    for (size_t l = 0; l < gammas.size(); l++) {
        for (const auto& [u, v] : edges) {
            if (u >= n || v >= n || u == v) throw std::invalid_argument("bad edge");
            c.rz(-gammas[l], u);
            c.rz(-gammas[l], v);
            c.cp(2.0 * gammas[l], u, v);
        }
        for (size_t q = 0; q < n; q++) c.rx(2.0 * betas[l], q);
    }
    for (size_t q = 0; q < n; q++) c.measured.insert(q);
    return c;
}

std::vector<std::pair<size_t, size_t>> ring_edges(size_t n) {
    std::vector<std::pair<size_t, size_t>> out;
    for (size_t q = 0; q < n; q++) out.emplace_back(q, (q + 1) % n);
    return out;
}

Circuit gen_benchmark(const std::string& id, const nlohmann::json& params) {
    if (id == "iqft") {
        return gen_iqft(params.at("qubits").get<size_t>(),
                        params.value("value", uint64_t(1)));
    }
    if (id == "qpe") {
        return gen_qpe(params.at("ancillas").get<size_t>(), params.at("phase").get<double>());
    }
    if (id == "bv") {
        return gen_bv(params.at("secret").get<std::string>());
    }
    if (id == "qft_adder") {
        return gen_qft_adder(params.at("qubits").get<size_t>(), params.at("a").get<uint64_t>(),
                             params.at("b").get<uint64_t>());
    }
    if (id == "qft_multiplier") {
        return gen_qft_multiplier(params.at("in_qubits").get<size_t>(),
                                  params.at("out_qubits").get<size_t>(),
                                  params.at("a").get<uint64_t>(), params.at("b").get<uint64_t>());
    }
    if (id == "vqe") {
        size_t n = params.at("qubits").get<size_t>();
        size_t layers = params.value("layers", size_t(1));
        size_t reps = params.value("entangle_reps", size_t(1));
        std::vector<double> angles;
        if (params.contains("angles")) {
            angles = params.at("angles").get<std::vector<double>>();
        } else {
            angles = vqe_default_angles(n, layers, params.value("angle_seed", uint64_t(7)));
        }
        return gen_vqe(n, layers, reps, angles);
    }
    if (id == "qaoa") {
        size_t n = params.at("qubits").get<size_t>();
        std::vector<std::pair<size_t, size_t>> edges;
        if (params.contains("edges")) {
            for (const auto& e : params.at("edges")) {
                edges.emplace_back(e.at(0).get<size_t>(), e.at(1).get<size_t>());
            }
        } else {
            edges = ring_edges(n);
        }
        auto gammas = params.at("gammas").get<std::vector<double>>();
        auto betas = params.at("betas").get<std::vector<double>>();
        return gen_qaoa(n, edges, gammas, betas);
    }
    throw std::invalid_argument("unknown benchmark id: " + id);
}

}  // namespace qutrace

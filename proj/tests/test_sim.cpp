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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "qutrace/exact.hpp"
#include "qutrace/sampler.hpp"

using namespace qutrace;

namespace {

std::mt19937_64 g_rng(555);

Circuit random_circuit(size_t n, size_t depth) {
    std::uniform_real_distribution<double> angle(-3.14159, 3.14159);
    std::uniform_int_distribution<size_t> qubit(0, n - 1);
    std::uniform_int_distribution<int> pick(0, 7);
    Circuit c(n);
    while (c.ops.size() < depth) {
        size_t q = qubit(g_rng);
        switch (pick(g_rng)) {
            case 0: c.h(q); break;
            case 1: c.rx(angle(g_rng), q); break;
            case 2: c.ry(angle(g_rng), q); break;
            case 3: c.rz(angle(g_rng), q); break;
            case 4: c.s(q); break;
            default: {
                if (n < 2) {
                    c.h(q);
                    break;
                }
                size_t r = qubit(g_rng);
                if (r == q) r = (q + 1) % n;
                int which = pick(g_rng) % 3;
                if (which == 0) {
                    c.cz(q, r);
                } else if (which == 1) {
                    c.cx(q, r);
                } else {
                    c.cp(angle(g_rng), q, r);
                }
                break;
            }
        }
    }
    return c;
}

}  // namespace

TEST_CASE("exact backend contract examples") {
    Circuit h1(1);
    h1.h(0);
    Mat rho = simulate_exact(h1, NoiseModel::ideal());
    CHECK(rho(0, 0).real() == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(rho(1, 1).real() == doctest::Approx(0.5).epsilon(1e-12));

    // Depolarized X flip: <Z> = -(1-p).
    double p = 0.13;
    Circuit x1(1);
    x1.x(0);
    NoiseModel nm;
    nm.p1 = p;
    Mat rho_x = simulate_exact(x1, nm);
    CHECK(expectation_density(rho_x, PauliString::parse("Z")) ==
          doctest::Approx(-(1 - p)).epsilon(1e-12));

    Circuit empty(3);
    Mat rho_e = simulate_exact(empty, NoiseModel::ideal());
    CHECK(rho_e(0, 0).real() == doctest::Approx(1.0));

    Circuit big(13);
    big.h(0);
    CHECK_THROWS_AS(simulate_exact(big, NoiseModel::ideal()), std::invalid_argument);
}

TEST_CASE("depolarizing trace preservation over 1000 gates") {
    Circuit c = random_circuit(4, 1000);
    NoiseModel nm;
    nm.p1 = 0.01;
    nm.p2 = 0.03;
    Mat rho = simulate_exact(c, nm);
    CHECK(std::abs(rho.trace().real() - 1.0) < 1e-10);
    CHECK(std::abs(rho.trace().imag()) < 1e-12);
}

TEST_CASE("readout channel contract examples") {
    NoiseModel nm;
    nm.readout = {{0.2, 0.2}};
    Distribution one{{"1", 1.0}};
    auto flipped = readout_channel(one, nm);
    CHECK(flipped["1"] == doctest::Approx(0.8));
    CHECK(flipped["0"] == doctest::Approx(0.2));

    NoiseModel zero;
    auto same = readout_channel(one, zero);
    CHECK(same == one);

    NoiseModel nm2;
    nm2.readout = {{0.1, 0.1}};
    Distribution d00{{"00", 1.0}};
    auto out = readout_channel(d00, nm2);
    CHECK(out["00"] == doctest::Approx(0.81));
    CHECK(out["01"] == doctest::Approx(0.09));
    CHECK(out["10"] == doctest::Approx(0.09));
    CHECK(out["11"] == doctest::Approx(0.01));

    // Confusion-matrix oracle on the full 4x4 channel.
    Mat confusion = Mat::Zero(4, 4);
    for (size_t in = 0; in < 4; in++) {
        Distribution basis{{bitstring_of_index(in, 2), 1.0}};
        auto mapped = readout_channel(basis, nm2);
        for (const auto& [k, v] : mapped) {
            confusion(Eigen::Index(index_of_bitstring(k)), Eigen::Index(in)) = v;
        }
    }
    for (int col = 0; col < 4; col++) {
        CHECK(confusion.col(col).sum().real() == doctest::Approx(1.0).epsilon(1e-12));
    }
}

TEST_CASE("readout channel is a stochastic matrix action with asymmetric flips") {
    NoiseModel nm;
    nm.readout = {{0.07, 0.02}, {0.2, 0.11}, {0.0, 0.3}};
    for (size_t in = 0; in < 8; in++) {
        Distribution basis{{bitstring_of_index(in, 3), 1.0}};
        auto mapped = readout_channel(basis, nm);
        double total = 0;
        for (const auto& [k, v] : mapped) {
            CHECK(v >= 0.0);
            total += v;
        }
        CHECK(total == doctest::Approx(1.0).epsilon(1e-12));
    }
}

TEST_CASE("sampler statistics on the noiseless Hadamard") {
    Circuit c(1);
    c.h(0);
    auto counts = sample(c, NoiseModel::ideal(), 1000000, 99);
    double freq = double(counts.counts["0"]) / double(counts.shots);
    CHECK(std::abs(freq - 0.5) < 0.002);
}

TEST_CASE("sampler determinism") {
    Circuit c = random_circuit(3, 12);
    NoiseModel nm = NoiseModel::uniform(0.01, 0.05, 0.02);
    auto a = sample(c, nm, 5000, 1234);
    auto b = sample(c, nm, 5000, 1234);
    CHECK(a.counts == b.counts);
    CHECK(a.shots == b.shots);
}

TEST_CASE("sampled <Z> matches the depolarized X-flip oracle") {
    double p = 0.1;
    Circuit c(1);
    c.x(0);
    NoiseModel nm;
    nm.p1 = p;
    uint64_t shots = 200000;
    auto counts = sample(c, nm, shots, 7);
    double z = 0;
    for (const auto& [k, v] : counts.counts) {
        z += (k == "0" ? 1.0 : -1.0) * double(v) / double(shots);
    }
    double sigma = std::sqrt((1 - 0.9 * 0.9) / double(shots));
    CHECK(std::abs(z - (-0.9)) < 3 * sigma + 1e-6);
}

TEST_CASE("channel correctness: sampler against the exact backend") {
    // 200 random circuits up to 4 qubits; every single-qubit Z expectation of
    // the seed-pooled sampler lies within 4 sigma of the exact value.
    std::uniform_int_distribution<size_t> npick(1, 4);
    const uint64_t shots = 4000;
    const int seeds = 5;
    for (int trial = 0; trial < 200; trial++) {
        size_t n = npick(g_rng);
        Circuit c = random_circuit(n, 14);
        NoiseModel nm = NoiseModel::uniform(0.005, 0.02, 0.015);
        Mat rho = simulate_exact(c, nm);
        Distribution dist = distribution_from_density(rho, n);
        dist = readout_channel(dist, nm);

        Counts pooled;
        for (int s = 0; s < seeds; s++) {
            pooled.merge(sample(c, nm, shots, uint64_t(trial * 100 + s)));
        }
        for (size_t q = 0; q < n; q++) {
            PauliString obs = PauliString::single(n, q, PauliLetter::Z);
            double exact = expectation(dist, obs);
            double z = 0;
            for (const auto& [k, v] : pooled.counts) {
                int bit = k[n - 1 - q] == '1' ? -1 : 1;
                z += bit * double(v) / double(pooled.shots);
            }
            double sigma = std::sqrt(std::max(1e-12, 1 - exact * exact) / double(pooled.shots));
            CHECK(std::abs(z - exact) < 4 * sigma + 1e-9);
        }
    }
}

TEST_CASE("expectation contract examples") {
    Distribution uniform{{"0", 0.5}, {"1", 0.5}};
    CHECK(expectation(uniform, PauliString::parse("Z")) == doctest::Approx(0.0));

    Distribution zero{{"0", 1.0}};
    CHECK(expectation(zero, PauliString::parse("Z")) == doctest::Approx(1.0));

    Mat rho = 0.5 * (Mat::Identity(2, 2) + 0.6 * pauli_matrix(PauliLetter::X));
    CHECK(expectation_density(rho, PauliString::parse("X")) == doctest::Approx(0.6));

    CHECK_THROWS_AS(expectation(uniform, PauliString::parse("X")), std::invalid_argument);
}

TEST_CASE("hellinger fidelity contract examples and symmetry") {
    Distribution p{{"00", 0.3}, {"01", 0.5}, {"10", 0.2}};
    CHECK(hellinger_fidelity(p, p) == doctest::Approx(1.0).epsilon(1e-12));

    Distribution q{{"11", 1.0}};
    CHECK(hellinger_fidelity(p, q) == doctest::Approx(0.0));

    Distribution half{{"0", 0.5}, {"1", 0.5}};
    Distribution point{{"0", 1.0}};
    CHECK(hellinger_fidelity(half, point) == doctest::Approx(0.5).epsilon(1e-12));

    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int t = 0; t < 100; t++) {
        Distribution a, b;
        double ta = 0, tb = 0;
        for (size_t k = 0; k < 4; k++) {
            a[bitstring_of_index(k, 2)] = u(g_rng);
            b[bitstring_of_index(k, 2)] = u(g_rng);
            ta += a[bitstring_of_index(k, 2)];
            tb += b[bitstring_of_index(k, 2)];
        }
        for (auto& [k, v] : a) v /= ta;
        for (auto& [k, v] : b) v /= tb;
        double f1 = hellinger_fidelity(a, b);
        double f2 = hellinger_fidelity(b, a);
        CHECK(f1 == doctest::Approx(f2).epsilon(1e-14));
        CHECK(f1 >= 0.0);
        CHECK(f1 <= 1.0);
    }
}

TEST_CASE("marginal examples") {
    Distribution uniform2{{"00", 0.25}, {"01", 0.25}, {"10", 0.25}, {"11", 0.25}};
    auto m0 = marginal(uniform2, {0});
    CHECK(m0["0"] == doctest::Approx(0.5));
    CHECK(m0["1"] == doctest::Approx(0.5));

    Distribution point{{"00", 1.0}};
    auto m1 = marginal(point, {1});
    CHECK(m1["0"] == doctest::Approx(1.0));

    Distribution d{{"00", 0.4}, {"01", 0.1}, {"10", 0.4}, {"11", 0.1}};
    auto m = marginal(d, {0});
    CHECK(m["0"] == doctest::Approx(0.8));
    CHECK(m["1"] == doctest::Approx(0.2));
}

TEST_CASE("per-qubit noise overrides and remapping") {
    NoiseModel nm;
    nm.p1 = 0.001;
    nm.p2 = 0.01;
    nm.readout = {{0.01, 0.01}, {0.3, 0.25}, {0.02, 0.02}};
    nm.overrides[1] = QubitNoiseOverride{0.005, 0.08, std::nullopt};

    Gate g1 = make_gate(GateKind::H, {1});
    CHECK(nm.gate_error(g1) == doctest::Approx(0.005));
    Gate g2 = make_gate(GateKind::CZ, {0, 1});
    CHECK(nm.gate_error(g2) == doctest::Approx(0.08));  // max of incident values
    Gate g3 = make_gate(GateKind::CZ, {0, 2});
    CHECK(nm.gate_error(g3) == doctest::Approx(0.01));

    auto remapped = nm.remapped({2, 0}, 2);
    CHECK(remapped.readout_for(0)[0] == doctest::Approx(0.02));
    CHECK(remapped.readout_for(1)[0] == doctest::Approx(0.01));

    auto j = nm.to_json();
    auto back = NoiseModel::from_json(nlohmann::json::parse(j.dump()));
    CHECK(back.p1 == nm.p1);
    CHECK(back.readout.size() == nm.readout.size());
    CHECK(back.overrides.size() == nm.overrides.size());
    CHECK(j.dump() == back.to_json().dump());
}

TEST_CASE("thermal relaxation behind the config flag") {
    NoiseModel nm;
    nm.thermal = ThermalParams{100.0, 120.0, 1.0, 3.0};
    Circuit c(1);
    c.x(0);
    for (int i = 0; i < 20; i++) c.rz(0.0, 0);  // idle-like 1q slots
    Mat rho = simulate_exact(c, nm);
    CHECK(std::abs(rho.trace().real() - 1.0) < 1e-10);
    // Decay toward |0> raises <Z> above the noiseless -1.
    CHECK(expectation_density(rho, PauliString::parse("Z")) > -1.0 + 1e-3);

    auto counts = sample(c, nm, 20000, 5);
    double z = 0;
    for (const auto& [k, v] : counts.counts) {
        z += (k == "0" ? 1.0 : -1.0) * double(v) / double(counts.shots);
    }
    CHECK(z > -1.0 + 1e-3);
}

TEST_CASE("ideal distribution restricted to measured qubits") {
    Circuit c(3);
    c.h(0).cx(0, 1).x(2);
    c.measured = {0, 1};
    auto d = ideal_distribution(c);
    CHECK(d["00"] == doctest::Approx(0.5));
    CHECK(d["11"] == doctest::Approx(0.5));
}

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

#include "qutrace/circuit.hpp"

using namespace qutrace;

namespace {

Circuit random_circuit(std::mt19937_64& rng, size_t n, size_t depth) {
    std::uniform_real_distribution<double> angle(-3.14159, 3.14159);
    std::uniform_int_distribution<size_t> qubit(0, n - 1);
    std::uniform_int_distribution<int> kind_pick(0, 12);
    Circuit c(n);
    GateKind kinds[] = {GateKind::H,  GateKind::X,   GateKind::Y,  GateKind::Z, GateKind::S,
                        GateKind::Sdg, GateKind::RX, GateKind::RY, GateKind::RZ, GateKind::CP,
                        GateKind::CX, GateKind::CZ,  GateKind::SWAP};
    for (size_t i = 0; i < depth; i++) {
        GateKind k = kinds[kind_pick(rng)];
        std::vector<size_t> qs{qubit(rng)};
        if (gate_arity(k) == 2 && n >= 2) {
            size_t q2;
            do {
                q2 = qubit(rng);
            } while (q2 == qs[0]);
            qs.push_back(q2);
        } else if (gate_arity(k) == 2) {
            k = GateKind::H;
        }
        std::vector<double> params(gate_param_count(k));
        for (auto& p : params) p = angle(rng);
        c.append(make_gate(k, qs, params));
    }
    return c;
}

}  // namespace

TEST_CASE("serialization round-trip is the identity") {
    std::mt19937_64 rng(2026);
    for (int trial = 0; trial < 30; trial++) {
        Circuit c = random_circuit(rng, 4, 20);
        c.cuts.push_back({1, 3});
        c.cuts.push_back({2, 7});
        c.measured = {0, 2};
        // A CU1Q payload with non-trivial entries.
        Mat u(2, 2);
        u << cplx(0.6, 0), cplx(0, -0.8), cplx(0, -0.8), cplx(0.6, 0);
        c.cu(0, 3, u);

        auto j = c.to_json();
        Circuit back = Circuit::from_json(nlohmann::json::parse(j.dump()));
        REQUIRE(back.ops.size() == c.ops.size());
        CHECK(back.num_qubits == c.num_qubits);
        CHECK(back.measured == c.measured);
        REQUIRE(back.cuts.size() == c.cuts.size());
        for (size_t i = 0; i < c.cuts.size(); i++) CHECK(back.cuts[i] == c.cuts[i]);
        for (size_t i = 0; i < c.ops.size(); i++) {
            CHECK(back.ops[i].kind == c.ops[i].kind);
            CHECK(back.ops[i].qubits == c.ops[i].qubits);
            REQUIRE(back.ops[i].params.size() == c.ops[i].params.size());
            for (size_t p = 0; p < c.ops[i].params.size(); p++) {
                // Bit-exact for doubles via shortest-round-trip printing.
                CHECK(back.ops[i].params[p] == c.ops[i].params[p]);
            }
        }
        CHECK(j.dump() == back.to_json().dump());
    }
}

TEST_CASE("invalid gates are rejected") {
    Circuit c(2);
    CHECK_THROWS_AS(c.append(make_gate(GateKind::CZ, {0, 0})), std::invalid_argument);
    CHECK_THROWS_AS(c.append(make_gate(GateKind::H, {0, 1})), std::invalid_argument);
    CHECK_THROWS_AS(c.append(make_gate(GateKind::RZ, {0})), std::invalid_argument);
    CHECK_THROWS_AS(c.h(5), std::invalid_argument);
}

TEST_CASE("two-qubit gate metric counts CU1Q as two") {
    Circuit c(3);
    c.h(0).cz(0, 1).cx(1, 2).cp(0.5, 0, 2);
    Mat u = Mat::Identity(2, 2);
    c.cu(0, 1, u);
    CHECK(c.count_two_qubit_gates() == 5);
}

TEST_CASE("circuit unitary composes left to right") {
    Circuit c(1);
    c.h(0).z(0).h(0);  // HZH = X
    Mat u = circuit_unitary(c);
    CHECK((u - pauli_matrix(PauliLetter::X)).norm() < 1e-12);
}

TEST_CASE("unknown json gate kind is rejected") {
    auto j = nlohmann::json::parse(R"({"n":1,"ops":[{"kind":"NOPE","qubits":[0]}]})");
    CHECK_THROWS_AS(Circuit::from_json(j), std::invalid_argument);
}

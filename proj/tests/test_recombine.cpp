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

#include "qutrace/recombine.hpp"

using namespace qutrace;

namespace {

std::mt19937_64 g_rng(777);

Distribution random_distribution(size_t n) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    Distribution d;
    double total = 0;
    for (size_t k = 0; k < (size_t(1) << n); k++) {
        double v = u(g_rng);
        d[bitstring_of_index(k, n)] = v;
        total += v;
    }
    for (auto& [k, v] : d) v /= total;
    return d;
}

LocalResult local_z(std::vector<size_t> subset, Distribution dist) {
    LocalResult out;
    out.subset = std::move(subset);
    out.basis = std::vector<PauliLetter>(out.subset.size(), PauliLetter::Z);
    out.dist = std::move(dist);
    out.provenance = "test";
    return out;
}

}  // namespace

TEST_CASE("bayes update contract examples") {
    Distribution uniform{{"00", 0.25}, {"01", 0.25}, {"10", 0.25}, {"11", 0.25}};
    auto certain = bayes_update(uniform, local_z({0}, {{"0", 1.0}}));
    CHECK(certain["00"] == doctest::Approx(0.5));
    CHECK(certain["10"] == doctest::Approx(0.5));
    CHECK(certain.count("01") + certain.count("11") == 0);

    // Matching marginal is a fixed point.
    Distribution d{{"00", 0.4}, {"01", 0.1}, {"10", 0.4}, {"11", 0.1}};
    auto fixed = bayes_update(d, local_z({0}, marginal(d, {0})));
    for (const auto& [k, v] : d) CHECK(fixed[k] == doctest::Approx(v).epsilon(1e-12));

    auto reweighted = bayes_update(d, local_z({0}, {{"0", 0.5}, {"1", 0.5}}));
    CHECK(reweighted["00"] == doctest::Approx(0.25));
    CHECK(reweighted["01"] == doctest::Approx(0.25));
    CHECK(reweighted["10"] == doctest::Approx(0.25));
    CHECK(reweighted["11"] == doctest::Approx(0.25));
}

TEST_CASE("bayes update marginal match and conditional preservation") {
    std::uniform_int_distribution<size_t> npick(2, 5);
    for (int trial = 0; trial < 300; trial++) {
        size_t n = npick(g_rng);
        Distribution global = random_distribution(n);
        std::uniform_int_distribution<size_t> qpick(0, n - 1);
        std::vector<size_t> subset{qpick(g_rng)};
        if (n > 2 && trial % 2 == 0) {
            size_t second;
            do {
                second = qpick(g_rng);
            } while (second == subset[0]);
            subset.push_back(second);
            std::sort(subset.begin(), subset.end());
        }
        Distribution m = random_distribution(subset.size());
        auto updated = bayes_update(global, local_z(subset, m));

        auto updated_marg = marginal(updated, subset);
        for (const auto& [k, v] : m) {
            CHECK(std::abs(updated_marg[k] - v) < 1e-12);
        }
        // Conditionals preserved on full-support patterns.
        auto global_marg = marginal(global, subset);
        for (const auto& [key, p] : global) {
            std::string pat(subset.size(), '0');
            for (size_t i = 0; i < subset.size(); i++) {
                pat[subset.size() - 1 - i] = key[n - 1 - subset[i]];
            }
            if (global_marg[pat] <= 0 || m.count(pat) == 0 || m.at(pat) <= 0) continue;
            double cond_before = p / global_marg[pat];
            double cond_after = (updated.count(key) ? updated.at(key) : 0.0) / updated_marg[pat];
            CHECK(std::abs(cond_before - cond_after) < 1e-12);
        }
    }
}

TEST_CASE("zero-marginal mass spreads uniformly over completions") {
    Distribution global{{"00", 0.5}, {"10", 0.5}};  // qubit 0 never reads 1
    auto updated = bayes_update(global, local_z({0}, {{"0", 0.7}, {"1", 0.3}}));
    CHECK(updated["01"] == doctest::Approx(0.15));
    CHECK(updated["11"] == doctest::Approx(0.15));
    auto marg = marginal(updated, {0});
    CHECK(marg["1"] == doctest::Approx(0.3).epsilon(1e-12));
    CHECK(is_normalized(updated));
}

TEST_CASE("non-Z local distributions are rejected for the global update") {
    Distribution global{{"0", 0.5}, {"1", 0.5}};
    LocalResult local;
    local.subset = {0};
    local.basis = {PauliLetter::X};
    local.dist = {{"0", 1.0}};
    CHECK_THROWS_AS(bayes_update(global, local), std::invalid_argument);
}

TEST_CASE("layer state pushes expectations through lifted gates") {
    LayerState st;
    st.expectations["X"] = 0.6;
    st.expectations["Z"] = 0.3;
    // Through a lifted H: Z <- X, X <- Z.
    auto pushed = st.pushed_through({make_gate(GateKind::H, {0})}, {0});
    CHECK(pushed.expectations.at("Z") == doctest::Approx(0.6));
    CHECK(pushed.expectations.at("X") == doctest::Approx(0.3));
    // Y pulls back to the unavailable upstream Y and drops out.
    CHECK(pushed.expectations.count("Y") == 0);
}

TEST_CASE("feed-forward refines upstream records and is idempotent on consistent copies") {
    // A copy with a two-row joint whose upstream marginal disagrees with the
    // mitigated value gets rescaled; a consistent one is untouched.
    CircuitCopy copy;
    copy.subset = {0};
    copy.upstream_basis = {PauliLetter::Z};
    copy.measure_basis = {PauliLetter::Z};
    copy.payload = Circuit(1);
    copy.prefix = Circuit(1);

    CopyResult noisy;
    noisy.subset_size = 1;
    noisy.has_upstream = true;
    noisy.joint = {0.32, 0.08, 0.48, 0.12};  // marginal (0.4, 0.6)

    LayerState prev;
    prev.expectations["Z"] = 0.6;  // wants marginal (0.8, 0.2)

    std::vector<CircuitCopy> copies{copy};
    std::vector<CopyResult> results{noisy};
    std::vector<std::string> warnings;
    feed_forward(prev, copies, results, warnings);
    auto marg = results[0].upstream_marginal();
    CHECK(marg[0] == doctest::Approx(0.8).epsilon(1e-12));
    CHECK(marg[1] == doctest::Approx(0.2).epsilon(1e-12));
    // Conditionals preserved.
    CHECK(results[0].joint[0] / marg[0] == doctest::Approx(0.8).epsilon(1e-12));
    CHECK(results[0].joint[2] / marg[1] == doctest::Approx(0.8).epsilon(1e-12));

    // Idempotence.
    auto before = results[0].joint;
    feed_forward(prev, copies, results, warnings);
    for (size_t i = 0; i < before.size(); i++) {
        CHECK(results[0].joint[i] == doctest::Approx(before[i]).epsilon(1e-12));
    }

    // Missing basis passes through with a warning.
    LayerState empty;
    std::vector<std::string> warn2;
    auto pre = results[0].joint;
    feed_forward(empty, copies, results, warn2);
    CHECK(results[0].joint == pre);
    CHECK(!warn2.empty());
}

TEST_CASE("run_multilayer with zero checked layers returns the raw global") {
    Circuit c(2);
    c.h(0).cz(0, 1).h(0);
    c.measured = {0, 1};
    MultilayerOptions opt;
    opt.noise = NoiseModel::uniform(0.01, 0.02, 0.05);
    opt.layers_to_check = 0;
    auto out = run_multilayer(c, {{0}}, opt);
    CHECK(hellinger_fidelity(out.global_raw, out.global_refined) ==
          doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("run_multilayer on a noiseless device returns the ideal distribution") {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> angle(-1.5, 1.5);
    Circuit c(3);
    for (size_t q = 0; q < 3; q++) c.ry(angle(rng), q);
    c.cz(0, 1).cz(1, 2);
    for (size_t q = 0; q < 3; q++) c.ry(angle(rng), q);
    c.cz(0, 1).cz(1, 2);
    for (size_t q = 0; q < 3; q++) c.measured.insert(q);

    MultilayerOptions opt;
    opt.noise = NoiseModel::ideal();
    auto out = run_multilayer(c, {{0}, {1}, {2}}, opt);
    Distribution ideal = ideal_distribution(c);
    CHECK(hellinger_fidelity(out.global_refined, ideal) == doctest::Approx(1.0).epsilon(1e-9));
    for (const auto& so : out.per_subset) CHECK_FALSE(so.skipped);
}

TEST_CASE("anticommuting noise on checked wires: refined output is ideal") {
    // Computational-basis path: RY(pi) layers keep states diagonal, CZ
    // blocks act as phases, the ideal output is a product distribution, and
    // readout flips are X-type errors the checks absorb exactly.
    Circuit c(3);
    const double pi = 3.14159265358979323846;
    c.ry(pi, 0).ry(pi, 1).ry(0.0, 2);
    c.cz(0, 1).cz(1, 2);
    c.ry(pi, 0).ry(0.0, 1).ry(pi, 2);
    c.cz(0, 1).cz(1, 2);
    for (size_t q = 0; q < 3; q++) c.measured.insert(q);

    NoiseModel nm;
    nm.readout = {{0.3, 0.25}, {0.15, 0.1}, {0.2, 0.2}};

    MultilayerOptions opt;
    opt.noise = nm;
    auto out = run_multilayer(c, {{0}, {1}, {2}}, opt);
    Distribution ideal = ideal_distribution(c);
    CHECK(hellinger_fidelity(out.global_raw, ideal) < 0.7);
    CHECK(hellinger_fidelity(out.global_refined, ideal) > 1.0 - 1e-6);
}

TEST_CASE("noisy two-layer chain improves the global fidelity") {
    // Shallow rotations give structured marginals the refinement can act on.
    std::mt19937_64 rng(29);
    std::uniform_real_distribution<double> angle(0.15, 0.6);
    Circuit c(4);
    for (int layer = 0; layer < 2; layer++) {
        for (size_t q = 0; q < 4; q++) c.ry(angle(rng), q);
        for (size_t q = 0; q + 1 < 4; q++) c.cz(q, q + 1);
    }
    for (size_t q = 0; q < 4; q++) c.ry(angle(rng), q);
    for (size_t q = 0; q < 4; q++) c.measured.insert(q);

    NoiseModel nm = NoiseModel::uniform(0.002, 0.02, 0.08);
    MultilayerOptions opt;
    opt.noise = nm;
    auto out = run_multilayer(c, {{0}, {1}, {2}, {3}}, opt);
    Distribution ideal = ideal_distribution(c);
    double raw = hellinger_fidelity(out.global_raw, ideal);
    double refined = hellinger_fidelity(out.global_refined, ideal);
    CHECK(refined > raw);
    for (const auto& so : out.per_subset) {
        CHECK_FALSE(so.skipped);
        CHECK(so.budget.total_copies > 0);
        CHECK(so.budget.copies_per_check_max <= 30);
    }
}

TEST_CASE("checking more layers helps at least as much") {
    std::mt19937_64 rng(31);
    std::uniform_real_distribution<double> angle(0.2, 0.6);
    Circuit c(3);
    for (int layer = 0; layer < 3; layer++) {
        for (size_t q = 0; q < 3; q++) c.ry(angle(rng), q);
        for (size_t q = 0; q + 1 < 3; q++) c.cz(q, q + 1);
    }
    for (size_t q = 0; q < 3; q++) c.ry(angle(rng), q);
    for (size_t q = 0; q < 3; q++) c.measured.insert(q);
    NoiseModel nm = NoiseModel::uniform(0.002, 0.02, 0.05);
    Distribution ideal = ideal_distribution(c);

    double last = -1.0;
    for (int k = 1; k <= 3; k++) {
        MultilayerOptions opt;
        opt.noise = nm;
        opt.layers_to_check = k;
        auto out = run_multilayer(c, {{0}, {1}, {2}}, opt);
        double f = hellinger_fidelity(out.global_refined, ideal);
        if (last >= 0) CHECK(f >= last - 5e-3);
        last = f;
    }
}

TEST_CASE("symmetry replication produces the permuted local distributions") {
    size_t n = 4;
    double gamma = 0.8, beta = 0.5;
    Circuit c(n);
    for (size_t q = 0; q < n; q++) c.h(q);
    for (size_t q = 0; q < n; q++) {
        size_t r = (q + 1) % n;
        c.rz(-gamma, q).rz(-gamma, r).cp(2 * gamma, q, r);
    }
    for (size_t q = 0; q < n; q++) c.rx(2 * beta, q);
    for (size_t q = 0; q < n; q++) c.measured.insert(q);

    MultilayerOptions opt;
    opt.noise = NoiseModel::uniform(0.001, 0.01, 0.02);
    opt.automorphisms = {{1, 2, 3, 0}, {2, 3, 0, 1}, {3, 0, 1, 2}};
    auto out = run_multilayer(c, {{0, 1}, {1, 2}, {2, 3}, {0, 3}}, opt);
    size_t executed = 0, replicated = 0;
    for (const auto& so : out.per_subset) {
        CHECK_FALSE(so.skipped);
        if (so.replicated) {
            replicated++;
        } else {
            executed++;
        }
    }
    CHECK(executed == 1);
    CHECK(replicated == 3);
}

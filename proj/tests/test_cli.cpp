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

#include <fstream>

#include "qutrace/experiment.hpp"

using namespace qutrace;

namespace {

nlohmann::json small_config() {
    return nlohmann::json{
        {"schema_version", 1},
        {"benchmark", {{"id", "bv"}, {"secret", "101"}}},
        {"noise",
         {{"p1", 0.001}, {"p2", 0.01}, {"readout", {{0.08, 0.08}}}}},
        {"methods", {"original", "jigsaw", "qutracer"}},
        {"subset_size", 1},
        {"shots", 4000},
        {"seeds", {3}},
        {"backend", "exact"},
    };
}

}  // namespace

TEST_CASE("config round-trip and validation") {
    auto cfg = ExperimentConfig::from_json(small_config());
    CHECK(cfg.benchmark_id == "bv");
    CHECK(cfg.methods.size() == 3);
    auto j = cfg.to_json();
    auto back = ExperimentConfig::from_json(nlohmann::json::parse(j.dump()));
    CHECK(back.to_json().dump() == j.dump());

    auto bad = small_config();
    bad["unknown_field"] = 1;
    CHECK_THROWS_WITH_AS(ExperimentConfig::from_json(bad), doctest::Contains("unknown key"),
                         std::invalid_argument);

    auto bad_method = small_config();
    bad_method["methods"] = {"original", "nope"};
    CHECK_THROWS_AS(ExperimentConfig::from_json(bad_method), std::invalid_argument);

    auto bad_version = small_config();
    bad_version["schema_version"] = 9;
    CHECK_THROWS_AS(ExperimentConfig::from_json(bad_version), std::invalid_argument);
}

TEST_CASE("single-method run produces one fidelity row per seed") {
    auto j = small_config();
    j["methods"] = {"original"};
    j["seeds"] = {1, 2};
    auto cfg = ExperimentConfig::from_json(j);
    auto report = run_experiment(cfg);
    REQUIRE(report.rows.size() == 2);
    for (const auto& row : report.rows) {
        CHECK(row.method == "original");
        CHECK(row.fidelity >= 0.0);
        CHECK(row.fidelity <= 1.0);
        CHECK(row.error.empty());
    }
    CHECK_FALSE(report.partial_failure);
}

TEST_CASE("sweep configs enumerate one row per point per method") {
    auto j = small_config();
    j["methods"] = {"original", "qutracer"};
    j["sweep"] = {{"param", "readout"}, {"values", {0.02, 0.08, 0.2}}};
    auto cfg = ExperimentConfig::from_json(j);
    auto report = run_experiment(cfg);
    CHECK(report.rows.size() == 6);

    auto csv = emit_plotdata(report);
    size_t lines = std::count(csv.begin(), csv.end(), '\n');
    CHECK(lines == 7);  // header + 6 rows

    Report empty;
    empty.config = cfg;
    CHECK(emit_plotdata(empty) == "sweep_value,method,fidelity\n");
}

TEST_CASE("reports are byte-identical across reruns") {
    auto cfg = ExperimentConfig::from_json(small_config());
    auto a = run_experiment(cfg).to_json().dump();
    auto b = run_experiment(cfg).to_json().dump();
    CHECK(a == b);
}

TEST_CASE("partial method failure is recorded and the run continues") {
    auto j = small_config();
    // The tomographic baseline rejects multi-segment circuits; a two-layer
    // ansatz triggers it while the other methods proceed.
    j["benchmark"] = {{"id", "vqe"}, {"qubits", 3}, {"layers", 2}};
    j["methods"] = {"original", "sqem"};
    auto cfg = ExperimentConfig::from_json(j);
    auto report = run_experiment(cfg);
    REQUIRE(report.rows.size() == 2);
    CHECK(report.rows[0].error.empty());
    CHECK_FALSE(report.rows[1].error.empty());
    CHECK(report.partial_failure);
}

TEST_CASE("sweeping layers rebuilds the benchmark per point") {
    auto j = small_config();
    j["benchmark"] = {{"id", "vqe"}, {"qubits", 3}, {"layers", 1}};
    j["methods"] = {"original"};
    j["sweep"] = {{"param", "entangle_reps"}, {"values", {1, 3}}};
    auto cfg = ExperimentConfig::from_json(j);
    auto report = run_experiment(cfg);
    REQUIRE(report.rows.size() == 2);
    // Deeper entanglement means more gates and lower fidelity.
    CHECK(report.rows[0].avg_two_qubit_gates < report.rows[1].avg_two_qubit_gates);
}

TEST_CASE("report JSON round-trips through the reader") {
    auto cfg = ExperimentConfig::from_json(small_config());
    auto report = run_experiment(cfg);
    auto parsed = Report::from_json(nlohmann::json::parse(report.to_json().dump()));
    CHECK(parsed.rows.size() == report.rows.size());
    CHECK(parsed.to_csv() == report.to_csv());
}

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

#include "qutrace/experiment.hpp"

#include <atomic>
#include <cmath>
#include <set>
#include <sstream>
#include <stdexcept>
#include <thread>

namespace qutrace {

namespace {

const std::set<std::string> kTopKeys = {
    "schema_version", "benchmark", "noise",  "methods", "subset_size", "shots",
    "seeds",          "layers_to_check",     "backend", "remap",       "symmetry",
    "sweep"};
const std::set<std::string> kSweepKeys = {"param", "values"};
const std::set<std::string> kMethods = {"original", "jigsaw", "subsetting", "sqem", "qutracer"};
const std::set<std::string> kSweepParams = {"", "readout", "entangle_reps", "layers",
                                            "layers_to_check"};

void reject_unknown(const nlohmann::json& j, const std::set<std::string>& allowed,
                    const std::string& where) {
    for (const auto& [key, value] : j.items()) {
        if (!allowed.count(key)) {
            throw std::invalid_argument("unknown key \"" + key + "\" in " + where);
        }
    }
}

}  // namespace

ExperimentConfig ExperimentConfig::from_json(const nlohmann::json& j) {
    reject_unknown(j, kTopKeys, "config");
    ExperimentConfig cfg;
    cfg.schema_version = j.at("schema_version").get<int>();
    if (cfg.schema_version != 1) throw std::invalid_argument("unsupported schema_version");
    const auto& bench = j.at("benchmark");
    cfg.benchmark_id = bench.at("id").get<std::string>();
    cfg.benchmark_params = bench;
    cfg.benchmark_params.erase("id");
    cfg.noise = NoiseModel::from_json(j.at("noise"));
    for (const auto& m : j.at("methods")) {
        std::string name = m.get<std::string>();
        if (!kMethods.count(name)) throw std::invalid_argument("unknown method: " + name);
        cfg.methods.push_back(name);
    }
    cfg.subset_size = j.value("subset_size", size_t(1));
    if (cfg.subset_size < 1 || cfg.subset_size > 2) {
        throw std::invalid_argument("subset_size must be 1 or 2");
    }
    cfg.shots = j.value("shots", uint64_t(100000));
    if (j.contains("seeds")) cfg.seeds = j.at("seeds").get<std::vector<uint64_t>>();
    if (cfg.seeds.empty()) throw std::invalid_argument("at least one seed required");
    cfg.layers_to_check = j.value("layers_to_check", -1);
    std::string backend = j.value("backend", std::string("exact"));
    if (backend != "exact" && backend != "sampler") {
        throw std::invalid_argument("backend must be exact or sampler");
    }
    cfg.sampled = backend == "sampler";
    cfg.remap = j.value("remap", true);
    cfg.symmetry = j.value("symmetry", std::string(""));
    if (cfg.symmetry != "" && cfg.symmetry != "ring") {
        throw std::invalid_argument("symmetry must be empty or \"ring\"");
    }
    if (j.contains("sweep")) {
        reject_unknown(j.at("sweep"), kSweepKeys, "sweep");
        cfg.sweep_param = j.at("sweep").at("param").get<std::string>();
        if (!kSweepParams.count(cfg.sweep_param)) {
            throw std::invalid_argument("unknown sweep param: " + cfg.sweep_param);
        }
        cfg.sweep_values = j.at("sweep").at("values").get<std::vector<double>>();
    }
    // Validate the benchmark parameters by generating once.
    gen_benchmark(cfg.benchmark_id, cfg.benchmark_params);
    return cfg;
}

nlohmann::ordered_json ExperimentConfig::to_json() const {
    nlohmann::ordered_json j;
    j["schema_version"] = schema_version;
    nlohmann::ordered_json bench;
    bench["id"] = benchmark_id;
    for (const auto& [k, v] : benchmark_params.items()) bench[k] = v;
    j["benchmark"] = bench;
    j["noise"] = noise.to_json();
    j["methods"] = methods;
    j["subset_size"] = subset_size;
    j["shots"] = shots;
    j["seeds"] = seeds;
    j["layers_to_check"] = layers_to_check;
    j["backend"] = sampled ? "sampler" : "exact";
    j["remap"] = remap;
    j["symmetry"] = symmetry;
    if (!sweep_param.empty()) {
        j["sweep"] = {{"param", sweep_param}, {"values", sweep_values}};
    }
    return j;
}

nlohmann::ordered_json Report::to_json() const {
    nlohmann::ordered_json j;
    j["schema_version"] = 1;
    j["config"] = config.to_json();
    j["rows"] = nlohmann::ordered_json::array();
    for (const auto& r : rows) {
        nlohmann::ordered_json row;
        row["sweep_value"] = r.sweep_value;
        row["seed"] = r.seed;
        row["method"] = r.method;
        row["fidelity"] = r.fidelity;
        row["normalized_shots"] = r.normalized_shots;
        row["avg_two_qubit_gates"] = r.avg_two_qubit_gates;
        if (!r.error.empty()) row["error"] = r.error;
        j["rows"].push_back(row);
    }
    j["warnings"] = warnings;
    j["partial_failure"] = partial_failure;
    return j;
}

Report Report::from_json(const nlohmann::json& j) {
    Report report;
    report.config = ExperimentConfig::from_json(j.at("config"));
    for (const auto& row : j.at("rows")) {
        ReportRow r;
        r.sweep_value = row.at("sweep_value").get<double>();
        r.seed = row.at("seed").get<uint64_t>();
        r.method = row.at("method").get<std::string>();
        r.fidelity = row.at("fidelity").get<double>();
        r.normalized_shots = row.at("normalized_shots").get<double>();
        r.avg_two_qubit_gates = row.at("avg_two_qubit_gates").get<double>();
        if (row.contains("error")) r.error = row.at("error").get<std::string>();
        report.rows.push_back(r);
    }
    if (j.contains("warnings")) {
        for (const auto& w : j.at("warnings")) report.warnings.push_back(w.get<std::string>());
    }
    report.partial_failure = j.value("partial_failure", false);
    return report;
}

std::string Report::to_csv() const {
    std::ostringstream ss;
    ss << "sweep_value,seed,method,fidelity,normalized_shots,avg_two_qubit_gates,error\n";
    for (const auto& r : rows) {
        ss << r.sweep_value << ',' << r.seed << ',' << r.method << ',' << r.fidelity << ','
           << r.normalized_shots << ',' << r.avg_two_qubit_gates << ',' << r.error << '\n';
    }
    return ss.str();
}

namespace {

struct GridPoint {
    double sweep_value = 0.0;
    uint64_t seed = 0;
};

Circuit benchmark_for(const ExperimentConfig& cfg, double sweep_value) {
    nlohmann::json params = cfg.benchmark_params;
    if (cfg.sweep_param == "entangle_reps") {
        params["entangle_reps"] = size_t(std::llround(sweep_value));
    } else if (cfg.sweep_param == "layers") {
        params["layers"] = size_t(std::llround(sweep_value));
        if (cfg.benchmark_id == "qaoa") {
            // Layer sweeps reuse one schedule entry per layer.
            size_t layers = size_t(std::llround(sweep_value));
            std::vector<double> gammas(params.at("gammas").get<std::vector<double>>());
            std::vector<double> betas(params.at("betas").get<std::vector<double>>());
            gammas.resize(layers, gammas.empty() ? 0.4 : gammas[0]);
            betas.resize(layers, betas.empty() ? 0.3 : betas[0]);
            params["gammas"] = gammas;
            params["betas"] = betas;
            params.erase("layers");
        }
    }
    return gen_benchmark(cfg.benchmark_id, params);
}

NoiseModel noise_for(const ExperimentConfig& cfg, double sweep_value) {
    NoiseModel nm = cfg.noise;
    if (cfg.sweep_param == "readout") {
        nm.readout = {{sweep_value, sweep_value}};
    }
    return nm;
}

int layers_to_check_for(const ExperimentConfig& cfg, double sweep_value) {
    if (cfg.sweep_param == "layers_to_check") return int(std::llround(sweep_value));
    return cfg.layers_to_check;
}

}  // namespace

Report run_experiment(const ExperimentConfig& cfg, size_t jobs) {
    Report report;
    report.config = cfg;
    std::vector<double> sweeps = cfg.sweep_values;
    if (sweeps.empty()) sweeps.push_back(0.0);

    std::vector<GridPoint> grid;
    for (double v : sweeps) {
        for (uint64_t seed : cfg.seeds) grid.push_back({v, seed});
    }
    std::vector<std::vector<ReportRow>> rows_per_point(grid.size());
    std::vector<std::vector<std::string>> warnings_per_point(grid.size());

    auto run_point = [&](size_t gi) {
        const GridPoint& point = grid[gi];
        Circuit circuit = benchmark_for(cfg, point.sweep_value);
        NoiseModel nm = noise_for(cfg, point.sweep_value);
        Distribution ideal = ideal_distribution(circuit);

        MethodOptions mo;
        mo.noise = nm;
        mo.sampled = cfg.sampled;
        mo.shots = cfg.shots;
        mo.seed = point.seed;
        mo.subset_size = cfg.subset_size;
        mo.layers_to_check = layers_to_check_for(cfg, point.sweep_value);
        mo.remap = cfg.remap;
        if (cfg.symmetry == "ring") {
            size_t n = circuit.num_qubits;
            for (size_t shift = 1; shift < n; shift++) {
                std::vector<size_t> perm(n);
                for (size_t q = 0; q < n; q++) perm[q] = (q + shift) % n;
                mo.automorphisms.push_back(perm);
            }
        }

        for (const auto& method : cfg.methods) {
            ReportRow row;
            row.sweep_value = point.sweep_value;
            row.seed = point.seed;
            row.method = method;
            try {
                MethodOutcome mr = run_method(method, circuit, mo);
                row.fidelity = hellinger_fidelity(mr.dist, ideal);
                row.normalized_shots = mr.normalized_shots;
                row.avg_two_qubit_gates = mr.avg_two_qubit_gates;
                for (const auto& w : mr.warnings) {
                    warnings_per_point[gi].push_back(method + ": " + w);
                }
            } catch (const std::exception& e) {
                row.error = e.what();
            }
            rows_per_point[gi].push_back(std::move(row));
        }
    };

    if (jobs <= 1 || grid.size() <= 1) {
        for (size_t gi = 0; gi < grid.size(); gi++) run_point(gi);
    } else {
        std::atomic<size_t> next{0};
        auto worker = [&]() {
            while (true) {
                size_t gi = next.fetch_add(1);
                if (gi >= grid.size()) return;
                run_point(gi);
            }
        };
        std::vector<std::thread> pool;
        for (size_t t = 0; t < std::min(jobs, grid.size()); t++) pool.emplace_back(worker);
        for (auto& th : pool) th.join();
    }

    for (size_t gi = 0; gi < grid.size(); gi++) {
        for (auto& row : rows_per_point[gi]) {
            if (!row.error.empty()) report.partial_failure = true;
            report.rows.push_back(std::move(row));
        }
        std::set<std::string> seen;
        for (auto& w : warnings_per_point[gi]) {
            if (seen.insert(w).second) report.warnings.push_back(std::move(w));
        }
    }
    return report;
}

std::string emit_plotdata(const Report& report) {
    std::ostringstream ss;
    ss << "sweep_value,method,fidelity\n";
    for (const auto& r : report.rows) {
        if (!r.error.empty()) continue;
        ss << r.sweep_value << ',' << r.method << ',' << r.fidelity << '\n';
    }
    return ss.str();
}

}  // namespace qutrace

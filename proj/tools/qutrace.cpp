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

#include <CLI11.hpp>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>

#include "qutrace/experiment.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitValidation = 2;
constexpr int kExitPartialFailure = 3;

nlohmann::json load_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open " + path);
    nlohmann::json j;
    in >> j;
    return j;
}

void write_file(const std::filesystem::path& path, const std::string& content) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << content;
}

size_t resolve_jobs(size_t cli_jobs) {
    if (const char* env = std::getenv("QUTRACE_JOBS")) {
        char* end = nullptr;
        unsigned long v = std::strtoul(env, &end, 10);
        if (end && *end == '\0' && v >= 1) return size_t(v);
    }
    return cli_jobs;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"noisy-circuit simulation and subset-tracing error mitigation toolkit"};
    app.require_subcommand(1);

    std::string config_path;
    std::string in_path;
    std::string out_dir = ".";
    uint64_t seed_override = 0;
    bool seed_set = false;
    std::string backend_override;
    size_t jobs = 1;

    auto* gen = app.add_subcommand("gen", "generate a benchmark circuit");
    gen->add_option("--config", config_path, "benchmark spec JSON: {\"id\":..., params...}")
        ->required();
    gen->add_option("--out", out_dir, "output directory");

    auto* plan = app.add_subcommand("plan", "plan subset cuts and checks for a circuit");
    plan->add_option("--config", config_path,
                     "plan spec JSON: {\"benchmark\"|\"circuit\":..., \"subset\": [...]}")
        ->required();
    plan->add_option("--out", out_dir, "output directory");

    auto* run = app.add_subcommand("run", "run an experiment config");
    run->add_option("--config", config_path, "experiment config JSON")->required();
    run->add_option("--out", out_dir, "output directory");
    run->add_option("--seed", seed_override, "override the seed list with one seed")
        ->each([&](const std::string&) { seed_set = true; });
    run->add_option("--backend", backend_override, "exact|sampler override");
    run->add_option("--jobs", jobs, "worker pool size (QUTRACE_JOBS overrides)");

    auto* report_cmd = app.add_subcommand("report", "re-emit CSV views of a report");
    report_cmd->add_option("--in", in_path, "report JSON path")->required();
    report_cmd->add_option("--out", out_dir, "output directory");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? kExitOk : kExitValidation;
    }

    try {
        std::filesystem::create_directories(out_dir);
        if (gen->parsed()) {
            auto spec = load_json(config_path);
            std::string id = spec.at("id").get<std::string>();
            nlohmann::json params = spec;
            params.erase("id");
            qutrace::Circuit c = qutrace::gen_benchmark(id, params);
            auto path = std::filesystem::path(out_dir) / (id + "_circuit.json");
            write_file(path, c.to_json().dump(2) + "\n");
            std::cout << path.string() << "\n";
            return kExitOk;
        }
        if (plan->parsed()) {
            auto spec = load_json(config_path);
            qutrace::Circuit c;
            if (spec.contains("circuit")) {
                c = qutrace::Circuit::from_json(spec.at("circuit"));
            } else {
                auto bench = spec.at("benchmark");
                std::string id = bench.at("id").get<std::string>();
                bench.erase("id");
                c = qutrace::gen_benchmark(id, bench);
            }
            auto subset = spec.at("subset").get<std::vector<size_t>>();
            auto subset_plan = qutrace::place_cuts(c, subset);
            uint64_t shots = spec.value("shots", uint64_t(100000));
            std::vector<size_t> copies_per_layer;
            qutrace::Mat tracked = qutrace::zero_density(subset_plan.subset.size());
            bool first = true;
            for (size_t k = 0; k < subset_plan.layers.size(); k++) {
                if (subset_plan.layers[k].bypassed) {
                    copies_per_layer.push_back(0);
                    continue;
                }
                if (first) {
                    tracked = qutrace::lift_gates_apply(
                        tracked, subset_plan.layers[k].lift_before, subset_plan.subset);
                }
                auto ensemble =
                    qutrace::build_layer_copies(subset_plan, k, tracked, first);
                copies_per_layer.push_back(ensemble.copies.size());
                first = false;
            }
            subset_plan.budget = qutrace::compute_budget(subset_plan, copies_per_layer, shots);
            auto path = std::filesystem::path(out_dir) / "plan.json";
            write_file(path, subset_plan.to_json().dump(2) + "\n");
            std::cout << path.string() << "\n";
            return kExitOk;
        }
        if (run->parsed()) {
            auto j = load_json(config_path);
            if (seed_set) j["seeds"] = std::vector<uint64_t>{seed_override};
            if (!backend_override.empty()) j["backend"] = backend_override;
            qutrace::ExperimentConfig cfg = qutrace::ExperimentConfig::from_json(j);
            qutrace::Report report = qutrace::run_experiment(cfg, resolve_jobs(jobs));
            auto dir = std::filesystem::path(out_dir);
            write_file(dir / "report.json", report.to_json().dump(2) + "\n");
            write_file(dir / "report.csv", report.to_csv());
            write_file(dir / "plotdata.csv", qutrace::emit_plotdata(report));
            std::cout << (dir / "report.json").string() << "\n";
            for (const auto& w : report.warnings) std::cerr << "warning: " << w << "\n";
            if (report.partial_failure) {
                std::cerr << "some methods failed; see the report rows\n";
                return kExitPartialFailure;
            }
            return kExitOk;
        }
        if (report_cmd->parsed()) {
            qutrace::Report report = qutrace::Report::from_json(load_json(in_path));
            auto dir = std::filesystem::path(out_dir);
            write_file(dir / "report.csv", report.to_csv());
            write_file(dir / "plotdata.csv", qutrace::emit_plotdata(report));
            std::cout << (dir / "report.csv").string() << "\n";
            return kExitOk;
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitValidation;
    }
    return kExitValidation;
}

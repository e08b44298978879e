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

#include "qutrace/noise.hpp"

#include <stdexcept>

namespace qutrace {

void validate_probability(double p, const char* what) {
    if (!(p >= 0.0 && p <= 1.0)) {
        throw std::invalid_argument(std::string(what) + " must lie in [0,1]");
    }
}

NoiseModel NoiseModel::uniform(double p1, double p2, double readout_flip) {
    validate_probability(p1, "p1");
    validate_probability(p2, "p2");
    validate_probability(readout_flip, "readout");
    NoiseModel nm;
    nm.p1 = p1;
    nm.p2 = p2;
    nm.readout = {{readout_flip, readout_flip}};
    return nm;
}

double NoiseModel::gate_error(const Gate& g) const {
    if (g.qubits.size() == 1) {
        auto it = overrides.find(g.qubits[0]);
        if (it != overrides.end() && it->second.p1) return *it->second.p1;
        return p1;
    }
    double p = p2;
    for (size_t q : g.qubits) {
        auto it = overrides.find(q);
        if (it != overrides.end() && it->second.p2) p = std::max(p, *it->second.p2);
    }
    return p;
}

std::array<double, 2> NoiseModel::readout_for(size_t q) const {
    auto it = overrides.find(q);
    if (it != overrides.end() && it->second.readout) return *it->second.readout;
    if (readout.empty()) return {0.0, 0.0};
    if (readout.size() == 1) return readout[0];
    if (q >= readout.size()) throw std::invalid_argument("readout table smaller than register");
    return readout[q];
}

bool NoiseModel::has_gate_noise() const {
    if (p1 > 0 || p2 > 0 || thermal) return true;
    for (const auto& [q, o] : overrides) {
        if ((o.p1 && *o.p1 > 0) || (o.p2 && *o.p2 > 0)) return true;
    }
    return false;
}

bool NoiseModel::has_readout_noise() const {
    for (const auto& r : readout) {
        if (r[0] > 0 || r[1] > 0) return true;
    }
    for (const auto& [q, o] : overrides) {
        if (o.readout && ((*o.readout)[0] > 0 || (*o.readout)[1] > 0)) return true;
    }
    return false;
}

NoiseModel NoiseModel::remapped(const std::vector<size_t>& map, size_t num_logical) const {
    NoiseModel out;
    out.p1 = p1;
    out.p2 = p2;
    out.thermal = thermal;
    out.readout.resize(num_logical);
    for (size_t q = 0; q < num_logical; q++) {
        size_t phys = q < map.size() ? map[q] : q;
        out.readout[q] = readout_for(phys);
        auto it = overrides.find(phys);
        if (it != overrides.end()) {
            QubitNoiseOverride o = it->second;
            o.readout.reset();  // folded into the readout table above
            if (o.p1 || o.p2) out.overrides[q] = o;
        }
    }
    return out;
}

nlohmann::ordered_json NoiseModel::to_json() const {
    nlohmann::ordered_json j;
    j["p1"] = p1;
    j["p2"] = p2;
    j["readout"] = nlohmann::ordered_json::array();
    for (const auto& r : readout) j["readout"].push_back({r[0], r[1]});
    j["overrides"] = nlohmann::ordered_json::object();
    for (const auto& [q, o] : overrides) {
        nlohmann::ordered_json jo;
        if (o.p1) jo["p1"] = *o.p1;
        if (o.p2) jo["p2"] = *o.p2;
        if (o.readout) jo["readout"] = {(*o.readout)[0], (*o.readout)[1]};
        j["overrides"][std::to_string(q)] = jo;
    }
    if (thermal) {
        j["thermal"] = {{"t1", thermal->t1},
                        {"t2", thermal->t2},
                        {"time_1q", thermal->time_1q},
                        {"time_2q", thermal->time_2q}};
    }
    j["seed_policy"] = "explicit";
    return j;
}

NoiseModel NoiseModel::from_json(const nlohmann::json& j) {
    NoiseModel nm;
    nm.p1 = j.value("p1", 0.0);
    nm.p2 = j.value("p2", 0.0);
    validate_probability(nm.p1, "p1");
    validate_probability(nm.p2, "p2");
    if (j.contains("readout")) {
        for (const auto& r : j.at("readout")) {
            std::array<double, 2> pair{r.at(0).get<double>(), r.at(1).get<double>()};
            validate_probability(pair[0], "readout");
            validate_probability(pair[1], "readout");
            nm.readout.push_back(pair);
        }
    }
    if (j.contains("overrides")) {
        for (const auto& [key, jo] : j.at("overrides").items()) {
            QubitNoiseOverride o;
            if (jo.contains("p1")) o.p1 = jo.at("p1").get<double>();
            if (jo.contains("p2")) o.p2 = jo.at("p2").get<double>();
            if (jo.contains("readout")) {
                o.readout = {{jo.at("readout").at(0).get<double>(),
                              jo.at("readout").at(1).get<double>()}};
            }
            nm.overrides[std::stoul(key)] = o;
        }
    }
    if (j.contains("thermal")) {
        ThermalParams t;
        t.t1 = j.at("thermal").at("t1").get<double>();
        t.t2 = j.at("thermal").at("t2").get<double>();
        t.time_1q = j.at("thermal").at("time_1q").get<double>();
        t.time_2q = j.at("thermal").at("time_2q").get<double>();
        nm.thermal = t;
    }
    return nm;
}

}  // namespace qutrace

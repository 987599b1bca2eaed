// Copyright 2026 The qtele Authors
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

#include "qtele/cli/report.hpp"

#include <cstdio>

namespace qtele::cli {

namespace {

std::string optional_cell(const std::optional<double> &value) {
    return value ? format_number(*value) : std::string{};
}

nlohmann::json optional_json(const std::optional<double> &value) {
    return value ? nlohmann::json(*value) : nlohmann::json(nullptr);
}

std::string csv_escape(const std::string &text) {
    if (text.find_first_of(",\"\n") == std::string::npos) {
        return text;
    }
    std::string out = "\"";
    for (char c : text) {
        if (c == '"') {
            out += '"';
        }
        out += c;
    }
    out += '"';
    return out;
}

} // namespace

std::string format_number(double value) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.15g", value);
    return buf;
}

nlohmann::json to_json(const ResultRow &row) {
    return {
        {"N", row.level_count},
        {"b0_squared", row.b0_squared},
        {"analytic_p_success", row.analytic_p_success},
        {"empirical_p_success", row.empirical_p_success},
        {"trials", row.trials},
        {"mean_attempts", optional_json(row.mean_attempts)},
        {"min_success_fidelity", optional_json(row.min_success_fidelity)},
        {"min_recovery_fidelity", optional_json(row.min_recovery_fidelity)},
        {"wall_time_ms", optional_json(row.wall_time_ms)},
    };
}

void write_results_csv(std::ostream &out, std::span<const ResultRow> rows) {
    out << kResultCsvHeader << '\n';
    for (const auto &r : rows) {
        out << r.level_count << ',' << format_number(r.b0_squared) << ','
            << format_number(r.analytic_p_success) << ','
            << format_number(r.empirical_p_success) << ',' << r.trials << ','
            << optional_cell(r.mean_attempts) << ','
            << optional_cell(r.min_success_fidelity) << ','
            << optional_cell(r.min_recovery_fidelity) << ','
            << optional_cell(r.wall_time_ms) << '\n';
    }
}

void write_results_jsonl(std::ostream &out, std::span<const ResultRow> rows) {
    for (const auto &r : rows) {
        out << to_json(r).dump() << '\n';
    }
}

void write_properties_csv(std::ostream &out,
                          std::span<const PropertyResult> rows) {
    out << kPropertyCsvHeader << '\n';
    for (const auto &r : rows) {
        out << r.name << ',' << (r.passed ? "pass" : "FAIL") << ','
            << csv_escape(r.detail) << ',' << r.seed << '\n';
    }
}

void write_properties_jsonl(std::ostream &out,
                            std::span<const PropertyResult> rows) {
    for (const auto &r : rows) {
        out << nlohmann::json{{"property", r.name},
                              {"passed", r.passed},
                              {"detail", r.detail},
                              {"seed", r.seed}}
                   .dump()
            << '\n';
    }
}

nlohmann::json to_json(const StateVector &state) {
    auto amps = nlohmann::json::array();
    for (const auto &a : state.amplitudes()) {
        amps.push_back({a.real(), a.imag()});
    }
    return {{"levels", state.level_count()},
            {"slots", state.slot_count()},
            {"amplitudes", std::move(amps)}};
}

nlohmann::json to_json(const Transcript &t, bool snapshots) {
    nlohmann::json j;
    j["seed"] = t.seed;
    j["N"] = t.channel.level_count();
    j["schmidt"] = std::vector<double>(t.channel.coefficients().begin(),
                                       t.channel.coefficients().end());
    j["input"] = to_json(t.input.state());
    j["flag"] = {{"outcome", t.flag_outcome},
                 {"probability", t.flag_probability},
                 {"p_success", t.flag_probabilities.success},
                 {"p_fail", t.flag_probabilities.failure}};
    if (t.success) {
        const auto &s = *t.success;
        j["success"] = {{"m", s.m},
                        {"n", s.n},
                        {"p_m", s.probability_m},
                        {"p_n", s.probability_n},
                        {"message", {{"digits", {s.message.n, s.message.m}},
                                     {"encoded", s.message.encoded()}}},
                        {"bob_before", to_json(s.bob_before)},
                        {"bob_after", to_json(s.bob_after)},
                        {"fidelity", s.fidelity}};
        j["failure"] = nullptr;
    } else {
        const auto &f = *t.failure;
        j["success"] = nullptr;
        j["failure"] = {{"j", f.j},
                        {"p_j", f.probability_j},
                        {"message", "retry"},
                        {"recovered", to_json(f.recovered)},
                        {"fidelity", f.fidelity}};
    }
    if (snapshots) {
        j["snapshots"] = {{"psi_total", to_json(t.snapshots.psi_total)},
                          {"factorized", to_json(t.snapshots.factorized)},
                          {"omega", to_json(t.snapshots.omega)},
                          {"gamma", to_json(t.snapshots.gamma)},
                          {"delta", to_json(t.snapshots.delta)}};
    }
    return j;
}

} // namespace qtele::cli

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

#pragma once

/**
 * @file
 * Output records and their CSV / JSON-lines encodings.
 *
 * Result CSV columns, in order:
 *   N, b0_squared, analytic_p_success, empirical_p_success, trials,
 *   mean_attempts, min_success_fidelity, min_recovery_fidelity, wall_time_ms
 * Optional values (no successful run, timing disabled) are empty cells.
 */

#include <cstdint>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <string_view>

#include "json.hpp"

#include "qtele/protocol.hpp"

namespace qtele::cli {

struct ResultRow {
    std::size_t level_count;
    double b0_squared;
    double analytic_p_success;
    double empirical_p_success;
    std::size_t trials;
    std::optional<double> mean_attempts;
    std::optional<double> min_success_fidelity;
    std::optional<double> min_recovery_fidelity;
    std::optional<double> wall_time_ms;
};

struct PropertyResult {
    std::string name;
    bool passed;
    std::string detail;
    std::uint64_t seed;
};

inline constexpr std::string_view kResultCsvHeader =
    "N,b0_squared,analytic_p_success,empirical_p_success,trials,mean_attempts,"
    "min_success_fidelity,min_recovery_fidelity,wall_time_ms";

inline constexpr std::string_view kPropertyCsvHeader = "property,passed,detail,seed";

/// Shortest-ish stable text for a double ("%.15g").
std::string format_number(double value);

void write_results_csv(std::ostream &out, std::span<const ResultRow> rows);
void write_results_jsonl(std::ostream &out, std::span<const ResultRow> rows);
void write_properties_csv(std::ostream &out, std::span<const PropertyResult> rows);
void write_properties_jsonl(std::ostream &out,
                            std::span<const PropertyResult> rows);

nlohmann::json to_json(const ResultRow &row);
nlohmann::json to_json(const StateVector &state);
/// snapshots adds the five intermediate four-qudit states.
nlohmann::json to_json(const Transcript &transcript, bool snapshots);

} // namespace qtele::cli

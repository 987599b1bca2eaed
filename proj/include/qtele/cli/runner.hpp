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

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "qtele/cli/config.hpp"
#include "qtele/cli/report.hpp"

namespace qtele::cli {

struct MonteCarloSpec {
    ChannelSpec channel;
    /// nullopt: a random input per trial.
    std::optional<std::vector<Complex>> input;
    std::uint64_t seed = 1;
    std::size_t trials = 1000;
    std::size_t max_attempts = 64;
    std::size_t threads = 1;
    bool timing = false;
};

struct MonteCarloOutcome {
    ResultRow row;
    AttemptStats stats;
    /// One JSON line per attempt, in trial order; filled when requested.
    std::vector<std::string> transcript_lines;
    /// Seed of the first attempt whose fidelity fell below 1 - 1e-10.
    std::optional<std::uint64_t> first_bad_seed;
};

/// Trial t runs a resumable teleportation with seed + t * max_attempts as its
/// base seed. Results are merged in trial order regardless of threading.
MonteCarloOutcome run_montecarlo(const MonteCarloSpec &spec,
                                 bool capture_transcripts = false,
                                 bool snapshots = false);

/// The property suite behind `--mode verify`.
std::vector<PropertyResult> run_verify(const RunConfig &config);

/// Executes a parsed config and writes its output. Returns 0 when every
/// check passed, 1 on a failed property, 3 on I/O failure.
int run(const RunConfig &config, std::ostream &diagnostics);

} // namespace qtele::cli

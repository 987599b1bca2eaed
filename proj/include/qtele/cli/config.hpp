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

#include <cstddef>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "qtele/gates.hpp"

namespace qtele::cli {

enum class Mode { Verify, MonteCarlo, Sweep };
enum class Format { Csv, JsonLines };

/// Raised for malformed flags or values. what() names the offending field
/// and, for list values, the element index and character column.
class ConfigError : public Error {
  public:
    explicit ConfigError(const std::string &what)
        : Error(ErrorKind::InvalidArgument, what) {}
};

/// Thrown by parse_config for --help; what() is the usage text.
class HelpRequested : public std::runtime_error {
  public:
    explicit HelpRequested(const std::string &usage) : std::runtime_error(usage) {}
};

/// Grid of b0^2 values. `stop_at_max` means stop = 1/N.
struct SweepGrid {
    std::vector<double> explicit_points;
    double start = 0.0;
    double step = 0.0;
    double stop = 0.0;
    bool stop_at_max = false;

    [[nodiscard]] std::vector<double> points(std::size_t level_count) const;
};

struct RunConfig {
    Mode mode = Mode::Verify;
    std::size_t dim = 3;
    std::string schmidt_text = "maximal";
    /// Empty for sweep mode, where each grid point defines its own channel.
    std::optional<ChannelSpec> channel;
    /// nullopt means "random", drawn from the seed.
    std::optional<std::vector<Complex>> input;
    std::uint64_t seed = 1;
    std::size_t trials = 1000;
    std::size_t max_attempts = 64;
    std::optional<SweepGrid> sweep;
    /// Empty means stdout.
    std::string output;
    Format format = Format::Csv;
    bool timing = false;
    std::size_t threads = 1;
    std::string transcripts_path;
    bool transcript_snapshots = false;
    std::vector<std::string> warnings;
};

/// Parses "maximal", "b0sq=<x>" or a comma-separated coefficient list.
/// Lists are normalized and sorted ascending, with a warning for each fix.
ChannelSpec parse_schmidt(std::string_view text, std::size_t dim,
                          std::vector<std::string> &warnings);

/// Parses a comma-separated list of complex numbers such as
/// "0.6, 0.8i, -0.1+0.2i". Normalizes with a warning.
std::vector<Complex> parse_amplitudes(std::string_view text, std::size_t dim,
                                      std::vector<std::string> &warnings);

/// Parses one complex literal; `column` is the 1-based position of text[0]
/// in the enclosing value and is used in error messages.
Complex parse_complex(std::string_view text, std::size_t element,
                      std::size_t column);

/// "start:step:stop" (stop may be "max" = 1/N) or "x1,x2,...".
SweepGrid parse_sweep(std::string_view text);

/// Command line, optionally pulling values from `--config <file>` (flat
/// `key = value` lines using the long flag names). Environment variable
/// QTELE_OUTPUT_DIR supplies the output directory when --output is absent.
RunConfig parse_config(int argc, const char *const *argv);

std::string_view to_string(Mode mode) noexcept;

} // namespace qtele::cli

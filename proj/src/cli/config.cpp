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

#include "qtele/cli/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <sstream>

#include "CLI11.hpp"

namespace qtele::cli {

namespace {

std::string trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t");
    if (first == std::string_view::npos) {
        return {};
    }
    const auto last = s.find_last_not_of(" \t");
    return std::string(s.substr(first, last - first + 1));
}

struct Field {
    std::string text;
    std::size_t column; // 1-based start in the original value
};

std::vector<Field> split_list(std::string_view text) {
    std::vector<Field> out;
    std::size_t begin = 0;
    while (true) {
        const auto comma = text.find(',', begin);
        const auto raw = text.substr(begin, comma == std::string_view::npos
                                                ? std::string_view::npos
                                                : comma - begin);
        const auto lead = raw.find_first_not_of(" \t");
        out.push_back({trim(raw), begin + 1 + (lead == std::string_view::npos ? 0 : lead)});
        if (comma == std::string_view::npos) {
            break;
        }
        begin = comma + 1;
    }
    return out;
}

std::string where(std::size_t element, std::size_t column) {
    return "element " + std::to_string(element + 1) + " (column " +
           std::to_string(column) + ")";
}

// Parses a real number at the front of s; returns characters consumed.
std::size_t parse_real(std::string_view s, double &value) {
    std::size_t skip = 0;
    if (!s.empty() && s[0] == '+') {
        skip = 1;
        if (s.size() > 1 && (s[1] == '-' || s[1] == '+')) {
            return 0;
        }
    }
    const char *begin = s.data() + skip;
    const auto [ptr, ec] = std::from_chars(begin, s.data() + s.size(), value);
    if (ec != std::errc{} || ptr == begin) {
        return 0;
    }
    return static_cast<std::size_t>(ptr - s.data());
}

double parse_plain_real(const Field &field, std::size_t element,
                        const char *what) {
    double value = 0.0;
    const std::size_t used = parse_real(field.text, value);
    if (field.text.empty() || used != field.text.size() || !std::isfinite(value)) {
        throw ConfigError(std::string("malformed ") + what + " at " +
                          where(element, field.column + used) + ": '" +
                          field.text + "'");
    }
    return value;
}

bool is_imag_unit(char c) { return c == 'i' || c == 'j'; }

} // namespace

std::string_view to_string(Mode mode) noexcept {
    switch (mode) {
    case Mode::Verify:
        return "verify";
    case Mode::MonteCarlo:
        return "montecarlo";
    case Mode::Sweep:
        return "sweep";
    }
    return "unknown";
}

Complex parse_complex(std::string_view text, std::size_t element,
                      std::size_t column) {
    auto fail = [&](std::size_t offset) -> ConfigError {
        return ConfigError("malformed complex number at " +
                           where(element, column + offset) + ": '" +
                           std::string(text) + "'");
    };
    if (text.empty()) {
        throw fail(0);
    }
    // Pure unit forms: "i", "+i", "-i".
    if (text == "i" || text == "j" || text == "+i" || text == "+j") {
        return {0.0, 1.0};
    }
    if (text == "-i" || text == "-j") {
        return {0.0, -1.0};
    }

    double first = 0.0;
    std::size_t pos = parse_real(text, first);
    if (pos == 0) {
        throw fail(0);
    }
    if (pos == text.size()) {
        return {first, 0.0};
    }
    if (is_imag_unit(text[pos]) && pos + 1 == text.size()) {
        return {0.0, first};
    }
    if (text[pos] != '+' && text[pos] != '-') {
        throw fail(pos);
    }
    const double sign = text[pos] == '-' ? -1.0 : 1.0;
    const std::size_t imag_begin = pos + 1;
    double second = 1.0;
    std::size_t used = 0;
    if (imag_begin < text.size() && !is_imag_unit(text[imag_begin])) {
        if (text[imag_begin] == '+' || text[imag_begin] == '-') {
            throw fail(imag_begin);
        }
        used = parse_real(text.substr(imag_begin), second);
        if (used == 0) {
            throw fail(imag_begin);
        }
    }
    pos = imag_begin + used;
    if (pos >= text.size() || !is_imag_unit(text[pos]) || pos + 1 != text.size()) {
        throw fail(std::min(pos, text.size()));
    }
    return {first, sign * second};
}

ChannelSpec parse_schmidt(std::string_view text, std::size_t dim,
                          std::vector<std::string> &warnings) {
    const std::string value = trim(text);
    if (dim < 2) {
        throw ConfigError("dim must be >= 2");
    }
    if (value == "maximal") {
        return ChannelSpec::maximal(dim);
    }
    if (value.rfind("b0sq=", 0) == 0) {
        const Field field{value.substr(5), 6};
        const double x = parse_plain_real(field, 0, "b0sq preset");
        try {
            return ChannelSpec::from_b0_squared(dim, x);
        } catch (const Error &e) {
            throw ConfigError(std::string("schmidt preset: ") + e.what());
        }
    }

    const auto fields = split_list(value);
    if (fields.size() != dim) {
        throw ConfigError("schmidt list has " + std::to_string(fields.size()) +
                          " coefficients but dim is " + std::to_string(dim));
    }
    std::vector<double> b(dim);
    for (std::size_t i = 0; i < dim; ++i) {
        b[i] = parse_plain_real(fields[i], i, "Schmidt coefficient");
        if (b[i] < 0.0) {
            throw ConfigError("negative Schmidt coefficient at " +
                              where(i, fields[i].column) + ": " + fields[i].text);
        }
    }
    double total = 0.0;
    for (double v : b) {
        total += v * v;
    }
    if (total <= 0.0) {
        throw ConfigError("Schmidt coefficients are all zero");
    }
    if (std::abs(total - 1.0) > tol::kAlgebra) {
        std::ostringstream msg;
        msg << "Schmidt coefficients normalized (sum of squares was " << total
            << ")";
        warnings.push_back(msg.str());
        const double s = 1.0 / std::sqrt(total);
        for (double &v : b) {
            v *= s;
        }
    }
    if (!std::is_sorted(b.begin(), b.end())) {
        warnings.emplace_back("Schmidt coefficients sorted ascending");
        std::sort(b.begin(), b.end());
    }
    return ChannelSpec(std::move(b));
}

std::vector<Complex> parse_amplitudes(std::string_view text, std::size_t dim,
                                      std::vector<std::string> &warnings) {
    const auto fields = split_list(text);
    if (fields.size() != dim) {
        throw ConfigError("input has " + std::to_string(fields.size()) +
                          " amplitudes but dim is " + std::to_string(dim));
    }
    std::vector<Complex> amps(dim);
    double total = 0.0;
    for (std::size_t i = 0; i < dim; ++i) {
        amps[i] = parse_complex(fields[i].text, i, fields[i].column);
        total += std::norm(amps[i]);
    }
    if (!(total > 0.0) || !std::isfinite(total)) {
        throw ConfigError("input amplitudes must have a finite nonzero norm");
    }
    if (std::abs(total - 1.0) > tol::kAlgebra) {
        std::ostringstream msg;
        msg << "input amplitudes normalized (norm^2 was " << total << ")";
        warnings.push_back(msg.str());
        const double s = 1.0 / std::sqrt(total);
        for (auto &a : amps) {
            a *= s;
        }
    }
    return amps;
}

SweepGrid parse_sweep(std::string_view text) {
    const std::string value = trim(text);
    SweepGrid grid;
    if (value.find(':') == std::string::npos) {
        const auto fields = split_list(value);
        for (std::size_t i = 0; i < fields.size(); ++i) {
            grid.explicit_points.push_back(
                parse_plain_real(fields[i], i, "sweep point"));
        }
        return grid;
    }
    std::vector<Field> parts;
    std::size_t begin = 0;
    while (true) {
        const auto colon = value.find(':', begin);
        const auto raw = std::string_view(value).substr(
            begin, colon == std::string::npos ? std::string::npos : colon - begin);
        parts.push_back({trim(raw), begin + 1});
        if (colon == std::string::npos) {
            break;
        }
        begin = colon + 1;
    }
    if (parts.size() != 3) {
        throw ConfigError("sweep range must be start:step:stop, got '" + value + "'");
    }
    grid.start = parse_plain_real(parts[0], 0, "sweep start");
    grid.step = parse_plain_real(parts[1], 1, "sweep step");
    if (parts[2].text == "max") {
        grid.stop_at_max = true;
    } else {
        grid.stop = parse_plain_real(parts[2], 2, "sweep stop");
    }
    if (!(grid.step > 0.0)) {
        throw ConfigError("sweep step must be positive");
    }
    return grid;
}

std::vector<double> SweepGrid::points(std::size_t level_count) const {
    if (!explicit_points.empty()) {
        return explicit_points;
    }
    const double end = stop_at_max ? 1.0 / static_cast<double>(level_count) : stop;
    std::vector<double> out;
    if (end < start) {
        return out;
    }
    const double span = (end - start) / step;
    const auto count = static_cast<std::size_t>(std::floor(span + 1e-9)) + 1;
    for (std::size_t i = 0; i < count; ++i) {
        out.push_back(start + static_cast<double>(i) * step);
    }
    // Snap a last point that lands on the endpoint up to rounding.
    if (std::abs(out.back() - end) <= 1e-9 * std::max(1.0, std::abs(end))) {
        out.back() = end;
    }
    return out;
}

RunConfig parse_config(int argc, const char *const *argv) {
    RunConfig cfg;
    CLI::App app{"Resumable probabilistic qudit teleportation simulator"};
    app.set_config("--config", "", "Read flags from a flat key = value file");
    app.get_formatter()->column_width(32);

    std::string mode = "verify";
    std::string schmidt = "maximal";
    std::string input = "random";
    std::string sweep;
    std::string format = "csv";
    std::string output;
    app.add_option("--mode", mode, "verify | montecarlo | sweep")
        ->check(CLI::IsMember({"verify", "montecarlo", "sweep"}))
        ->capture_default_str();
    app.add_option("--dim", cfg.dim, "Levels per qudit (N >= 2)")
        ->capture_default_str();
    app.add_option("--schmidt", schmidt,
                   "Coefficient list, 'maximal' or 'b0sq=<x>'")
        ->capture_default_str();
    app.add_option("--input", input, "Amplitude list or 'random'")
        ->capture_default_str();
    app.add_option("--seed", cfg.seed, "Base random seed")->capture_default_str();
    app.add_option("--trials", cfg.trials, "Resumable runs per result row")
        ->capture_default_str();
    app.add_option("--max-attempts", cfg.max_attempts,
                   "Attempt budget of one resumable run")
        ->capture_default_str();
    app.add_option("--sweep", sweep, "b0^2 grid: start:step:stop|max or list");
    app.add_option("--output", output, "Output file (default: stdout)");
    app.add_option("--format", format, "csv | jsonl")
        ->check(CLI::IsMember({"csv", "jsonl", "json-lines"}))
        ->capture_default_str();
    app.add_flag("--timing", cfg.timing, "Fill the wall_time_ms column");
    app.add_option("--threads", cfg.threads, "Worker threads for trials")
        ->capture_default_str();
    app.add_option("--dump-transcripts", cfg.transcripts_path,
                   "Write every attempt as JSON lines to this file");
    app.add_flag("--snapshots", cfg.transcript_snapshots,
                 "Include intermediate states in transcript dumps");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp &) {
        throw HelpRequested(app.help());
    } catch (const CLI::ParseError &e) {
        throw ConfigError(e.what());
    }

    cfg.mode = mode == "verify"       ? Mode::Verify
               : mode == "montecarlo" ? Mode::MonteCarlo
                                      : Mode::Sweep;
    cfg.format = format == "csv" ? Format::Csv : Format::JsonLines;
    if (cfg.dim < 2) {
        throw ConfigError("dim must be >= 2, got " + std::to_string(cfg.dim));
    }
    if (cfg.trials < 1) {
        throw ConfigError("trials must be >= 1");
    }
    if (cfg.max_attempts < 1) {
        throw ConfigError("max-attempts must be >= 1");
    }
    if (cfg.threads < 1) {
        cfg.threads = 1;
    }

    cfg.schmidt_text = schmidt;
    if (cfg.mode == Mode::Sweep) {
        if (sweep.empty()) {
            throw ConfigError("sweep mode needs --sweep");
        }
        cfg.sweep = parse_sweep(sweep);
        const auto grid = cfg.sweep->points(cfg.dim);
        if (grid.empty()) {
            throw ConfigError("sweep grid is empty");
        }
        for (double x : grid) {
            // Validates every point before any work starts.
            try {
                (void)ChannelSpec::from_b0_squared(cfg.dim, x);
            } catch (const Error &e) {
                throw ConfigError("sweep point " + std::to_string(x) + ": " +
                                  e.what());
            }
        }
    } else {
        cfg.channel = parse_schmidt(schmidt, cfg.dim, cfg.warnings);
    }

    if (trim(input) != "random") {
        cfg.input = parse_amplitudes(input, cfg.dim, cfg.warnings);
    }

    if (!output.empty()) {
        cfg.output = output;
    } else if (const char *dir = std::getenv("QTELE_OUTPUT_DIR");
               dir != nullptr && *dir != '\0') {
        const char *ext = cfg.format == Format::Csv ? ".csv" : ".jsonl";
        cfg.output = (std::filesystem::path(dir) /
                      ("qtele-" + std::string(to_string(cfg.mode)) + ext))
                         .string();
    }
    return cfg;
}

} // namespace qtele::cli

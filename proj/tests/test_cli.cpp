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

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "qtele/cli/config.hpp"
#include "qtele/cli/report.hpp"
#include "qtele/cli/runner.hpp"

namespace qtele::cli {
namespace {

namespace fs = std::filesystem;

RunConfig parse(std::vector<std::string> args) {
    args.insert(args.begin(), "qtele-cli");
    std::vector<const char *> argv;
    for (const auto &a : args) {
        argv.push_back(a.c_str());
    }
    return parse_config(static_cast<int>(argv.size()), argv.data());
}

std::string slurp(const fs::path &path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

std::vector<std::string> lines_of(const std::string &text) {
    std::vector<std::string> out;
    std::istringstream in(text);
    for (std::string line; std::getline(in, line);) {
        out.push_back(line);
    }
    return out;
}

std::vector<std::string> cells_of(const std::string &line) {
    std::vector<std::string> out;
    std::string cell;
    std::istringstream in(line);
    while (std::getline(in, cell, ',')) {
        out.push_back(cell);
    }
    if (!line.empty() && line.back() == ',') {
        out.emplace_back();
    }
    return out;
}

class TempDir {
  public:
    TempDir() {
        path_ = fs::temp_directory_path() /
                ("qtele-test-" + std::to_string(::testing::UnitTest::GetInstance()->random_seed()) +
                 "-" + ::testing::UnitTest::GetInstance()->current_test_info()->name());
        fs::remove_all(path_);
        fs::create_directories(path_);
    }
    ~TempDir() { fs::remove_all(path_); }
    [[nodiscard]] const fs::path &path() const { return path_; }

  private:
    fs::path path_;
};

// ---------- parse_config ----------

TEST(ParseConfig, UniformListBecomesMaximal) {
    const auto cfg = parse({"--dim", "3", "--schmidt", "1,1,1", "--mode", "verify"});
    EXPECT_EQ(cfg.mode, Mode::Verify);
    ASSERT_TRUE(cfg.channel.has_value());
    EXPECT_TRUE(cfg.channel->is_maximally_entangled());
    EXPECT_FALSE(cfg.warnings.empty());
}

TEST(ParseConfig, RoundedQutritChannel) {
    const auto cfg = parse({"--dim", "3", "--schmidt", "0.408,0.577,0.707"});
    EXPECT_NEAR(cfg.channel->b0_squared(), 1.0 / 6, 1e-3);
    EXPECT_NEAR(cfg.channel->success_probability(), 0.5, 1e-3);
}

TEST(ParseConfig, UnsortedListIsSortedWithWarning) {
    const auto cfg = parse({"--dim", "3", "--schmidt", "1,0,0"});
    EXPECT_EQ(cfg.channel->coefficient(0), 0.0);
    EXPECT_EQ(cfg.channel->coefficient(2), 1.0);
    EXPECT_EQ(cfg.channel->success_probability(), 0.0);
    bool mentions_sort = false;
    for (const auto &w : cfg.warnings) {
        mentions_sort |= w.find("sort") != std::string::npos;
    }
    EXPECT_TRUE(mentions_sort);
}

TEST(ParseConfig, Presets) {
    EXPECT_TRUE(parse({"--dim", "4", "--schmidt", "maximal"}).channel->is_maximally_entangled());
    const auto cfg = parse({"--dim", "4", "--schmidt", "b0sq=0.1"});
    EXPECT_NEAR(cfg.channel->b0_squared(), 0.1, 1e-15);
    EXPECT_THROW(parse({"--dim", "4", "--schmidt", "b0sq=0.5"}), ConfigError);
}

TEST(ParseConfig, Rejections) {
    EXPECT_THROW(parse({"--dim", "3", "--schmidt", "0.5,-0.5,0.7"}), ConfigError);
    EXPECT_THROW(parse({"--dim", "1"}), ConfigError);
    EXPECT_THROW(parse({"--dim", "3", "--schmidt", "1,1"}), ConfigError);
    EXPECT_THROW(parse({"--trials", "0"}), ConfigError);
    EXPECT_THROW(parse({"--mode", "teleport"}), ConfigError);
    EXPECT_THROW(parse({"--mode", "sweep"}), ConfigError);
    EXPECT_THROW(parse({"--bogus"}), ConfigError);
}

TEST(ParseConfig, MalformedNumberReportsPosition) {
    try {
        (void)parse({"--dim", "3", "--schmidt", "0.5,0.x5,0.7"});
        FAIL() << "expected ConfigError";
    } catch (const ConfigError &e) {
        const std::string what = e.what();
        EXPECT_NE(what.find("element 2"), std::string::npos) << what;
        EXPECT_NE(what.find("column"), std::string::npos) << what;
    }
}

TEST(ParseConfig, HelpIsNotAnError) {
    EXPECT_THROW(parse({"--help"}), HelpRequested);
}

TEST(ParseConfig, ComplexInput) {
    const auto cfg = parse({"--dim", "3", "--input", "0.6, 0.48i, 0.64"});
    ASSERT_TRUE(cfg.input.has_value());
    EXPECT_EQ((*cfg.input)[1], Complex(0.0, 0.48));
    EXPECT_FALSE(parse({"--dim", "3", "--input", "random"}).input.has_value());

    std::vector<std::string> warnings;
    const auto amps = parse_amplitudes("1, 1", 2, warnings);
    EXPECT_NEAR(std::abs(amps[0]), 1 / std::sqrt(2.0), 1e-15);
    EXPECT_EQ(warnings.size(), 1u);
}

TEST(ParseComplex, Forms) {
    EXPECT_EQ(parse_complex("1.5", 0, 1), Complex(1.5, 0));
    EXPECT_EQ(parse_complex("-2i", 0, 1), Complex(0, -2));
    EXPECT_EQ(parse_complex("0.1+0.2i", 0, 1), Complex(0.1, 0.2));
    EXPECT_EQ(parse_complex("0.1-0.2j", 0, 1), Complex(0.1, -0.2));
    EXPECT_EQ(parse_complex("i", 0, 1), Complex(0, 1));
    EXPECT_THROW(parse_complex("1+", 0, 1), ConfigError);
    EXPECT_THROW(parse_complex("", 0, 1), ConfigError);
}

TEST(ParseSweep, RangeEndsAtMaximum) {
    const auto points = parse_sweep("0:0.05:max").points(4);
    ASSERT_EQ(points.size(), 6u);
    EXPECT_EQ(points.front(), 0.0);
    EXPECT_NEAR(points[1], 0.05, 1e-15);
    EXPECT_EQ(points.back(), 0.25);
}

TEST(ParseSweep, ExplicitList) {
    const auto points = parse_sweep("0.1,0.2").points(3);
    EXPECT_EQ(points, (std::vector<double>{0.1, 0.2}));
    EXPECT_THROW(parse_sweep("0:-1:1"), ConfigError);
    EXPECT_THROW(parse_sweep("0:1"), ConfigError);
}

TEST(ParseConfig, ConfigFile) {
    TempDir dir;
    const auto file = dir.path() / "run.conf";
    std::ofstream(file) << "# qutrit run\n"
                           "mode = montecarlo\n"
                           "dim = 3\n"
                           "schmidt = b0sq=0.1\n"
                           "trials = 50\n"
                           "seed = 9\n";
    const auto cfg = parse({"--config", file.string(), "--seed", "11"});
    EXPECT_EQ(cfg.mode, Mode::MonteCarlo);
    EXPECT_EQ(cfg.trials, 50u);
    EXPECT_NEAR(cfg.channel->b0_squared(), 0.1, 1e-15);
    EXPECT_EQ(cfg.seed, 11u); // command line wins
}

TEST(ParseConfig, OutputDirectoryFromEnvironment) {
    TempDir dir;
    ::setenv("QTELE_OUTPUT_DIR", dir.path().c_str(), 1);
    const auto cfg = parse({"--mode", "montecarlo", "--format", "jsonl"});
    ::unsetenv("QTELE_OUTPUT_DIR");
    EXPECT_EQ(fs::path(cfg.output), dir.path() / "qtele-montecarlo.jsonl");
    EXPECT_EQ(parse({"--output", "x.csv"}).output, "x.csv");
}

// ---------- report ----------

TEST(Report, CsvArityIsStable) {
    std::vector<ResultRow> rows = {
        {3, 1.0 / 6, 0.5, 0.49, 100, 2.0, 1.0, 1.0, std::nullopt},
        {3, 0.0, 0.0, 0.0, 100, std::nullopt, std::nullopt, 1.0, 1.5},
    };
    std::ostringstream out;
    write_results_csv(out, rows);
    const auto lines = lines_of(out.str());
    ASSERT_EQ(lines.size(), 3u);
    EXPECT_EQ(lines[0], kResultCsvHeader);
    for (const auto &line : lines) {
        EXPECT_EQ(cells_of(line).size(), 9u) << line;
    }
}

TEST(Report, JsonLinesUseNullForMissing) {
    std::vector<ResultRow> rows = {{2, 0.0, 0.0, 0.0, 5, std::nullopt, std::nullopt, 1.0,
                                    std::nullopt}};
    std::ostringstream out;
    write_results_jsonl(out, rows);
    const auto j = nlohmann::json::parse(out.str());
    EXPECT_TRUE(j["mean_attempts"].is_null());
    EXPECT_EQ(j["N"], 2);
}

// ---------- run ----------

TEST(Run, VerifyPassesForQutrit) {
    TempDir dir;
    const auto out = dir.path() / "verify.csv";
    auto cfg = parse({"--mode", "verify", "--dim", "3", "--schmidt", "b0sq=0.1666666666666667",
                      "--trials", "500", "--output", out.string()});
    std::ostringstream diag;
    EXPECT_EQ(run(cfg, diag), 0) << diag.str();
    const auto lines = lines_of(slurp(out));
    ASSERT_GT(lines.size(), 10u);
    EXPECT_EQ(lines[0], kPropertyCsvHeader);
    for (std::size_t i = 1; i < lines.size(); ++i) {
        EXPECT_EQ(cells_of(lines[i])[1], "pass") << lines[i];
    }
}

TEST(Run, SweepAnalyticColumnIsMonotone) {
    TempDir dir;
    const auto out = dir.path() / "sweep.csv";
    auto cfg = parse({"--mode", "sweep", "--dim", "4", "--sweep", "0:0.05:max", "--trials",
                      "50", "--output", out.string()});
    std::ostringstream diag;
    ASSERT_EQ(run(cfg, diag), 0) << diag.str();
    const auto lines = lines_of(slurp(out));
    ASSERT_EQ(lines.size(), 7u);
    double previous = -1.0;
    for (std::size_t i = 1; i < lines.size(); ++i) {
        const auto cells = cells_of(lines[i]);
        ASSERT_EQ(cells.size(), 9u);
        const double p = std::stod(cells[2]);
        EXPECT_GE(p, previous);
        previous = p;
    }
    EXPECT_NEAR(previous, 1.0, 1e-12);
}

std::string montecarlo_bytes(const fs::path &out, const std::string &threads) {
    auto cfg = parse({"--mode", "montecarlo", "--dim", "3", "--schmidt",
                      "b0sq=0.1666666666666667", "--trials", "10000", "--seed", "5",
                      "--threads", threads, "--output", out.string()});
    std::ostringstream diag;
    EXPECT_EQ(run(cfg, diag), 0) << diag.str();
    return slurp(out);
}

TEST(Run, MonteCarloIsByteDeterministic) {
    TempDir dir;
    const auto first = montecarlo_bytes(dir.path() / "a.csv", "1");
    const auto second = montecarlo_bytes(dir.path() / "b.csv", "1");
    EXPECT_EQ(first, second);
    EXPECT_EQ(first, montecarlo_bytes(dir.path() / "c.csv", "3"));
    const auto cells = cells_of(lines_of(first).at(1));
    EXPECT_NEAR(std::stod(cells[3]), 0.5, 0.015);
    EXPECT_NEAR(std::stod(cells[5]), 2.0, 0.06);
    EXPECT_TRUE(cells[8].empty());
}

TEST(Run, TranscriptDumpIsJsonLines) {
    TempDir dir;
    const auto dump = dir.path() / "t.jsonl";
    auto cfg = parse({"--mode", "montecarlo", "--dim", "2", "--schmidt", "0.6,0.8", "--trials",
                      "20", "--output", (dir.path() / "r.csv").string(),
                      "--dump-transcripts", dump.string()});
    std::ostringstream diag;
    ASSERT_EQ(run(cfg, diag), 0) << diag.str();
    const auto lines = lines_of(slurp(dump));
    ASSERT_GE(lines.size(), 20u);
    for (const auto &line : lines) {
        const auto j = nlohmann::json::parse(line);
        EXPECT_TRUE(j.contains("seed"));
        EXPECT_TRUE(j["flag"]["outcome"] == 0 || j["flag"]["outcome"] == 1);
        EXPECT_NE(j["success"].is_null(), j["failure"].is_null());
    }
}

TEST(Run, UnwritableOutputExitsThree) {
    auto cfg = parse({"--mode", "montecarlo", "--trials", "5", "--output",
                      "/nonexistent-dir/qtele/out.csv"});
    std::ostringstream diag;
    EXPECT_EQ(run(cfg, diag), 3);
    EXPECT_NE(diag.str().find("cannot write"), std::string::npos);
}

} // namespace
} // namespace qtele::cli

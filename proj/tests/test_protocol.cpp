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

#include <cmath>
#include <vector>

#include <gtest/gtest.h>

#include "qtele/protocol.hpp"
#include "test_support.hpp"

namespace qtele {
namespace {

using testing::expect_amplitudes_near;
using testing::omega;
using testing::random_state;

const ChannelSpec kQutritChannel({1 / std::sqrt(6.0), 1 / std::sqrt(3.0),
                                  1 / std::sqrt(2.0)});

InputState random_input(std::size_t levels, Rng &rng) {
    return InputState::random(levels, rng);
}

StateVector delta_for(const InputState &input, const ChannelSpec &channel) {
    return alice_pipeline(prepare_total(input, channel), channel);
}

// ---------- InputState / ClassicalMessage ----------

TEST(InputState, Validation) {
    EXPECT_THROW(InputState::from_amplitudes({1.0, 1.0}), Error);
    EXPECT_NO_THROW(InputState::from_amplitudes({0.6, Complex(0, 0.8)}));
    Rng rng(1);
    EXPECT_THROW(InputState::from_state(random_state(2, 2, rng)), Error);
}

TEST(ClassicalMessage, RoundTrips) {
    for (std::size_t levels = 2; levels <= 7; ++levels) {
        for (std::size_t v = 0; v < levels * levels; ++v) {
            const auto msg = ClassicalMessage::decode(levels, v);
            EXPECT_EQ(msg.encoded(), v);
            EXPECT_EQ(msg.n * levels + msg.m, v);
        }
        EXPECT_THROW(ClassicalMessage::decode(levels, levels * levels), Error);
    }
}

// ---------- prepare_total ----------

TEST(PrepareTotal, QubitBasisMaximal) {
    const auto total = prepare_total(InputState::basis(2, 0), ChannelSpec::maximal(2));
    std::vector<Complex> expected(16);
    expected[0b0000] = 1 / std::sqrt(2.0);
    expected[0b0011] = 1 / std::sqrt(2.0);
    expect_amplitudes_near(total, expected, 1e-15);
}

TEST(PrepareTotal, TensorStructure) {
    Rng rng(10);
    const auto input = random_input(3, rng);
    const auto channel = ChannelSpec::random(3, rng);
    const auto total = prepare_total(input, channel);
    for (std::size_t idx = 0; idx < total.dimension(); ++idx) {
        const auto d = total.digits_of(idx);
        const Complex expected = (d[0] == 0 && d[2] == d[3])
                                     ? input.amplitudes()[d[1]] * channel.coefficient(d[2])
                                     : Complex{};
        EXPECT_LE(std::abs(total[idx] - expected), 1e-15);
    }
}

TEST(PrepareTotal, NormalizedAndChecksDimensions) {
    Rng rng(11);
    for (int i = 0; i < 100; ++i) {
        const std::size_t levels = 2 + i % 6;
        const auto total =
            prepare_total(random_input(levels, rng), ChannelSpec::random(levels, rng));
        EXPECT_NEAR(total.norm_squared(), 1.0, 1e-12);
    }
    EXPECT_THROW(prepare_total(InputState::basis(2, 0), ChannelSpec::maximal(3)), Error);
}

// ---------- alice_pipeline ----------

TEST(AlicePipeline, MaximalChannelAlwaysFlagsSuccess) {
    Rng rng(12);
    for (std::size_t levels = 2; levels <= 6; ++levels) {
        const auto delta = delta_for(random_input(levels, rng), ChannelSpec::maximal(levels));
        EXPECT_NEAR(flag_probabilities(delta).success, 1.0, 1e-12);
    }
}

TEST(AlicePipeline, RequiresAncillaInZero) {
    const auto bad = StateVector::basis(3, {1, 0, 0, 0});
    EXPECT_THROW(alice_pipeline(bad, kQutritChannel), Error);
}

TEST(AlicePipeline, QutritFailurePart) {
    Rng rng(13);
    const auto input = random_input(3, rng);
    const auto &a = input.amplitudes();
    const auto delta = delta_for(input, kQutritChannel);

    // Unnormalized flag-1 slice, compared with
    // sqrt(b1^2 - b0^2) |phi_02>|11> + sqrt(b2^2 - b0^2) |phi_00>|22>.
    const double b0s = 1.0 / 6, b1s = 1.0 / 3, b2s = 1.0 / 2;
    const std::vector<Complex> phi02 = {a[2], a[0], a[1]};
    const std::vector<Complex> phi00 = {a[0], a[1], a[2]};
    for (Digit x = 0; x < 3; ++x) {
        for (Digit j = 0; j < 3; ++j) {
            for (Digit k = 0; k < 3; ++k) {
                Complex expected{};
                if (j == 1 && k == 1) {
                    expected = std::sqrt(b1s - b0s) * phi02[x];
                } else if (j == 2 && k == 2) {
                    expected = std::sqrt(b2s - b0s) * phi00[x];
                }
                const std::vector<Digit> digits = {1, x, j, k};
                EXPECT_LE(std::abs(delta.amplitude(digits) - expected), 1e-12);
            }
        }
    }
}

TEST(AlicePipeline, FlagSupportIsZeroOrOne) {
    Rng rng(14);
    for (std::size_t levels = 3; levels <= 6; ++levels) {
        const auto delta =
            delta_for(random_input(levels, rng), ChannelSpec::random(levels, rng));
        const auto dist = outcome_distribution(delta, slots::kFlag);
        for (Digit d = 2; d < levels; ++d) {
            EXPECT_LE(dist[d], 1e-12);
        }
    }
}

TEST(AlicePipeline, StagesAreRecorded) {
    Rng rng(15);
    const auto input = random_input(3, rng);
    const auto total = prepare_total(input, kQutritChannel);
    const auto stages = alice_pipeline_stages(total, kQutritChannel);
    EXPECT_EQ(max_abs_diff(stages.psi_total, total), 0.0);
    EXPECT_EQ(max_abs_diff(stages.delta, alice_pipeline(total, kQutritChannel)), 0.0);
    // The filter is the only non-unitary step; Omega is still normalized.
    EXPECT_NEAR(stages.omega.norm_squared(), 1.0, 1e-12);
    EXPECT_NEAR(stages.delta.norm_squared(), 1.0, 1e-12);
}

// ---------- flag_probabilities ----------

TEST(FlagProbabilities, QutritHalf) {
    Rng rng(16);
    const auto flags = flag_probabilities(delta_for(random_input(3, rng), kQutritChannel));
    EXPECT_NEAR(flags.success, 0.5, 1e-12);
    EXPECT_NEAR(flags.failure, 0.5, 1e-12);
}

TEST(FlagProbabilities, DegenerateChannel) {
    Rng rng(17);
    const auto flags =
        flag_probabilities(delta_for(random_input(3, rng), ChannelSpec({0.0, 0.6, 0.8})));
    EXPECT_NEAR(flags.success, 0.0, 1e-15);
    EXPECT_NEAR(flags.failure, 1.0, 1e-12);
}

TEST(FlagProbabilities, LawOverRandomChannels) {
    Rng rng(18);
    for (std::size_t levels = 2; levels <= 7; ++levels) {
        for (int i = 0; i < 100; ++i) {
            const auto channel = ChannelSpec::random(levels, rng);
            const auto delta = delta_for(random_input(levels, rng), channel);
            const auto flags = flag_probabilities(delta);
            EXPECT_NEAR(flags.success, levels * channel.b0_squared(), 1e-9);
            EXPECT_NEAR(flags.success + flags.failure, 1.0, 1e-10);
            EXPECT_NEAR(delta.norm_squared(), 1.0, 1e-10);
        }
    }
}

TEST(FlagProbabilities, QubitReduction) {
    for (double b0 : {0.0, 0.1, 0.3, 0.5, 0.7}) {
        const ChannelSpec channel({b0, std::sqrt(1 - b0 * b0)});
        const auto flags = flag_probabilities(delta_for(InputState::basis(2, 1), channel));
        EXPECT_NEAR(flags.success, 2 * b0 * b0, 1e-12);
    }
}

// ---------- success branch ----------

StateVector flag_slice(const StateVector &delta, Digit flag) {
    return project(delta, slots::kFlag, flag).post_state;
}

TEST(SuccessBranch, IdentityCellNeedsNoCorrection) {
    Rng rng(19);
    const auto input = random_input(3, rng);
    const auto branch =
        success_branch(flag_slice(delta_for(input, kQutritChannel), 0), input, 0, 0);
    EXPECT_NEAR(fidelity(branch.bob_before, input.state()), 1.0, 1e-12);
}

TEST(SuccessBranch, QutritCellOneZero) {
    Rng rng(20);
    const auto input = random_input(3, rng);
    const auto &a = input.amplitudes();
    const auto branch =
        success_branch(flag_slice(delta_for(input, kQutritChannel), 0), input, 0, 1);
    ASSERT_EQ(branch.n, 1u);
    ASSERT_EQ(branch.m, 0u);
    const std::vector<Complex> expected = {a[0], a[1] * omega(3, 2), a[2] * omega(3, 1)};
    // bob_before carries an arbitrary global phase.
    const StateVector target = StateVector::from_amplitudes(3, 1, expected);
    EXPECT_NEAR(fidelity(branch.bob_before, target), 1.0, 1e-12);
    EXPECT_NEAR(branch.fidelity, 1.0, 1e-12);
}

TEST(SuccessBranch, ExhaustiveExactness) {
    Rng rng(21);
    for (std::size_t levels = 2; levels <= 5; ++levels) {
        for (int i = 0; i < 20; ++i) {
            const auto channel = ChannelSpec::random(levels, rng);
            const auto input = random_input(levels, rng);
            const auto slice = flag_slice(delta_for(input, channel), 0);
            for (Digit m = 0; m < levels; ++m) {
                for (Digit n = 0; n < levels; ++n) {
                    const auto branch = success_branch(slice, input, m, n);
                    EXPECT_NEAR(branch.fidelity, 1.0, 1e-10);
                    // Every cell carries 1/N^2 of the success weight.
                    EXPECT_NEAR(branch.probability_m * branch.probability_n,
                                1.0 / double(levels * levels), 1e-10);
                    EXPECT_EQ(branch.message.encoded(), n * levels + m);
                }
            }
        }
    }
}

TEST(SuccessPath, RejectsNonUniformPayload) {
    const auto crafted = StateVector::basis(3, {0, 0, 0, 0});
    Rng rng(22);
    try {
        (void)success_path(crafted, InputState::basis(3, 0), rng);
        FAIL() << "expected InternalConsistency";
    } catch (const Error &e) {
        EXPECT_EQ(e.kind(), ErrorKind::InternalConsistency);
    }
}

// ---------- failure branch ----------

TEST(FailureBranch, QutritOutcomes) {
    Rng rng(23);
    const auto input = random_input(3, rng);
    const auto &a = input.amplitudes();
    const auto slice = flag_slice(delta_for(input, kQutritChannel), 1);

    // j = 2: shift index 0, slot 1 already holds phi.
    const auto j2 = project(slice, slots::kAliceChannel, 2).post_state;
    EXPECT_NEAR(fidelity(extract_slot(j2, slots::kPayload), input.state()), 1.0, 1e-12);

    // j = 1: slot 1 holds a2|0> + a0|1> + a1|2> until U^(0,2)^dagger.
    const auto j1 = project(slice, slots::kAliceChannel, 1).post_state;
    const auto shifted = StateVector::from_amplitudes(3, 1, {a[2], a[0], a[1]});
    EXPECT_NEAR(fidelity(extract_slot(j1, slots::kPayload), shifted), 1.0, 1e-12);
    EXPECT_NEAR(failure_branch(slice, input, 1).fidelity, 1.0, 1e-12);
    EXPECT_NEAR(failure_branch(slice, input, 1).probability_j, (1.0 / 3 - 1.0 / 6) / 0.5,
                1e-12);
    EXPECT_NEAR(failure_branch(slice, input, 2).probability_j, (1.0 / 2 - 1.0 / 6) / 0.5,
                1e-12);
}

TEST(FailureBranch, ExhaustiveExactnessAndLaw) {
    Rng rng(24);
    for (std::size_t levels = 2; levels <= 5; ++levels) {
        for (int i = 0; i < 20; ++i) {
            const auto channel = ChannelSpec::random(levels, rng);
            const auto input = random_input(levels, rng);
            const auto slice = flag_slice(delta_for(input, channel), 1);
            const double fail = 1 - levels * channel.b0_squared();
            EXPECT_LE(outcome_distribution(slice, slots::kAliceChannel)[0], 1e-10);
            for (Digit j = 1; j < levels; ++j) {
                const double law =
                    (channel.coefficient(j) * channel.coefficient(j) - channel.b0_squared()) /
                    fail;
                const auto branch = failure_branch(slice, input, j);
                EXPECT_NEAR(branch.probability_j, law, 1e-10);
                if (law > 1e-12) {
                    EXPECT_NEAR(branch.fidelity, 1.0, 1e-10);
                }
            }
        }
    }
}

TEST(FailurePath, RejectsWeightOnDigitZero) {
    const auto crafted = StateVector::basis(3, {1, 0, 0, 0});
    Rng rng(25);
    try {
        (void)failure_path(crafted, InputState::basis(3, 0), rng);
        FAIL() << "expected InternalConsistency";
    } catch (const Error &e) {
        EXPECT_EQ(e.kind(), ErrorKind::InternalConsistency);
    }
}

// ---------- run_attempt ----------

void expect_transcript_invariants(const Transcript &t) {
    EXPECT_NE(t.success.has_value(), t.failure.has_value());
    EXPECT_EQ(t.succeeded(), t.flag_outcome == 0);
    EXPECT_GE(t.flag_probability, 0.0);
    EXPECT_LE(t.flag_probability, 1.0);
    EXPECT_NEAR(t.flag_probabilities.success + t.flag_probabilities.failure, 1.0, 1e-10);
    if (t.success) {
        EXPECT_GE(t.success->probability_m, 0.0);
        EXPECT_LE(t.success->probability_m, 1.0);
        EXPECT_LE(t.success->probability_n, 1.0);
    } else {
        EXPECT_GE(t.failure->j, 1u);
        EXPECT_LE(t.failure->probability_j, 1.0);
    }
    EXPECT_NEAR(t.branch_fidelity(), 1.0, 1e-10);
}

TEST(RunAttempt, Deterministic) {
    Rng rng(26);
    const auto input = random_input(4, rng);
    const auto channel = ChannelSpec::random(4, rng);
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        const auto a = run_attempt(input, channel, seed);
        const auto b = run_attempt(input, channel, seed);
        EXPECT_EQ(a.flag_outcome, b.flag_outcome);
        EXPECT_EQ(a.seed, seed);
        if (a.success) {
            EXPECT_EQ(a.success->m, b.success->m);
            EXPECT_EQ(a.success->n, b.success->n);
            EXPECT_EQ(max_abs_diff(a.success->bob_after, b.success->bob_after), 0.0);
        } else {
            EXPECT_EQ(a.failure->j, b.failure->j);
            EXPECT_EQ(max_abs_diff(a.failure->recovered, b.failure->recovered), 0.0);
        }
    }
}

TEST(RunAttempt, MaximalChannelAlwaysSucceeds) {
    Rng rng(27);
    for (std::uint64_t seed = 0; seed < 50; ++seed) {
        const std::size_t levels = 2 + seed % 5;
        const auto t = run_attempt(random_input(levels, rng), ChannelSpec::maximal(levels), seed);
        EXPECT_TRUE(t.succeeded());
        expect_transcript_invariants(t);
    }
}

TEST(RunAttempt, EndToEndExactness) {
    Rng rng(28);
    for (std::size_t levels = 2; levels <= 7; ++levels) {
        for (std::uint64_t seed = 0; seed < 25; ++seed) {
            const auto t = run_attempt(random_input(levels, rng),
                                       ChannelSpec::random(levels, rng), seed);
            expect_transcript_invariants(t);
        }
    }
}

TEST(RunAttempt, EmpiricalRateAtOneHalf) {
    const auto channel = ChannelSpec::from_b0_squared(3, 1.0 / 6);
    const auto input = InputState::from_amplitudes(
        {Complex(0.6, 0), Complex(0, 0.48), Complex(0.64, 0)});
    AttemptStats stats;
    for (std::uint64_t seed = 0; seed < 10000; ++seed) {
        stats.record_attempt(run_attempt(input, channel, seed));
    }
    EXPECT_EQ(stats.attempts(), 10000u);
    EXPECT_GE(stats.empirical_success_rate(), 0.485);
    EXPECT_LE(stats.empirical_success_rate(), 0.515);
    EXPECT_NEAR(*stats.min_fidelity_success(), 1.0, 1e-10);
    EXPECT_NEAR(*stats.min_fidelity_recovery(), 1.0, 1e-10);
}

// ---------- run_resumable ----------

TEST(RunResumable, CertainChannelTakesOneAttempt) {
    Rng rng(29);
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        const auto r = run_resumable(random_input(3, rng), ChannelSpec::maximal(3), 10, seed);
        EXPECT_TRUE(r.delivered);
        EXPECT_EQ(r.attempts_used, 1u);
        EXPECT_NEAR(r.final_fidelity, 1.0, 1e-10);
    }
}

TEST(RunResumable, MeanAttemptsAtOneHalf) {
    const auto channel = ChannelSpec::from_b0_squared(3, 1.0 / 6);
    Rng rng(30);
    AttemptStats total;
    for (std::uint64_t run = 0; run < 10000; ++run) {
        const auto r = run_resumable(random_input(3, rng), channel, 64, run * 64);
        EXPECT_NEAR(r.final_fidelity, 1.0, 1e-10);
        total.merge(r.stats);
    }
    ASSERT_TRUE(total.mean_attempts_to_success().has_value());
    EXPECT_GE(*total.mean_attempts_to_success(), 1.94);
    EXPECT_LE(*total.mean_attempts_to_success(), 2.06);
    EXPECT_EQ(total.runs(), 10000u);
    EXPECT_LE(total.successes(), total.attempts());
}

TEST(RunResumable, ZeroOverlapNeverDeliversButKeepsState) {
    Rng rng(31);
    const auto input = random_input(3, rng);
    std::size_t seen = 0;
    const auto r = run_resumable(input, ChannelSpec({0.0, 0.6, 0.8}), 5, 7,
                                 [&](const Transcript &t) {
                                     EXPECT_FALSE(t.succeeded());
                                     EXPECT_EQ(t.seed, 7 + seen);
                                     ++seen;
                                 });
    EXPECT_FALSE(r.delivered);
    EXPECT_EQ(r.attempts_used, 5u);
    EXPECT_EQ(seen, 5u);
    EXPECT_EQ(r.stats.successes(), 0u);
    EXPECT_FALSE(r.stats.mean_attempts_to_success().has_value());
    EXPECT_NEAR(r.final_fidelity, 1.0, 1e-10);
}

TEST(RunResumable, RejectsZeroAttempts) {
    EXPECT_THROW(run_resumable(InputState::basis(2, 0), ChannelSpec::maximal(2), 0, 1), Error);
}

TEST(AttemptStats, MergeIsAdditive) {
    Rng rng(32);
    const auto channel = ChannelSpec::from_b0_squared(3, 0.1);
    AttemptStats a, b, both;
    for (std::uint64_t s = 0; s < 40; ++s) {
        const auto r = run_resumable(random_input(3, rng), channel, 8, s * 8);
        (s % 2 ? a : b).merge(r.stats);
        both.merge(r.stats);
    }
    a.merge(b);
    EXPECT_EQ(a.attempts(), both.attempts());
    EXPECT_EQ(a.successes(), both.successes());
    EXPECT_EQ(a.runs(), both.runs());
    EXPECT_EQ(a.delivered_runs(), both.delivered_runs());
    EXPECT_EQ(a.mean_attempts_to_success(), both.mean_attempts_to_success());
}

} // namespace
} // namespace qtele

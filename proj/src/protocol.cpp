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

#include "qtele/protocol.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace qtele {

namespace {

void require(bool condition, const std::string &what) {
    if (!condition) {
        throw Error(ErrorKind::InternalConsistency, what);
    }
}

void check_uniform(const std::vector<double> &probs, const char *what) {
    const double expected = 1.0 / static_cast<double>(probs.size());
    for (std::size_t d = 0; d < probs.size(); ++d) {
        require(std::abs(probs[d] - expected) <= tol::kNorm,
                std::string(what) + " marginal is not uniform at digit " +
                    std::to_string(d) + " (p = " + std::to_string(probs[d]) + ")");
    }
}

} // namespace

// ---------------------------------------------------------------------------
// InputState

InputState InputState::from_amplitudes(std::vector<Complex> amplitudes) {
    const std::size_t levels = amplitudes.size();
    auto state = StateVector::unnormalized(levels, 1, std::move(amplitudes));
    if (!state.is_normalized(tol::kAlgebra)) {
        throw Error(ErrorKind::InvalidArgument,
                    "input amplitudes must satisfy sum |alpha_i|^2 = 1");
    }
    return InputState(std::move(state));
}

InputState InputState::from_state(const StateVector &single) {
    if (single.slot_count() != 1) {
        throw Error(ErrorKind::DimensionMismatch, "input state must be one qudit");
    }
    const auto amps = single.amplitudes();
    return from_amplitudes({amps.begin(), amps.end()});
}

InputState InputState::basis(std::size_t level_count, Digit digit) {
    return InputState(StateVector::basis(level_count, {digit}));
}

InputState InputState::random(std::size_t level_count, Rng &rng) {
    std::normal_distribution<double> gauss;
    std::vector<Complex> amps(level_count);
    for (auto &a : amps) {
        const double re = gauss(rng);
        const double im = gauss(rng);
        a = {re, im};
    }
    return InputState(
        StateVector::unnormalized(level_count, 1, std::move(amps)).normalized());
}

ClassicalMessage ClassicalMessage::decode(std::size_t level_count,
                                          std::size_t value) {
    if (value >= level_count * level_count) {
        throw Error(ErrorKind::OutOfRange, "classical message out of range");
    }
    return {level_count, value / level_count, value % level_count};
}

double Transcript::branch_fidelity() const noexcept {
    return success ? success->fidelity : failure->fidelity;
}

// ---------------------------------------------------------------------------
// AttemptStats

void AttemptStats::record_attempt(const Transcript &transcript) {
    ++attempts_;
    if (transcript.success) {
        ++successes_;
        const double f = transcript.success->fidelity;
        min_success_ = min_success_ ? std::min(*min_success_, f) : f;
    } else {
        const double f = transcript.failure->fidelity;
        min_recovery_ = min_recovery_ ? std::min(*min_recovery_, f) : f;
    }
}

void AttemptStats::record_run(bool delivered, std::size_t attempts_used) {
    ++runs_;
    if (delivered) {
        ++delivered_runs_;
        attempts_in_delivered_runs_ += attempts_used;
    }
}

void AttemptStats::merge(const AttemptStats &other) {
    attempts_ += other.attempts_;
    successes_ += other.successes_;
    runs_ += other.runs_;
    delivered_runs_ += other.delivered_runs_;
    attempts_in_delivered_runs_ += other.attempts_in_delivered_runs_;
    auto fold = [](std::optional<double> &into, std::optional<double> from) {
        if (from) {
            into = into ? std::min(*into, *from) : *from;
        }
    };
    fold(min_success_, other.min_success_);
    fold(min_recovery_, other.min_recovery_);
}

double AttemptStats::empirical_success_rate() const noexcept {
    return attempts_ == 0 ? 0.0
                          : static_cast<double>(successes_) /
                                static_cast<double>(attempts_);
}

std::optional<double> AttemptStats::mean_attempts_to_success() const noexcept {
    if (delivered_runs_ == 0) {
        return std::nullopt;
    }
    return static_cast<double>(attempts_in_delivered_runs_) /
           static_cast<double>(delivered_runs_);
}

// ---------------------------------------------------------------------------
// Pipeline

StateVector prepare_total(const InputState &input, const ChannelSpec &channel) {
    if (input.level_count() != channel.level_count()) {
        throw Error(ErrorKind::DimensionMismatch,
                    "input has " + std::to_string(input.level_count()) +
                        " levels but the channel has " +
                        std::to_string(channel.level_count()));
    }
    const auto ancilla = StateVector::basis(input.level_count(), {0});
    return tensor(tensor(ancilla, input.state()), channel_state(channel))
        .normalized();
}

PipelineStages alice_pipeline_stages(const StateVector &total,
                                     const ChannelSpec &channel) {
    const std::size_t levels = channel.level_count();
    if (total.level_count() != levels || total.slot_count() != 4) {
        throw Error(ErrorKind::DimensionMismatch,
                    "pipeline expects a four-slot register matching the channel");
    }
    const auto flag = outcome_distribution(total, slots::kFlag);
    if (std::abs(flag[0] - 1.0) > tol::kNorm) {
        throw Error(ErrorKind::InvalidArgument, "ancilla slot must start in |0>");
    }

    using namespace slots;
    const Operator c = gcnot(levels);
    const Operator c_dag = c.adjoint();
    const Operator filter = filter_d21(channel);

    auto factorized = apply(c, {kAliceChannel, kPayload}, total);
    auto omega = apply(c_dag, {kPayload, kFlag}, factorized);
    auto gamma = apply(filter, {kAliceChannel, kPayload}, omega);
    auto delta = apply(c, {kPayload, kFlag}, gamma);

    require(delta.is_normalized(tol::kNorm),
            "pipeline output lost normalization (norm^2 = " +
                std::to_string(delta.norm_squared()) + ")");
    const auto dist = outcome_distribution(delta, kFlag);
    for (Digit d = 2; d < dist.size(); ++d) {
        require(dist[d] <= tol::kNorm,
                "flag slot has weight on digit " + std::to_string(d));
    }
    return {total, std::move(factorized), std::move(omega), std::move(gamma),
            std::move(delta)};
}

StateVector alice_pipeline(const StateVector &total, const ChannelSpec &channel) {
    return std::move(alice_pipeline_stages(total, channel).delta);
}

FlagProbabilities flag_probabilities(const StateVector &delta) {
    const auto dist = outcome_distribution(delta, slots::kFlag);
    const double total = delta.norm_squared();
    return {dist[0] / total, dist[1] / total};
}

// ---------------------------------------------------------------------------
// Branches

SuccessBranch success_branch(const StateVector &delta_projected,
                             const InputState &input, Digit m, Digit n) {
    using namespace slots;
    const std::size_t levels = delta_projected.level_count();
    auto after_m = project(delta_projected, kPayload, m);
    const auto fourier = apply(dft(levels).adjoint(), {kAliceChannel},
                               after_m.post_state);
    auto after_n = project(fourier, kAliceChannel, n);

    auto bob_before = extract_slot(after_n.post_state, kBob);
    const auto corrected =
        apply(gen_pauli(levels, n, m).adjoint(), {kBob}, after_n.post_state);
    auto bob_after = extract_slot(corrected, kBob);
    const double f = fidelity(bob_after, input.state());
    return {m,
            n,
            after_m.probability,
            after_n.probability,
            ClassicalMessage{levels, n, m},
            std::move(bob_before),
            std::move(bob_after),
            f};
}

SuccessBranch success_path(const StateVector &delta_projected,
                           const InputState &input, Rng &rng) {
    using namespace slots;
    const std::size_t levels = delta_projected.level_count();
    check_uniform(outcome_distribution(delta_projected, kPayload), "payload");
    const auto m = measure(delta_projected, kPayload, rng);

    const auto fourier =
        apply(dft(levels).adjoint(), {kAliceChannel}, m.post_state);
    check_uniform(outcome_distribution(fourier, kAliceChannel), "Fourier");
    const auto n = measure(fourier, kAliceChannel, rng);

    auto bob_before = extract_slot(n.post_state, kBob);
    const auto corrected = apply(gen_pauli(levels, n.outcome, m.outcome).adjoint(),
                                 {kBob}, n.post_state);
    auto bob_after = extract_slot(corrected, kBob);
    const double f = fidelity(bob_after, input.state());
    return {m.outcome,
            n.outcome,
            m.probability,
            n.probability,
            ClassicalMessage{levels, n.outcome, m.outcome},
            std::move(bob_before),
            std::move(bob_after),
            f};
}

FailureBranch failure_branch(const StateVector &delta_projected,
                             const InputState &input, Digit j) {
    using namespace slots;
    const std::size_t levels = delta_projected.level_count();
    auto after_j = project(delta_projected, kAliceChannel, j);
    const auto restored = apply(gen_pauli(levels, 0, (j + 1) % levels).adjoint(),
                                {kPayload}, after_j.post_state);
    auto recovered = extract_slot(restored, kPayload);
    const double f = fidelity(recovered, input.state());
    return {j, after_j.probability, std::move(recovered), f};
}

FailureBranch failure_path(const StateVector &delta_projected,
                           const InputState &input, Rng &rng) {
    using namespace slots;
    const std::size_t levels = delta_projected.level_count();
    const auto dist = outcome_distribution(delta_projected, kAliceChannel);
    require(dist[0] <= tol::kNorm,
            "failure branch has weight on channel digit 0 (p = " +
                std::to_string(dist[0]) + ")");
    const auto j = measure(delta_projected, kAliceChannel, rng);
    require(j.outcome != 0, "failure branch sampled channel digit 0");

    const auto restored =
        apply(gen_pauli(levels, 0, (j.outcome + 1) % levels).adjoint(), {kPayload},
              j.post_state);
    auto recovered = extract_slot(restored, kPayload);
    const double f = fidelity(recovered, input.state());
    return {j.outcome, j.probability, std::move(recovered), f};
}

// ---------------------------------------------------------------------------
// Attempts

Transcript run_attempt(const InputState &input, const ChannelSpec &channel,
                       std::uint64_t seed) {
    Rng rng(seed);
    auto stages = alice_pipeline_stages(prepare_total(input, channel), channel);
    const auto flags = flag_probabilities(stages.delta);
    auto flag = measure(stages.delta, slots::kFlag, rng);
    require(flag.outcome <= 1, "flag measured outside {0, 1}");

    Transcript t{channel, input,   seed,         std::move(stages), flag.outcome,
                 flag.probability, flags,        std::nullopt,      std::nullopt};
    if (flag.outcome == 0) {
        t.success = success_path(flag.post_state, input, rng);
    } else {
        t.failure = failure_path(flag.post_state, input, rng);
    }
    return t;
}

ResumableResult
run_resumable(const InputState &input, const ChannelSpec &channel,
              std::size_t max_attempts, std::uint64_t seed,
              const std::function<void(const Transcript &)> &on_attempt) {
    if (max_attempts < 1) {
        throw Error(ErrorKind::InvalidArgument, "max_attempts must be >= 1");
    }
    AttemptStats stats;
    InputState current = input;
    std::optional<Transcript> last;
    double final_fidelity = 0.0;
    std::size_t used = 0;
    bool delivered = false;
    for (std::size_t attempt = 0; attempt < max_attempts; ++attempt) {
        last = run_attempt(current, channel, seed + attempt);
        stats.record_attempt(*last);
        if (on_attempt) {
            on_attempt(*last);
        }
        ++used;
        if (last->success) {
            delivered = true;
            final_fidelity = fidelity(last->success->bob_after, input.state());
            break;
        }
        // The next attempt teleports whatever Alice recovered.
        current = InputState::from_state(last->failure->recovered);
        final_fidelity = fidelity(current.state(), input.state());
    }
    stats.record_run(delivered, used);
    return {std::move(stats), std::move(*last), delivered, used, final_fidelity};
}

} // namespace qtele

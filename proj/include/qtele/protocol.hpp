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
 * Nondestructive probabilistic teleportation of one qudit.
 *
 * Register layout (four slots, N levels each):
 *   slot 0  Alice's ancilla, used as a measuring apparatus and later as the
 *           success/failure flag
 *   slot 1  the qudit holding the state to teleport
 *   slot 2  Alice's half of the channel
 *   slot 3  Bob's half of the channel
 *
 * Alice applies C(2->1), C(1->0)^dagger, D(2->1), C(1->0) and then reads the
 * flag. Flag 0 (probability N b_0^2) leads to two standard measurements and
 * a Pauli correction by Bob; flag 1 leaves the original state on slot 1 up
 * to a known shift that Alice undoes after reading slot 2.
 */

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "qtele/common.hpp"
#include "qtele/gates.hpp"
#include "qtele/state_vector.hpp"

namespace qtele {

namespace slots {
inline constexpr Slot kFlag = 0;
inline constexpr Slot kPayload = 1;
inline constexpr Slot kAliceChannel = 2;
inline constexpr Slot kBob = 3;
} // namespace slots

/// Single-qudit state sum_i alpha_i |i> with sum |alpha_i|^2 = 1 (1e-12).
class InputState {
  public:
    static InputState from_amplitudes(std::vector<Complex> amplitudes);
    static InputState from_state(const StateVector &single);
    static InputState basis(std::size_t level_count, Digit digit);
    /// Normalized vector of i.i.d. standard complex Gaussians.
    static InputState random(std::size_t level_count, Rng &rng);

    [[nodiscard]] std::size_t level_count() const noexcept {
        return state_.level_count();
    }
    [[nodiscard]] std::span<const Complex> amplitudes() const noexcept {
        return state_.amplitudes();
    }
    [[nodiscard]] const StateVector &state() const noexcept { return state_; }

  private:
    explicit InputState(StateVector state) : state_(std::move(state)) {}
    StateVector state_;
};

/// The pair (n, m) sent to Bob, as two base-N digits n m.
struct ClassicalMessage {
    std::size_t level_count;
    Digit n;
    Digit m;

    [[nodiscard]] std::size_t encoded() const noexcept { return n * level_count + m; }
    static ClassicalMessage decode(std::size_t level_count, std::size_t value);
};

struct PipelineStages {
    StateVector psi_total;  ///< |0> (x) |phi> (x) |Phi>
    StateVector factorized; ///< after C(2->1)
    StateVector omega;      ///< after C(1->0)^dagger
    StateVector gamma;      ///< after D(2->1)
    StateVector delta;      ///< after C(1->0)
};

struct FlagProbabilities {
    double success;
    double failure;
};

struct SuccessBranch {
    Digit m;
    Digit n;
    double probability_m;
    double probability_n; ///< conditional on m
    ClassicalMessage message;
    StateVector bob_before; ///< slot 3 before Bob's correction
    StateVector bob_after;
    double fidelity;
};

struct FailureBranch {
    Digit j;
    double probability_j; ///< conditional on the failure flag
    StateVector recovered; ///< slot 1 after the recovery shift
    double fidelity;
};

struct Transcript {
    ChannelSpec channel;
    InputState input;
    std::uint64_t seed;
    PipelineStages snapshots;
    Digit flag_outcome;
    double flag_probability;
    FlagProbabilities flag_probabilities;
    std::optional<SuccessBranch> success;
    std::optional<FailureBranch> failure;

    [[nodiscard]] bool succeeded() const noexcept { return success.has_value(); }
    /// Fidelity of whichever branch ran.
    [[nodiscard]] double branch_fidelity() const noexcept;
};

class AttemptStats {
  public:
    void record_attempt(const Transcript &transcript);
    /// Closes one resumable run; attempts_used counts its attempts.
    void record_run(bool delivered, std::size_t attempts_used);
    void merge(const AttemptStats &other);

    [[nodiscard]] std::size_t attempts() const noexcept { return attempts_; }
    [[nodiscard]] std::size_t successes() const noexcept { return successes_; }
    [[nodiscard]] std::size_t runs() const noexcept { return runs_; }
    [[nodiscard]] std::size_t delivered_runs() const noexcept { return delivered_runs_; }
    [[nodiscard]] double empirical_success_rate() const noexcept;
    /// Mean attempts over runs that delivered; empty if none did.
    [[nodiscard]] std::optional<double> mean_attempts_to_success() const noexcept;
    [[nodiscard]] std::optional<double> min_fidelity_success() const noexcept {
        return min_success_;
    }
    [[nodiscard]] std::optional<double> min_fidelity_recovery() const noexcept {
        return min_recovery_;
    }

  private:
    std::size_t attempts_ = 0;
    std::size_t successes_ = 0;
    std::size_t runs_ = 0;
    std::size_t delivered_runs_ = 0;
    std::size_t attempts_in_delivered_runs_ = 0;
    std::optional<double> min_success_;
    std::optional<double> min_recovery_;
};

/// |0>_0 (x) |phi>_1 (x) sum_j b_j |jj>_23
StateVector prepare_total(const InputState &input, const ChannelSpec &channel);

PipelineStages alice_pipeline_stages(const StateVector &total,
                                     const ChannelSpec &channel);

/// Returns the state after Alice's four gates. Throws InternalConsistency if
/// the result is not normalized or the flag leaves {0, 1}.
StateVector alice_pipeline(const StateVector &total, const ChannelSpec &channel);

FlagProbabilities flag_probabilities(const StateVector &delta);

/// Deterministic success branch for given outcomes; delta_projected has the
/// flag already projected onto 0.
SuccessBranch success_branch(const StateVector &delta_projected,
                             const InputState &input, Digit m, Digit n);

/// Samples m (slot 1) and n (slot 2 in the Fourier basis), then applies
/// Bob's correction U^(n,m)^dagger.
SuccessBranch success_path(const StateVector &delta_projected,
                           const InputState &input, Rng &rng);

/// Deterministic failure branch; delta_projected has the flag projected
/// onto 1.
FailureBranch failure_branch(const StateVector &delta_projected,
                             const InputState &input, Digit j);

/// Samples j from slot 2 and undoes the shift U^(0, j+1) on slot 1.
FailureBranch failure_path(const StateVector &delta_projected,
                           const InputState &input, Rng &rng);

/// One full attempt, deterministic given the seed.
Transcript run_attempt(const InputState &input, const ChannelSpec &channel,
                       std::uint64_t seed);

struct ResumableResult {
    AttemptStats stats;
    Transcript final_attempt;
    bool delivered;
    std::size_t attempts_used;
    /// Bob's state if delivered, otherwise the state Alice still holds,
    /// compared against the original input.
    double final_fidelity;
};

/// Retries over fresh channel copies until success or max_attempts. Attempt
/// i uses seed + i and takes the previous attempt's recovered state as input.
/// on_attempt, if set, sees every transcript in order.
ResumableResult
run_resumable(const InputState &input, const ChannelSpec &channel,
              std::size_t max_attempts, std::uint64_t seed,
              const std::function<void(const Transcript &)> &on_attempt = {});

} // namespace qtele

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
 * Brute-force verification paths that never run the gate pipeline.
 *
 * Everything here is built from closed-form amplitude expressions: the
 * psi-basis expansion of |phi> (x) |Phi>, and the final four-qudit state
 * split into its success and failure parts. Comparing these against
 * protocol.hpp catches errors in the gate constructors or in apply() that
 * would otherwise confirm themselves.
 */

#include <cstddef>
#include <optional>
#include <vector>

#include "qtele/gates.hpp"
#include "qtele/protocol.hpp"
#include "qtele/state_vector.hpp"

namespace qtele::oracle {

struct OutcomeRow {
    Digit flag;
    /// flag 0: (m, n). flag 1: (j, 0).
    Digit first;
    Digit second;
    double probability;
    /// Bob's qudit (flag 0) or Alice's slot 1 (flag 1) before correction.
    StateVector state;
    /// After U^(n,m)^dagger (flag 0) or U^(0,j+1)^dagger (flag 1).
    StateVector corrected;
    double fidelity;
};

struct OutcomeTable {
    std::size_t level_count;
    std::vector<OutcomeRow> rows;

    [[nodiscard]] double total_probability() const noexcept;
    [[nodiscard]] double flag_probability(Digit flag) const noexcept;
    [[nodiscard]] const OutcomeRow *success_cell(Digit m, Digit n) const noexcept;
    [[nodiscard]] const OutcomeRow *failure_cell(Digit j) const noexcept;
};

/// (1/N) sum_{n,m} |psi_nm>_12 (x) sum_f alpha_{f+m} exp(-i 2 pi f n / N)|f>_3
StateVector reconstruct_total(const InputState &input, const ChannelSpec &channel);

/// Closed form of the four-qudit state after Alice's gates.
StateVector closed_form_delta(const InputState &input, const ChannelSpec &channel);

/// Every branch of the final state with its joint probability. Cells whose
/// weight is below 1e-15 keep their probability but carry a zero state and
/// zero fidelity.
OutcomeTable enumerate_outcomes(const InputState &input, const ChannelSpec &channel);

struct GramRank {
    double determinant_magnitude;
    bool independent;
};

/// Gram determinant of the N^2 psi states. independent when |det| > 1e-12,
/// otherwise when the psi matrix has full numerical rank.
GramRank gram_rank(const ChannelSpec &channel);

/// Solves |total>_123 = sum_{nm} |psi_nm>_12 (x) |c_nm>_3 for the unnormalized
/// Bob vectors c_nm (index n * N + m). Empty if the psi states are
/// linearly dependent.
std::optional<std::vector<std::vector<Complex>>>
expand_in_psi_basis(const StateVector &total, const ChannelSpec &channel);

} // namespace qtele::oracle

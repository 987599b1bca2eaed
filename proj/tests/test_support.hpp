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

#include <cmath>
#include <vector>

#include <gtest/gtest.h>

#include "qtele/gates.hpp"
#include "qtele/protocol.hpp"
#include "qtele/state_vector.hpp"

namespace qtele::testing {

inline StateVector random_state(std::size_t levels, std::size_t slots, Rng &rng) {
    std::normal_distribution<double> g;
    std::vector<Complex> amps(ipow(levels, slots));
    for (auto &a : amps) {
        const double re = g(rng);
        a = {re, g(rng)};
    }
    return StateVector::unnormalized(levels, slots, std::move(amps)).normalized();
}

inline Complex omega(std::size_t levels, long long k) {
    const double angle = 2.0 * M_PI * static_cast<double>(k) / static_cast<double>(levels);
    return {std::cos(angle), std::sin(angle)};
}

inline void expect_amplitudes_near(const StateVector &state,
                                   const std::vector<Complex> &expected,
                                   double tol) {
    ASSERT_EQ(state.dimension(), expected.size());
    for (std::size_t i = 0; i < expected.size(); ++i) {
        EXPECT_NEAR(state[i].real(), expected[i].real(), tol) << "i=" << i;
        EXPECT_NEAR(state[i].imag(), expected[i].imag(), tol) << "i=" << i;
    }
}

/// Direct textbook matrix element of U^(n,m): exp(-i 2 pi f n / N) |f><f+m|.
inline Complex pauli_element(std::size_t levels, Digit n, Digit m, std::size_t row,
                             std::size_t col) {
    if (col != (row + m) % levels) {
        return {0.0, 0.0};
    }
    return omega(levels, -static_cast<long long>(row * n));
}

} // namespace qtele::testing

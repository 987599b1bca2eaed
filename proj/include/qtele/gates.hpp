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
 * Constructors for the operators and two-qudit states used by the resumable
 * teleportation protocol.
 *
 * Sign conventions: omega = exp(+i 2 pi / N), and the generalized Pauli
 * U^(n,m) = sum_f exp(-i 2 pi f n / N) |f><f + m| (addition mod N).
 */

#include <cstddef>
#include <span>
#include <vector>

#include "qtele/common.hpp"
#include "qtele/state_vector.hpp"

namespace qtele {

/// Schmidt coefficients b_0 <= ... <= b_{N-1} of a two-qudit channel
/// sum_j b_j |jj>. Coefficients are real, non-negative, sorted ascending
/// and square-normalized.
class ChannelSpec {
  public:
    /// Throws InvalidArgument unless coefficients satisfy every invariant
    /// (square sum within 1e-12 of one).
    explicit ChannelSpec(std::vector<double> schmidt);

    /// All b_j = 1/sqrt(N).
    static ChannelSpec maximal(std::size_t level_count);

    /// b_0^2 = x, remainder spread uniformly over the other N-1
    /// coefficients. Requires 0 <= x <= 1/N so the result stays sorted.
    static ChannelSpec from_b0_squared(std::size_t level_count, double x);

    /// Squares drawn uniformly from the probability simplex, then sorted.
    static ChannelSpec random(std::size_t level_count, Rng &rng);

    [[nodiscard]] std::size_t level_count() const noexcept {
        return schmidt_.size();
    }
    [[nodiscard]] std::span<const double> coefficients() const noexcept {
        return schmidt_;
    }
    [[nodiscard]] double coefficient(std::size_t j) const { return schmidt_.at(j); }
    [[nodiscard]] double b0() const noexcept { return schmidt_.front(); }
    [[nodiscard]] double b0_squared() const noexcept { return b0() * b0(); }
    /// N b_0^2
    [[nodiscard]] double success_probability() const noexcept;
    [[nodiscard]] bool is_maximally_entangled(double tol = tol::kAlgebra) const;

  private:
    std::vector<double> schmidt_;
};

/// U^(n,m) = sum_f exp(-i 2 pi f n / N) |f><f + m|.
Operator gen_pauli(std::size_t level_count, Digit n, Digit m);

/// sum_y |y><y| (x) U^(0,y); the first slot is the control.
Operator gcnot(std::size_t level_count);

/// Discrimination filter: block y is
/// (b_0/b_y) I + sqrt(1 - (b_0/b_y)^2) U^(0,1), with b_0/b_y := 0 when
/// b_y = 0. First slot is the control. Not unitary unless every b_y equals
/// b_0; it is applied as a plain linear map.
Operator filter_d21(const ChannelSpec &channel);

/// F = N^(-1/2) sum_{j,n} omega^(j n) |j><n|, so F|n> is the n-th Fourier
/// state.
Operator dft(std::size_t level_count);

/// sum_j b_j |jj> as a two-slot register.
StateVector channel_state(const ChannelSpec &channel);

/// |psi_nm> = sum_k b_k exp(i 2 pi k n / N) |k + m>|k>.
StateVector psi_state(const ChannelSpec &channel, Digit n, Digit m);

/// All N^2 psi states; element n * N + m is |psi_nm>.
std::vector<StateVector> psi_basis(const ChannelSpec &channel);

/// exp(i 2 pi k / N)
Complex root_of_unity(std::size_t level_count, long long k);

} // namespace qtele

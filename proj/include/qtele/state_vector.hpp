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
 * Dense state vectors and operators for registers of equal-dimension qudits.
 *
 * A register of k qudits with N levels each is stored as N^k amplitudes.
 * Basis state |d_0 d_1 ... d_{k-1}> lives at flat index
 * sum_i d_i * N^(k-1-i), i.e. slot 0 is the most significant digit, which
 * matches left-to-right ket notation.
 */

#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

#include "qtele/common.hpp"

namespace qtele {

class StateVector {
  public:
    /// Computational basis state |digits[0] digits[1] ...>.
    static StateVector basis(std::size_t level_count,
                             std::span<const Digit> digits);
    static StateVector basis(std::size_t level_count,
                             std::initializer_list<Digit> digits);

    /// Validates length N^k and unit norm (within tol::kNorm).
    static StateVector from_amplitudes(std::size_t level_count,
                                       std::size_t slot_count,
                                       std::vector<Complex> amplitudes);

    /// Validates length only. Used for intermediates of non-unitary maps.
    static StateVector unnormalized(std::size_t level_count,
                                    std::size_t slot_count,
                                    std::vector<Complex> amplitudes);

    [[nodiscard]] std::size_t level_count() const noexcept { return levels_; }
    [[nodiscard]] std::size_t slot_count() const noexcept { return slots_; }
    [[nodiscard]] std::size_t dimension() const noexcept {
        return amplitudes_.size();
    }
    [[nodiscard]] std::span<const Complex> amplitudes() const noexcept {
        return amplitudes_;
    }
    [[nodiscard]] const Complex &operator[](std::size_t index) const {
        return amplitudes_[index];
    }
    [[nodiscard]] Complex amplitude(std::span<const Digit> digits) const;

    [[nodiscard]] double norm_squared() const noexcept;
    [[nodiscard]] double norm() const noexcept;
    [[nodiscard]] bool is_normalized(double tol = tol::kNorm) const noexcept;
    /// Copy rescaled to unit norm. Throws NumericalDegeneracy on a null vector.
    [[nodiscard]] StateVector normalized() const;

    [[nodiscard]] std::size_t index_of(std::span<const Digit> digits) const;
    [[nodiscard]] std::vector<Digit> digits_of(std::size_t index) const;

    /// N^(k-1-slot): distance between neighbouring digits of one slot.
    [[nodiscard]] std::size_t stride(Slot slot) const;

  private:
    StateVector(std::size_t level_count, std::size_t slot_count,
                std::vector<Complex> amplitudes);

    std::size_t levels_;
    std::size_t slots_;
    std::vector<Complex> amplitudes_;
};

class Operator {
  public:
    /// matrix is row-major with side N^arity.
    Operator(std::size_t level_count, std::size_t arity,
             std::vector<Complex> matrix);

    static Operator identity(std::size_t level_count, std::size_t arity = 1);

    [[nodiscard]] std::size_t level_count() const noexcept { return levels_; }
    [[nodiscard]] std::size_t arity() const noexcept { return arity_; }
    [[nodiscard]] std::size_t side() const noexcept { return side_; }
    [[nodiscard]] std::span<const Complex> matrix() const noexcept {
        return matrix_;
    }
    [[nodiscard]] const Complex &at(std::size_t row, std::size_t col) const {
        return matrix_[row * side_ + col];
    }

    [[nodiscard]] Operator adjoint() const;

    /// max |(M M^dagger - I)_{rc}|. Costs one dense product.
    [[nodiscard]] double unitarity_deviation() const;
    [[nodiscard]] bool unitary_within(double tol) const {
        return unitarity_deviation() <= tol;
    }

    /// Largest entrywise |a - b|. Shapes must agree.
    [[nodiscard]] double max_abs_diff(const Operator &other) const;

    friend Operator operator*(const Operator &lhs, const Operator &rhs);

  private:
    std::size_t levels_;
    std::size_t arity_;
    std::size_t side_;
    std::vector<Complex> matrix_;
};

/// |a> (x) |b>: the slots of b follow those of a.
StateVector tensor(const StateVector &a, const StateVector &b);

/// Applies op to the listed slots (targets[0] is the op's most significant
/// qudit) and identity elsewhere. Never renormalizes.
StateVector apply(const Operator &op, std::span<const Slot> targets,
                  const StateVector &state);
StateVector apply(const Operator &op, std::initializer_list<Slot> targets,
                  const StateVector &state);

/// Marginal weight of every digit at one slot; index = digit.
std::vector<double> outcome_distribution(const StateVector &state, Slot slot);

struct Projection {
    double probability;
    StateVector post_state;
};

/// Projects one slot onto a digit and renormalizes.
Projection project(const StateVector &state, Slot slot, Digit digit);

struct Measurement {
    Digit outcome;
    double probability;
    StateVector post_state;
};

/// Standard-basis measurement of one slot, sampled from rng.
Measurement measure(const StateVector &state, Slot slot, Rng &rng);

/// |<a|b>|^2, clamped to [0, 1].
double fidelity(const StateVector &a, const StateVector &b);

/// <target| rho_slot |target> where rho_slot is the reduced state of one
/// slot. Equals fidelity(extract_slot(...), target) for product states.
double slot_fidelity(const StateVector &state, Slot slot,
                     const StateVector &target);

/// Single-qudit state of one slot, provided the slot is not entangled with
/// the rest (purity within tol of 1). The phase is fixed by the dominant
/// branch of the remaining slots.
StateVector extract_slot(const StateVector &state, Slot slot,
                         double tol = tol::kNorm);

/// max_i |a_i - b_i|
double max_abs_diff(const StateVector &a, const StateVector &b);

} // namespace qtele

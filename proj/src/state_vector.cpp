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

#include "qtele/state_vector.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "qtele/kernels.hpp"

namespace qtele {

const char *to_string(ErrorKind kind) noexcept {
    switch (kind) {
    case ErrorKind::DimensionMismatch:
        return "dimension mismatch";
    case ErrorKind::InvalidTargets:
        return "invalid targets";
    case ErrorKind::OutOfRange:
        return "out of range";
    case ErrorKind::InvalidArgument:
        return "invalid argument";
    case ErrorKind::NumericalDegeneracy:
        return "numerical degeneracy";
    case ErrorKind::InternalConsistency:
        return "internal consistency";
    }
    return "unknown";
}

std::size_t ipow(std::size_t base, std::size_t exponent) {
    std::size_t out = 1;
    for (std::size_t i = 0; i < exponent; ++i) {
        if (base != 0 && out > std::numeric_limits<std::size_t>::max() / base) {
            throw Error(ErrorKind::OutOfRange, "register dimension overflows");
        }
        out *= base;
    }
    return out;
}

namespace {

// Index decomposition around one slot: i = (hi * N + d) * stride + lo.
struct SlotView {
    std::size_t levels;
    std::size_t stride;
    std::size_t outer;

    SlotView(const StateVector &s, Slot slot)
        : levels(s.level_count()), stride(s.stride(slot)),
          outer(s.dimension() / (s.level_count() * s.stride(slot))) {}

    [[nodiscard]] std::size_t index(std::size_t hi, Digit d,
                                    std::size_t lo) const {
        return (hi * levels + d) * stride + lo;
    }
    [[nodiscard]] std::size_t rest_count() const { return outer * stride; }
};

void check_slot(const StateVector &s, Slot slot) {
    if (slot >= s.slot_count()) {
        throw Error(ErrorKind::OutOfRange,
                    "slot " + std::to_string(slot) + " outside register of " +
                        std::to_string(s.slot_count()) + " slots");
    }
}

void check_normalized(const StateVector &s, const char *what) {
    if (!s.is_normalized()) {
        throw Error(ErrorKind::InvalidArgument,
                    std::string(what) + " requires a normalized state (norm^2 = " +
                        std::to_string(s.norm_squared()) + ")");
    }
}

} // namespace

// ---------------------------------------------------------------------------
// StateVector

StateVector::StateVector(std::size_t level_count, std::size_t slot_count,
                         std::vector<Complex> amplitudes)
    : levels_(level_count), slots_(slot_count),
      amplitudes_(std::move(amplitudes)) {
    if (levels_ < 2) {
        throw Error(ErrorKind::InvalidArgument, "level count must be >= 2");
    }
    if (slots_ < 1) {
        throw Error(ErrorKind::InvalidArgument, "slot count must be >= 1");
    }
    if (amplitudes_.size() != ipow(levels_, slots_)) {
        throw Error(ErrorKind::DimensionMismatch,
                    "expected " + std::to_string(ipow(levels_, slots_)) +
                        " amplitudes, got " +
                        std::to_string(amplitudes_.size()));
    }
}

StateVector StateVector::basis(std::size_t level_count,
                               std::span<const Digit> digits) {
    std::vector<Complex> amps(ipow(level_count, digits.size()));
    StateVector out(level_count, digits.size(), std::move(amps));
    out.amplitudes_[out.index_of(digits)] = 1.0;
    return out;
}

StateVector StateVector::basis(std::size_t level_count,
                               std::initializer_list<Digit> digits) {
    return basis(level_count, std::span<const Digit>(digits.begin(), digits.size()));
}

StateVector StateVector::from_amplitudes(std::size_t level_count,
                                         std::size_t slot_count,
                                         std::vector<Complex> amplitudes) {
    StateVector out(level_count, slot_count, std::move(amplitudes));
    if (!out.is_normalized()) {
        throw Error(ErrorKind::InvalidArgument,
                    "amplitudes are not normalized (norm^2 = " +
                        std::to_string(out.norm_squared()) + ")");
    }
    return out;
}

StateVector StateVector::unnormalized(std::size_t level_count,
                                      std::size_t slot_count,
                                      std::vector<Complex> amplitudes) {
    return StateVector(level_count, slot_count, std::move(amplitudes));
}

Complex StateVector::amplitude(std::span<const Digit> digits) const {
    return amplitudes_[index_of(digits)];
}

double StateVector::norm_squared() const noexcept {
    return kernels::active().norm_squared(amplitudes_.data(), amplitudes_.size());
}

double StateVector::norm() const noexcept { return std::sqrt(norm_squared()); }

bool StateVector::is_normalized(double tol) const noexcept {
    return std::abs(norm_squared() - 1.0) <= tol;
}

StateVector StateVector::normalized() const {
    const double n = norm();
    if (n * n < tol::kDegenerate) {
        throw Error(ErrorKind::NumericalDegeneracy, "cannot normalize a null vector");
    }
    StateVector out = *this;
    kernels::active().scale(out.amplitudes_.data(), out.amplitudes_.size(),
                            1.0 / n);
    return out;
}

std::size_t StateVector::index_of(std::span<const Digit> digits) const {
    if (digits.size() != slots_) {
        throw Error(ErrorKind::DimensionMismatch,
                    "digit string length differs from slot count");
    }
    std::size_t index = 0;
    for (Digit d : digits) {
        if (d >= levels_) {
            throw Error(ErrorKind::OutOfRange, "digit " + std::to_string(d) +
                                                   " >= level count");
        }
        index = index * levels_ + d;
    }
    return index;
}

std::vector<Digit> StateVector::digits_of(std::size_t index) const {
    if (index >= amplitudes_.size()) {
        throw Error(ErrorKind::OutOfRange, "basis index out of range");
    }
    std::vector<Digit> digits(slots_);
    for (std::size_t i = slots_; i-- > 0;) {
        digits[i] = index % levels_;
        index /= levels_;
    }
    return digits;
}

std::size_t StateVector::stride(Slot slot) const {
    if (slot >= slots_) {
        throw Error(ErrorKind::OutOfRange, "slot out of range");
    }
    return ipow(levels_, slots_ - 1 - slot);
}

// ---------------------------------------------------------------------------
// Operator

Operator::Operator(std::size_t level_count, std::size_t arity,
                   std::vector<Complex> matrix)
    : levels_(level_count), arity_(arity), side_(ipow(level_count, arity)),
      matrix_(std::move(matrix)) {
    if (levels_ < 2 || arity_ < 1) {
        throw Error(ErrorKind::InvalidArgument,
                    "operator needs level count >= 2 and arity >= 1");
    }
    if (matrix_.size() != side_ * side_) {
        throw Error(ErrorKind::DimensionMismatch,
                    "operator matrix must be square with side N^arity = " +
                        std::to_string(side_));
    }
}

Operator Operator::identity(std::size_t level_count, std::size_t arity) {
    const std::size_t side = ipow(level_count, arity);
    std::vector<Complex> m(side * side);
    for (std::size_t i = 0; i < side; ++i) {
        m[i * side + i] = 1.0;
    }
    return Operator(level_count, arity, std::move(m));
}

Operator Operator::adjoint() const {
    std::vector<Complex> m(matrix_.size());
    for (std::size_t r = 0; r < side_; ++r) {
        for (std::size_t c = 0; c < side_; ++c) {
            m[c * side_ + r] = std::conj(matrix_[r * side_ + c]);
        }
    }
    return Operator(levels_, arity_, std::move(m));
}

double Operator::unitarity_deviation() const {
    // (M M^dagger)_{rc} = sum_k M_rk conj(M_ck) = conj(<row r | row c>)
    const auto &k = kernels::active();
    double worst = 0.0;
    for (std::size_t r = 0; r < side_; ++r) {
        const Complex *row_r = matrix_.data() + r * side_;
        for (std::size_t c = 0; c < side_; ++c) {
            const Complex *row_c = matrix_.data() + c * side_;
            Complex entry = std::conj(k.dot_conj(row_r, row_c, side_));
            if (r == c) {
                entry -= 1.0;
            }
            worst = std::max(worst, std::abs(entry));
        }
    }
    return worst;
}

double Operator::max_abs_diff(const Operator &other) const {
    if (other.levels_ != levels_ || other.arity_ != arity_) {
        throw Error(ErrorKind::DimensionMismatch, "operator shapes differ");
    }
    double worst = 0.0;
    for (std::size_t i = 0; i < matrix_.size(); ++i) {
        worst = std::max(worst, std::abs(matrix_[i] - other.matrix_[i]));
    }
    return worst;
}

Operator operator*(const Operator &lhs, const Operator &rhs) {
    if (lhs.levels_ != rhs.levels_ || lhs.arity_ != rhs.arity_) {
        throw Error(ErrorKind::DimensionMismatch, "operator shapes differ");
    }
    const std::size_t n = lhs.side_;
    // Row c of rhs^dagger is the conjugated column c of rhs, so
    // (lhs rhs)_{rc} = sum_i conj(rhs^dagger_{ci}) lhs_{ri}.
    const Operator rhs_adj = rhs.adjoint();
    const auto &k = kernels::active();
    std::vector<Complex> m(n * n);
    for (std::size_t r = 0; r < n; ++r) {
        for (std::size_t c = 0; c < n; ++c) {
            m[r * n + c] = k.dot_conj(rhs_adj.matrix_.data() + c * n,
                                      lhs.matrix_.data() + r * n, n);
        }
    }
    return Operator(lhs.levels_, lhs.arity_, std::move(m));
}

// ---------------------------------------------------------------------------
// Free functions

StateVector tensor(const StateVector &a, const StateVector &b) {
    if (a.level_count() != b.level_count()) {
        throw Error(ErrorKind::DimensionMismatch,
                    "tensor of registers with different level counts (" +
                        std::to_string(a.level_count()) + " vs " +
                        std::to_string(b.level_count()) + ")");
    }
    const auto lhs = a.amplitudes();
    const auto rhs = b.amplitudes();
    std::vector<Complex> out(lhs.size() * rhs.size());
    for (std::size_t i = 0; i < lhs.size(); ++i) {
        for (std::size_t j = 0; j < rhs.size(); ++j) {
            out[i * rhs.size() + j] = lhs[i] * rhs[j];
        }
    }
    return StateVector::unnormalized(a.level_count(),
                                     a.slot_count() + b.slot_count(),
                                     std::move(out));
}

StateVector apply(const Operator &op, std::span<const Slot> targets,
                  const StateVector &state) {
    const std::size_t levels = state.level_count();
    const std::size_t slots = state.slot_count();
    if (op.level_count() != levels) {
        throw Error(ErrorKind::DimensionMismatch,
                    "operator level count differs from register");
    }
    if (op.arity() != targets.size()) {
        throw Error(ErrorKind::InvalidTargets,
                    "operator arity " + std::to_string(op.arity()) + " but " +
                        std::to_string(targets.size()) + " targets given");
    }
    std::vector<bool> is_target(slots, false);
    for (Slot t : targets) {
        if (t >= slots) {
            throw Error(ErrorKind::InvalidTargets,
                        "target slot " + std::to_string(t) + " out of range");
        }
        if (is_target[t]) {
            throw Error(ErrorKind::InvalidTargets,
                        "target slot " + std::to_string(t) + " repeated");
        }
        is_target[t] = true;
    }

    const std::size_t side = op.side();
    std::vector<std::size_t> strides(slots);
    for (Slot s = 0; s < slots; ++s) {
        strides[s] = state.stride(s);
    }

    // Offset of every sub-basis state of the targets, op ordering.
    std::vector<std::size_t> offsets(side, 0);
    for (std::size_t r = 0; r < side; ++r) {
        std::size_t rem = r;
        for (std::size_t i = targets.size(); i-- > 0;) {
            offsets[r] += (rem % levels) * strides[targets[i]];
            rem /= levels;
        }
    }

    std::vector<Slot> others;
    for (Slot s = 0; s < slots; ++s) {
        if (!is_target[s]) {
            others.push_back(s);
        }
    }

    const auto in = state.amplitudes();
    std::vector<Complex> out(in.size());
    std::vector<Complex> x(side);
    std::vector<Complex> y(side);
    const auto &k = kernels::active();

    const std::size_t groups = in.size() / side;
    for (std::size_t g = 0; g < groups; ++g) {
        std::size_t base = 0;
        std::size_t rem = g;
        for (std::size_t i = others.size(); i-- > 0;) {
            base += (rem % levels) * strides[others[i]];
            rem /= levels;
        }
        for (std::size_t c = 0; c < side; ++c) {
            x[c] = in[base + offsets[c]];
        }
        k.matvec(op.matrix().data(), side, x.data(), y.data());
        for (std::size_t r = 0; r < side; ++r) {
            out[base + offsets[r]] = y[r];
        }
    }
    return StateVector::unnormalized(levels, slots, std::move(out));
}

StateVector apply(const Operator &op, std::initializer_list<Slot> targets,
                  const StateVector &state) {
    return apply(op, std::span<const Slot>(targets.begin(), targets.size()),
                 state);
}

std::vector<double> outcome_distribution(const StateVector &state, Slot slot) {
    check_slot(state, slot);
    const SlotView view(state, slot);
    const auto amps = state.amplitudes();
    const auto &k = kernels::active();
    std::vector<double> probs(view.levels, 0.0);
    for (std::size_t hi = 0; hi < view.outer; ++hi) {
        for (Digit d = 0; d < view.levels; ++d) {
            probs[d] += k.norm_squared(amps.data() + view.index(hi, d, 0),
                                       view.stride);
        }
    }
    return probs;
}

Projection project(const StateVector &state, Slot slot, Digit digit) {
    check_slot(state, slot);
    if (digit >= state.level_count()) {
        throw Error(ErrorKind::OutOfRange, "projection digit out of range");
    }
    const SlotView view(state, slot);
    const auto amps = state.amplitudes();
    std::vector<Complex> out(amps.size());
    for (std::size_t hi = 0; hi < view.outer; ++hi) {
        const std::size_t begin = view.index(hi, digit, 0);
        std::copy_n(amps.begin() + static_cast<std::ptrdiff_t>(begin),
                    view.stride, out.begin() + static_cast<std::ptrdiff_t>(begin));
    }
    const auto &k = kernels::active();
    const double weight = k.norm_squared(out.data(), out.size());
    if (weight < tol::kDegenerate) {
        throw Error(ErrorKind::NumericalDegeneracy,
                    "projection of slot " + std::to_string(slot) + " onto " +
                        std::to_string(digit) + " has vanishing weight");
    }
    k.scale(out.data(), out.size(), 1.0 / std::sqrt(weight));
    return {weight / state.norm_squared(),
            StateVector::unnormalized(state.level_count(), state.slot_count(),
                                      std::move(out))};
}

Measurement measure(const StateVector &state, Slot slot, Rng &rng) {
    const auto probs = outcome_distribution(state, slot);
    double total = 0.0;
    for (double p : probs) {
        total += p;
    }
    if (total < tol::kDegenerate) {
        throw Error(ErrorKind::NumericalDegeneracy,
                    "all marginal probabilities of slot " +
                        std::to_string(slot) + " vanish");
    }
    check_normalized(state, "measure");
    const double u = uniform01(rng) * total;
    double cumulative = 0.0;
    Digit outcome = probs.size() - 1;
    for (Digit d = 0; d < probs.size(); ++d) {
        cumulative += probs[d];
        if (u < cumulative && probs[d] > 0.0) {
            outcome = d;
            break;
        }
    }
    // Rounding can leave u past the last cumulative; take the last nonzero.
    while (probs[outcome] <= 0.0 && outcome > 0) {
        --outcome;
    }
    auto projected = project(state, slot, outcome);
    return {outcome, probs[outcome] / total, std::move(projected.post_state)};
}

double fidelity(const StateVector &a, const StateVector &b) {
    if (a.level_count() != b.level_count() || a.slot_count() != b.slot_count()) {
        throw Error(ErrorKind::DimensionMismatch,
                    "fidelity of registers with different shapes");
    }
    const Complex overlap = kernels::active().dot_conj(
        a.amplitudes().data(), b.amplitudes().data(), a.dimension());
    return std::clamp(std::norm(overlap), 0.0, 1.0);
}

namespace {

// Vector of slot amplitudes for one configuration (hi, lo) of the rest.
void slot_column(const StateVector &s, const SlotView &view, std::size_t rest,
                 std::vector<Complex> &column) {
    const std::size_t hi = rest / view.stride;
    const std::size_t lo = rest % view.stride;
    for (Digit d = 0; d < view.levels; ++d) {
        column[d] = s[view.index(hi, d, lo)];
    }
}

void check_single(const StateVector &state, Slot slot, const StateVector &target) {
    check_slot(state, slot);
    if (target.slot_count() != 1 || target.level_count() != state.level_count()) {
        throw Error(ErrorKind::DimensionMismatch,
                    "slot comparison needs a single qudit of equal dimension");
    }
}

} // namespace

double slot_fidelity(const StateVector &state, Slot slot,
                     const StateVector &target) {
    check_single(state, slot, target);
    const SlotView view(state, slot);
    const auto &k = kernels::active();
    std::vector<Complex> column(view.levels);
    double overlap = 0.0;
    for (std::size_t rest = 0; rest < view.rest_count(); ++rest) {
        slot_column(state, view, rest, column);
        overlap += std::norm(
            k.dot_conj(target.amplitudes().data(), column.data(), view.levels));
    }
    const double total = state.norm_squared();
    if (total < tol::kDegenerate) {
        throw Error(ErrorKind::NumericalDegeneracy, "slot fidelity of a null state");
    }
    return std::clamp(overlap / total, 0.0, 1.0);
}

StateVector extract_slot(const StateVector &state, Slot slot, double tol) {
    check_slot(state, slot);
    const SlotView view(state, slot);
    const auto &k = kernels::active();
    std::vector<Complex> column(view.levels);

    std::size_t best = 0;
    double best_weight = -1.0;
    for (std::size_t rest = 0; rest < view.rest_count(); ++rest) {
        slot_column(state, view, rest, column);
        const double w = k.norm_squared(column.data(), view.levels);
        if (w > best_weight) {
            best_weight = w;
            best = rest;
        }
    }
    if (best_weight < tol::kDegenerate) {
        throw Error(ErrorKind::NumericalDegeneracy, "extracting from a null state");
    }
    slot_column(state, view, best, column);
    k.scale(column.data(), view.levels, 1.0 / std::sqrt(best_weight));
    auto candidate = StateVector::unnormalized(state.level_count(), 1, column);

    const double purity = slot_fidelity(state, slot, candidate);
    if (std::abs(1.0 - purity) > tol) {
        throw Error(ErrorKind::InvalidArgument,
                    "slot " + std::to_string(slot) +
                        " is entangled with the rest of the register (overlap " +
                        std::to_string(purity) + ")");
    }
    return candidate;
}

double max_abs_diff(const StateVector &a, const StateVector &b) {
    if (a.dimension() != b.dimension()) {
        throw Error(ErrorKind::DimensionMismatch, "state dimensions differ");
    }
    double worst = 0.0;
    for (std::size_t i = 0; i < a.dimension(); ++i) {
        worst = std::max(worst, std::abs(a[i] - b[i]));
    }
    return worst;
}

} // namespace qtele

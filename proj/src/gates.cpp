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

#include "qtele/gates.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <sstream>
#include <string>

namespace qtele {

namespace {

void check_levels(std::size_t level_count) {
    if (level_count < 2) {
        throw Error(ErrorKind::InvalidArgument, "level count must be >= 2");
    }
}

// Controlled operator with block[y] acting on the target when control = y.
Operator controlled(std::size_t levels, const std::vector<Operator> &blocks) {
    const std::size_t side = levels * levels;
    std::vector<Complex> m(side * side);
    for (std::size_t y = 0; y < levels; ++y) {
        for (std::size_t r = 0; r < levels; ++r) {
            for (std::size_t c = 0; c < levels; ++c) {
                m[(y * levels + r) * side + (y * levels + c)] = blocks[y].at(r, c);
            }
        }
    }
    return Operator(levels, 2, std::move(m));
}

} // namespace

Complex root_of_unity(std::size_t level_count, long long k) {
    const auto n = static_cast<long long>(level_count);
    const long long reduced = ((k % n) + n) % n;
    // Exact values on the axes keep identities like U^(0,m) phase-free.
    if (reduced == 0) {
        return {1.0, 0.0};
    }
    if (2 * reduced == n) {
        return {-1.0, 0.0};
    }
    if (4 * reduced == n) {
        return {0.0, 1.0};
    }
    if (4 * reduced == 3 * n) {
        return {0.0, -1.0};
    }
    const double angle = 2.0 * std::numbers::pi * static_cast<double>(reduced) /
                         static_cast<double>(n);
    return {std::cos(angle), std::sin(angle)};
}

// ---------------------------------------------------------------------------
// ChannelSpec

ChannelSpec::ChannelSpec(std::vector<double> schmidt)
    : schmidt_(std::move(schmidt)) {
    check_levels(schmidt_.size());
    double total = 0.0;
    for (std::size_t j = 0; j < schmidt_.size(); ++j) {
        const double b = schmidt_[j];
        if (!std::isfinite(b) || b < 0.0) {
            throw Error(ErrorKind::InvalidArgument,
                        "Schmidt coefficient " + std::to_string(j) +
                            " must be a finite non-negative number");
        }
        if (j > 0 && b < schmidt_[j - 1]) {
            throw Error(ErrorKind::InvalidArgument,
                        "Schmidt coefficients must be sorted ascending");
        }
        total += b * b;
    }
    if (std::abs(total - 1.0) > tol::kAlgebra) {
        std::ostringstream msg;
        msg.precision(17);
        msg << "Schmidt coefficients must satisfy sum b_j^2 = 1 (got " << total
            << ")";
        throw Error(ErrorKind::InvalidArgument, msg.str());
    }
}

ChannelSpec ChannelSpec::maximal(std::size_t level_count) {
    check_levels(level_count);
    return ChannelSpec(std::vector<double>(
        level_count, 1.0 / std::sqrt(static_cast<double>(level_count))));
}

ChannelSpec ChannelSpec::from_b0_squared(std::size_t level_count, double x) {
    check_levels(level_count);
    const double n = static_cast<double>(level_count);
    // Allow a rounding hair above 1/N so grids ending at 1/N stay valid.
    if (!(x >= 0.0) || x > 1.0 / n + 1e-12) {
        throw Error(ErrorKind::InvalidArgument,
                    "b0^2 must lie in [0, 1/N] for N = " +
                        std::to_string(level_count));
    }
    x = std::min(x, 1.0 / n);
    const double rest = std::sqrt(std::max(0.0, (1.0 - x) / (n - 1.0)));
    std::vector<double> b(level_count, rest);
    b[0] = std::min(std::sqrt(x), rest);
    return ChannelSpec(std::move(b));
}

ChannelSpec ChannelSpec::random(std::size_t level_count, Rng &rng) {
    check_levels(level_count);
    // Normalized exponentials are uniform on the simplex.
    std::vector<double> w(level_count);
    for (auto &v : w) {
        v = -std::log1p(-uniform01(rng));
    }
    const double total = std::accumulate(w.begin(), w.end(), 0.0);
    std::vector<double> b(level_count);
    for (std::size_t j = 0; j < level_count; ++j) {
        b[j] = std::sqrt(w[j] / total);
    }
    std::sort(b.begin(), b.end());
    return ChannelSpec(std::move(b));
}

double ChannelSpec::success_probability() const noexcept {
    return static_cast<double>(level_count()) * b0_squared();
}

bool ChannelSpec::is_maximally_entangled(double tol) const {
    return schmidt_.back() - schmidt_.front() <= tol;
}

// ---------------------------------------------------------------------------
// Operators

Operator gen_pauli(std::size_t level_count, Digit n, Digit m) {
    check_levels(level_count);
    if (n >= level_count || m >= level_count) {
        throw Error(ErrorKind::OutOfRange,
                    "generalized Pauli indices (" + std::to_string(n) + ", " +
                        std::to_string(m) + ") out of range for N = " +
                        std::to_string(level_count));
    }
    std::vector<Complex> mat(level_count * level_count);
    for (std::size_t f = 0; f < level_count; ++f) {
        const auto phase = -static_cast<long long>(f * n);
        mat[f * level_count + (f + m) % level_count] =
            root_of_unity(level_count, phase);
    }
    return Operator(level_count, 1, std::move(mat));
}

Operator gcnot(std::size_t level_count) {
    check_levels(level_count);
    std::vector<Operator> blocks;
    blocks.reserve(level_count);
    for (Digit y = 0; y < level_count; ++y) {
        blocks.push_back(gen_pauli(level_count, 0, y));
    }
    return controlled(level_count, blocks);
}

Operator filter_d21(const ChannelSpec &channel) {
    const std::size_t levels = channel.level_count();
    const Operator shift = gen_pauli(levels, 0, 1);
    std::vector<Operator> blocks;
    blocks.reserve(levels);
    for (Digit y = 0; y < levels; ++y) {
        const double by = channel.coefficient(y);
        const double ratio = by > 0.0 ? std::min(1.0, channel.b0() / by) : 0.0;
        const double leak = std::sqrt(std::max(0.0, 1.0 - ratio * ratio));
        std::vector<Complex> m(levels * levels);
        for (std::size_t i = 0; i < m.size(); ++i) {
            m[i] = leak * shift.matrix()[i];
        }
        for (std::size_t d = 0; d < levels; ++d) {
            m[d * levels + d] += ratio;
        }
        blocks.emplace_back(levels, 1, std::move(m));
    }
    return controlled(levels, blocks);
}

Operator dft(std::size_t level_count) {
    check_levels(level_count);
    const double norm = 1.0 / std::sqrt(static_cast<double>(level_count));
    std::vector<Complex> m(level_count * level_count);
    for (std::size_t j = 0; j < level_count; ++j) {
        for (std::size_t n = 0; n < level_count; ++n) {
            m[j * level_count + n] =
                norm * root_of_unity(level_count, static_cast<long long>(j * n));
        }
    }
    return Operator(level_count, 1, std::move(m));
}

// ---------------------------------------------------------------------------
// States

StateVector channel_state(const ChannelSpec &channel) {
    const std::size_t levels = channel.level_count();
    std::vector<Complex> amps(levels * levels);
    for (std::size_t j = 0; j < levels; ++j) {
        amps[j * levels + j] = channel.coefficient(j);
    }
    return StateVector::from_amplitudes(levels, 2, std::move(amps));
}

StateVector psi_state(const ChannelSpec &channel, Digit n, Digit m) {
    const std::size_t levels = channel.level_count();
    if (n >= levels || m >= levels) {
        throw Error(ErrorKind::OutOfRange, "psi state index out of range");
    }
    std::vector<Complex> amps(levels * levels);
    for (std::size_t k = 0; k < levels; ++k) {
        const std::size_t first = (k + m) % levels;
        amps[first * levels + k] =
            channel.coefficient(k) *
            root_of_unity(levels, static_cast<long long>(k * n));
    }
    return StateVector::from_amplitudes(levels, 2, std::move(amps));
}

std::vector<StateVector> psi_basis(const ChannelSpec &channel) {
    const std::size_t levels = channel.level_count();
    std::vector<StateVector> out;
    out.reserve(levels * levels);
    for (Digit n = 0; n < levels; ++n) {
        for (Digit m = 0; m < levels; ++m) {
            out.push_back(psi_state(channel, n, m));
        }
    }
    return out;
}

} // namespace qtele

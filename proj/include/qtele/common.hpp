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

#include <complex>
#include <cstddef>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>

namespace qtele {

using Complex = std::complex<double>;

/// Value of one qudit in the computational basis, 0 <= digit < level_count.
using Digit = std::size_t;

/// Position of a qudit inside a register. Slot 0 is the most significant.
using Slot = std::size_t;

/// Seeded random source shared by every sampling routine.
using Rng = std::mt19937_64;

enum class ErrorKind {
    DimensionMismatch,
    InvalidTargets,
    OutOfRange,
    InvalidArgument,
    NumericalDegeneracy,
    InternalConsistency,
};

const char *to_string(ErrorKind kind) noexcept;

class Error : public std::runtime_error {
  public:
    Error(ErrorKind kind, const std::string &what)
        : std::runtime_error(what), kind_(kind) {}

    [[nodiscard]] ErrorKind kind() const noexcept { return kind_; }

  private:
    ErrorKind kind_;
};

namespace tol {
/// Norm and probability assertions.
inline constexpr double kNorm = 1e-10;
/// Algebraic identities on exactly representable inputs.
inline constexpr double kAlgebra = 1e-12;
/// Below this total weight a measurement marginal is considered empty.
inline constexpr double kDegenerate = 1e-15;
} // namespace tol

/// Uniform double in [0, 1) from the top 53 bits of one draw.
inline double uniform01(Rng &rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

/// Integer power for small dimensions; throws on overflow of std::size_t.
std::size_t ipow(std::size_t base, std::size_t exponent);

} // namespace qtele

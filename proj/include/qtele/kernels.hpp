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
 * Inner-loop kernels for dense complex state-vector arithmetic.
 *
 * Every kernel has a scalar reference implementation. Vectorized variants
 * are compiled into separate translation units with their own ISA flags and
 * are picked at runtime from the host CPU features, so the library stays
 * loadable on machines without them. The QTELE_KERNELS environment variable
 * (`scalar`, `avx2` or `auto`) overrides the automatic choice.
 */

#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

#include "qtele/common.hpp"

namespace qtele::kernels {

enum class Backend { Scalar, Avx2 };

struct KernelTable {
    Backend backend;
    const char *name;

    /// y = M x with M row-major dim x dim; x and y must not alias.
    void (*matvec)(const Complex *matrix, std::size_t dim, const Complex *x,
                   Complex *y);
    /// sum_i conj(a_i) * b_i
    Complex (*dot_conj)(const Complex *a, const Complex *b, std::size_t n);
    /// sum_i |a_i|^2
    double (*norm_squared)(const Complex *a, std::size_t n);
    /// a_i *= factor
    void (*scale)(Complex *a, std::size_t n, double factor);
};

const KernelTable &scalar_table() noexcept;

/// True when the variant was compiled in and the host CPU supports it.
bool available(Backend backend) noexcept;

/// Table for an explicit backend. Throws if it is not available.
const KernelTable &table(Backend backend);

/// Table used by the library on the calling thread.
const KernelTable &active() noexcept;

std::vector<Backend> available_backends();

std::string_view name(Backend backend) noexcept;

/// Pins the calling thread to one backend for the lifetime of the guard.
class ScopedBackend {
  public:
    explicit ScopedBackend(Backend backend);
    ~ScopedBackend();
    ScopedBackend(const ScopedBackend &) = delete;
    ScopedBackend &operator=(const ScopedBackend &) = delete;

  private:
    const KernelTable *previous_;
};

namespace detail {
#ifdef QTELE_HAVE_AVX2
const KernelTable &avx2_table() noexcept;
#endif
} // namespace detail

} // namespace qtele::kernels

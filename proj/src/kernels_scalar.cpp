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

#include "qtele/kernels.hpp"

namespace qtele::kernels {
namespace {

void matvec(const Complex *matrix, std::size_t dim, const Complex *x,
            Complex *y) {
    for (std::size_t r = 0; r < dim; ++r) {
        const Complex *row = matrix + r * dim;
        Complex acc{0.0, 0.0};
        for (std::size_t c = 0; c < dim; ++c) {
            acc += row[c] * x[c];
        }
        y[r] = acc;
    }
}

Complex dot_conj(const Complex *a, const Complex *b, std::size_t n) {
    Complex acc{0.0, 0.0};
    for (std::size_t i = 0; i < n; ++i) {
        acc += std::conj(a[i]) * b[i];
    }
    return acc;
}

double norm_squared(const Complex *a, std::size_t n) {
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        acc += std::norm(a[i]);
    }
    return acc;
}

void scale(Complex *a, std::size_t n, double factor) {
    for (std::size_t i = 0; i < n; ++i) {
        a[i] *= factor;
    }
}

constexpr KernelTable kScalar{Backend::Scalar, "scalar", matvec, dot_conj,
                              norm_squared, scale};

} // namespace

const KernelTable &scalar_table() noexcept { return kScalar; }

} // namespace qtele::kernels

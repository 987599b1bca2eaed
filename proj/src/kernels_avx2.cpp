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

// Compiled with -mavx2 -mfma. Nothing in this file may run before
// kernels_dispatch.cpp has confirmed the host supports both.

#include <immintrin.h>

#include "qtele/kernels.hpp"

namespace qtele::kernels::detail {
namespace {

// Complex doubles are stored interleaved (re, im), two per __m256d.

inline const double *as_doubles(const Complex *p) {
    return reinterpret_cast<const double *>(p);
}
inline double *as_doubles(Complex *p) { return reinterpret_cast<double *>(p); }

// Sum of the two complex lanes of a register.
inline Complex reduce_lanes(__m256d v) {
    const __m128d lo = _mm256_castpd256_pd128(v);
    const __m128d hi = _mm256_extractf128_pd(v, 1);
    const __m128d sum = _mm_add_pd(lo, hi);
    alignas(16) double out[2];
    _mm_store_pd(out, sum);
    return {out[0], out[1]};
}

// acc_rr += [ar*xr, ar*xi], acc_ii += [ai*xi, ai*xr]
inline void cmul_accumulate(__m256d a, __m256d x, __m256d &acc_rr,
                            __m256d &acc_ii) {
    const __m256d a_re = _mm256_movedup_pd(a);
    const __m256d a_im = _mm256_permute_pd(a, 0xF);
    const __m256d x_swap = _mm256_permute_pd(x, 0x5);
    acc_rr = _mm256_fmadd_pd(a_re, x, acc_rr);
    acc_ii = _mm256_fmadd_pd(a_im, x_swap, acc_ii);
}

Complex row_dot(const Complex *row, const Complex *x, std::size_t n) {
    __m256d rr0 = _mm256_setzero_pd();
    __m256d ii0 = _mm256_setzero_pd();
    __m256d rr1 = _mm256_setzero_pd();
    __m256d ii1 = _mm256_setzero_pd();
    const double *a = as_doubles(row);
    const double *b = as_doubles(x);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        cmul_accumulate(_mm256_loadu_pd(a + 2 * i), _mm256_loadu_pd(b + 2 * i),
                        rr0, ii0);
        cmul_accumulate(_mm256_loadu_pd(a + 2 * i + 4),
                        _mm256_loadu_pd(b + 2 * i + 4), rr1, ii1);
    }
    for (; i + 2 <= n; i += 2) {
        cmul_accumulate(_mm256_loadu_pd(a + 2 * i), _mm256_loadu_pd(b + 2 * i),
                        rr0, ii0);
    }
    // [rr - ii, rr + ii] per lane = [re, im] of the products
    const __m256d prod = _mm256_addsub_pd(_mm256_add_pd(rr0, rr1),
                                          _mm256_add_pd(ii0, ii1));
    Complex acc = reduce_lanes(prod);
    for (; i < n; ++i) {
        acc += row[i] * x[i];
    }
    return acc;
}

void matvec(const Complex *matrix, std::size_t dim, const Complex *x,
            Complex *y) {
    for (std::size_t r = 0; r < dim; ++r) {
        y[r] = row_dot(matrix + r * dim, x, dim);
    }
}

Complex dot_conj(const Complex *a, const Complex *b, std::size_t n) {
    __m256d rr = _mm256_setzero_pd();
    __m256d ii = _mm256_setzero_pd();
    const double *pa = as_doubles(a);
    const double *pb = as_doubles(b);
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) {
        cmul_accumulate(_mm256_loadu_pd(pa + 2 * i), _mm256_loadu_pd(pb + 2 * i),
                        rr, ii);
    }
    // conj(a) b = [ar*br + ai*bi, ar*bi - ai*br]
    const __m256d neg = _mm256_sub_pd(_mm256_setzero_pd(), ii);
    Complex acc = reduce_lanes(_mm256_addsub_pd(rr, neg));
    for (; i < n; ++i) {
        acc += std::conj(a[i]) * b[i];
    }
    return acc;
}

double norm_squared(const Complex *a, std::size_t n) {
    const double *p = as_doubles(a);
    const std::size_t len = 2 * n;
    __m256d acc0 = _mm256_setzero_pd();
    __m256d acc1 = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 8 <= len; i += 8) {
        const __m256d v0 = _mm256_loadu_pd(p + i);
        const __m256d v1 = _mm256_loadu_pd(p + i + 4);
        acc0 = _mm256_fmadd_pd(v0, v0, acc0);
        acc1 = _mm256_fmadd_pd(v1, v1, acc1);
    }
    for (; i + 4 <= len; i += 4) {
        const __m256d v = _mm256_loadu_pd(p + i);
        acc0 = _mm256_fmadd_pd(v, v, acc0);
    }
    const Complex lanes = reduce_lanes(_mm256_add_pd(acc0, acc1));
    double acc = lanes.real() + lanes.imag();
    for (; i < len; ++i) {
        acc += p[i] * p[i];
    }
    return acc;
}

void scale(Complex *a, std::size_t n, double factor) {
    double *p = as_doubles(a);
    const std::size_t len = 2 * n;
    const __m256d f = _mm256_set1_pd(factor);
    std::size_t i = 0;
    for (; i + 4 <= len; i += 4) {
        _mm256_storeu_pd(p + i, _mm256_mul_pd(_mm256_loadu_pd(p + i), f));
    }
    for (; i < len; ++i) {
        p[i] *= factor;
    }
}

constexpr KernelTable kAvx2{Backend::Avx2, "avx2", matvec, dot_conj,
                            norm_squared, scale};

} // namespace

const KernelTable &avx2_table() noexcept { return kAvx2; }

} // namespace qtele::kernels::detail

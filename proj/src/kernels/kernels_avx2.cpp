/*
 * Copyright 2026 The oqss Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

// Compiled with -mavx2 -mfma. Nothing in this file may run before the
// dispatcher has confirmed CPU support.

#include "oqss/kernels.hpp"

#include <immintrin.h>

#include "powertrace_impl.hpp"

namespace oqss::kernels::detail {

namespace {

// One __m256d holds two complex doubles laid out as [re0, im0, re1, im1].

inline __m256d load2(const cplx *p) { return _mm256_loadu_pd(reinterpret_cast<const double *>(p)); }

inline void store2(cplx *p, __m256d v) { _mm256_storeu_pd(reinterpret_cast<double *>(p), v); }

inline __m256d swap_re_im(__m256d v) { return _mm256_permute_pd(v, 0b0101); }

inline double hsum(__m256d v) {
    __m128d lo = _mm256_castpd256_pd128(v);
    __m128d hi = _mm256_extractf128_pd(v, 1);
    lo = _mm_add_pd(lo, hi);
    return _mm_cvtsd_f64(lo) + _mm_cvtsd_f64(_mm_unpackhi_pd(lo, lo));
}

// lane0 - lane1 + lane2 - lane3
inline double halt(__m256d v) {
    __m128d lo = _mm256_castpd256_pd128(v);
    __m128d hi = _mm256_extractf128_pd(v, 1);
    lo = _mm_add_pd(lo, hi);
    return _mm_cvtsd_f64(lo) - _mm_cvtsd_f64(_mm_unpackhi_pd(lo, lo));
}

inline cplx dotu_avx2(const cplx *a, const cplx *b, std::size_t n) {
    __m256d rr0 = _mm256_setzero_pd(), ri0 = _mm256_setzero_pd();
    __m256d rr1 = _mm256_setzero_pd(), ri1 = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d a0 = load2(a + i), b0 = load2(b + i);
        const __m256d a1 = load2(a + i + 2), b1 = load2(b + i + 2);
        rr0 = _mm256_fmadd_pd(a0, b0, rr0);
        ri0 = _mm256_fmadd_pd(a0, swap_re_im(b0), ri0);
        rr1 = _mm256_fmadd_pd(a1, b1, rr1);
        ri1 = _mm256_fmadd_pd(a1, swap_re_im(b1), ri1);
    }
    for (; i + 2 <= n; i += 2) {
        const __m256d a0 = load2(a + i), b0 = load2(b + i);
        rr0 = _mm256_fmadd_pd(a0, b0, rr0);
        ri0 = _mm256_fmadd_pd(a0, swap_re_im(b0), ri0);
    }
    const __m256d rr = _mm256_add_pd(rr0, rr1);
    const __m256d ri = _mm256_add_pd(ri0, ri1);
    double re = halt(rr);
    double im = hsum(ri);
    if (i < n) {
        re += a[i].real() * b[i].real() - a[i].imag() * b[i].imag();
        im += a[i].real() * b[i].imag() + a[i].imag() * b[i].real();
    }
    return {re, im};
}

inline cplx dotc_avx2(const cplx *a, const cplx *b, std::size_t n) {
    __m256d rr0 = _mm256_setzero_pd(), ri0 = _mm256_setzero_pd();
    __m256d rr1 = _mm256_setzero_pd(), ri1 = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d a0 = load2(a + i), b0 = load2(b + i);
        const __m256d a1 = load2(a + i + 2), b1 = load2(b + i + 2);
        rr0 = _mm256_fmadd_pd(a0, b0, rr0);
        ri0 = _mm256_fmadd_pd(a0, swap_re_im(b0), ri0);
        rr1 = _mm256_fmadd_pd(a1, b1, rr1);
        ri1 = _mm256_fmadd_pd(a1, swap_re_im(b1), ri1);
    }
    for (; i + 2 <= n; i += 2) {
        const __m256d a0 = load2(a + i), b0 = load2(b + i);
        rr0 = _mm256_fmadd_pd(a0, b0, rr0);
        ri0 = _mm256_fmadd_pd(a0, swap_re_im(b0), ri0);
    }
    const __m256d rr = _mm256_add_pd(rr0, rr1);
    const __m256d ri = _mm256_add_pd(ri0, ri1);
    double re = hsum(rr);
    double im = halt(ri);
    if (i < n) {
        re += a[i].real() * b[i].real() + a[i].imag() * b[i].imag();
        im += a[i].real() * b[i].imag() - a[i].imag() * b[i].real();
    }
    return {re, im};
}

inline void axpy_avx2(cplx alpha, const cplx *x, cplx *y, std::size_t n) {
    const __m256d ar = _mm256_set1_pd(alpha.real());
    const __m256d ai = _mm256_set1_pd(alpha.imag());
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) {
        const __m256d xv = load2(x + i);
        const __m256d cross = _mm256_mul_pd(ai, swap_re_im(xv));
        const __m256d prod = _mm256_fmaddsub_pd(ar, xv, cross);
        store2(y + i, _mm256_add_pd(load2(y + i), prod));
    }
    if (i < n) {
        const double xr = x[i].real(), xi = x[i].imag();
        y[i] = cplx(y[i].real() + alpha.real() * xr - alpha.imag() * xi,
                    y[i].imag() + alpha.real() * xi + alpha.imag() * xr);
    }
}

void gemv_avx2(const cplx *m, const cplx *x, cplx *y, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) {
        y[i] = dotu_avx2(m + i * n, x, n);
    }
}

struct Avx2Ops {
    static cplx dotu(const cplx *a, const cplx *b, std::size_t n) { return dotu_avx2(a, b, n); }
    static void axpy(cplx alpha, const cplx *x, cplx *y, std::size_t n) { axpy_avx2(alpha, x, y, n); }
};

cplx loop_hafnian_even_avx2(const cplx *a, std::size_t n) { return PowerTrace<Avx2Ops>::even(a, n); }

} // namespace

const Table &avx2_table() noexcept {
    static const Table t{dotu_avx2, dotc_avx2, axpy_avx2, gemv_avx2, loop_hafnian_even_avx2};
    return t;
}

} // namespace oqss::kernels::detail

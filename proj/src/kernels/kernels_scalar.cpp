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

#include "oqss/kernels.hpp"

#include "powertrace_impl.hpp"

namespace oqss::kernels::detail {

namespace {

// Written on the real/imaginary parts directly so the reference path never
// depends on the compiler's complex multiplication semantics.

inline cplx dotu_scalar(const cplx *a, const cplx *b, std::size_t n) {
    double re = 0.0;
    double im = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double ar = a[i].real(), ai = a[i].imag();
        const double br = b[i].real(), bi = b[i].imag();
        re += ar * br - ai * bi;
        im += ar * bi + ai * br;
    }
    return {re, im};
}

inline cplx dotc_scalar(const cplx *a, const cplx *b, std::size_t n) {
    double re = 0.0;
    double im = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double ar = a[i].real(), ai = a[i].imag();
        const double br = b[i].real(), bi = b[i].imag();
        re += ar * br + ai * bi;
        im += ar * bi - ai * br;
    }
    return {re, im};
}

inline void axpy_scalar(cplx alpha, const cplx *x, cplx *y, std::size_t n) {
    const double sr = alpha.real(), si = alpha.imag();
    for (std::size_t i = 0; i < n; ++i) {
        const double xr = x[i].real(), xi = x[i].imag();
        y[i] = cplx(y[i].real() + sr * xr - si * xi, y[i].imag() + sr * xi + si * xr);
    }
}

void gemv_scalar(const cplx *m, const cplx *x, cplx *y, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) {
        y[i] = dotu_scalar(m + i * n, x, n);
    }
}

struct ScalarOps {
    static cplx dotu(const cplx *a, const cplx *b, std::size_t n) { return dotu_scalar(a, b, n); }
    static void axpy(cplx alpha, const cplx *x, cplx *y, std::size_t n) { axpy_scalar(alpha, x, y, n); }
};

cplx loop_hafnian_even_scalar(const cplx *a, std::size_t n) { return PowerTrace<ScalarOps>::even(a, n); }

} // namespace

const Table &scalar_table() noexcept {
    static const Table t{dotu_scalar, dotc_scalar, axpy_scalar, gemv_scalar, loop_hafnian_even_scalar};
    return t;
}

} // namespace oqss::kernels::detail

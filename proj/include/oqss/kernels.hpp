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

/**
 * @brief Complex double-precision vector kernels used by the hafnian inner loops.
 *
 * Every kernel has a portable scalar reference and, on x86-64, an AVX2+FMA
 * variant. The variant is chosen once at runtime from CPU feature flags; the
 * environment variable OQSS_SIMD=scalar forces the reference path.
 */

#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <string_view>

namespace oqss::kernels {

using cplx = std::complex<double>;

enum class Backend { scalar, avx2 };

struct Table {
    /// sum_i a[i] * b[i]
    cplx (*dotu)(const cplx *a, const cplx *b, std::size_t n);
    /// sum_i conj(a[i]) * b[i]
    cplx (*dotc)(const cplx *a, const cplx *b, std::size_t n);
    /// y[i] += alpha * x[i]
    void (*axpy)(cplx alpha, const cplx *x, cplx *y, std::size_t n);
    /// y[i] = sum_j m[i*n + j] * x[j] for a row-major n x n matrix
    void (*gemv)(const cplx *m, const cplx *x, cplx *y, std::size_t n);
    /// Loop hafnian of a row-major n x n symmetric matrix, n even (power-trace sum).
    cplx (*loop_hafnian_even)(const cplx *a, std::size_t n);
};

bool supported(Backend b) noexcept;

/// Kernel table for a specific backend. Throws ContractError if the CPU lacks it.
const Table &table(Backend b);

/// Backend picked for this process (best supported unless overridden by OQSS_SIMD).
Backend active() noexcept;

std::string_view name(Backend b) noexcept;

/// Table of the active backend.
const Table &dispatch() noexcept;

namespace detail {
const Table &scalar_table() noexcept;
#if defined(OQSS_HAVE_AVX2_KERNELS)
const Table &avx2_table() noexcept;
#endif
} // namespace detail

inline cplx dotu(std::span<const cplx> a, std::span<const cplx> b) noexcept {
    return dispatch().dotu(a.data(), b.data(), a.size());
}

inline cplx dotc(std::span<const cplx> a, std::span<const cplx> b) noexcept {
    return dispatch().dotc(a.data(), b.data(), a.size());
}

inline void axpy(cplx alpha, std::span<const cplx> x, std::span<cplx> y) noexcept {
    dispatch().axpy(alpha, x.data(), y.data(), x.size());
}

} // namespace oqss::kernels

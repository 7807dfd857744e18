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

// Power-trace loop hafnian, templated on the vector operations so each kernel
// translation unit gets a fully inlined copy compiled for its instruction set.
//
// For an even matrix A of size n = 2m with vertex pairs (2i, 2i+1):
//
//   lhaf(A) = sum_{S subset of pairs} (-1)^(m - |S|) [lambda^m] exp( sum_j f_j(S) lambda^j )
//   f_j(S)  = tr(C^j) / (2j) + (1/2) w^T C^(j-1) u
//
// where C = (A X) restricted to the vertices of S, X swaps each vertex with its
// partner, u holds the loop weights diag(A) on S and w = X u.
//
// tr(C^j) comes from the characteristic polynomial of C (Householder reduction
// to Hessenberg form followed by La Budde's recursion) and Newton's identities,
// giving O(k^3) work per subset of size k.

#pragma once

#include <algorithm>
#include <bit>
#include <cmath>
#include <complex>
#include <cstdint>
#include <vector>

namespace oqss::kernels::detail {

template <class Ops>
struct PowerTrace {
    using cplx = std::complex<double>;

    struct Workspace {
        Workspace(std::size_t n, std::size_t m)
            : c(n * n), u(n), w(n), y(n), y_next(n), v(n), vc(n), row(n), poly((n + 1) * (n + 1)), coeffs(n + 1),
              power(m + 1), loops(m + 1), f(m + 1), e(m + 1), idx(n) {}

        std::vector<cplx> c, u, w, y, y_next, v, vc, row, poly, coeffs, power, loops, f, e;
        std::vector<std::size_t> idx;
    };

    static void to_hessenberg(cplx *h, std::size_t k, cplx *v, cplx *vc, cplx *w) {
        for (std::size_t c = 0; c + 2 < k; ++c) {
            const std::size_t len = k - c - 1;
            double alpha2 = 0.0;
            for (std::size_t r = 0; r < len; ++r) {
                v[r] = h[(c + 1 + r) * k + c];
                alpha2 += v[r].real() * v[r].real() + v[r].imag() * v[r].imag();
            }
            const double x02 = v[0].real() * v[0].real() + v[0].imag() * v[0].imag();
            const double tail2 = alpha2 - x02;
            if (tail2 == 0.0) {
                continue;
            }
            const double alpha = std::sqrt(alpha2);
            const double x0 = std::sqrt(x02);
            const cplx phase = x0 > 0.0 ? v[0] / x0 : cplx(1.0, 0.0);
            v[0] += phase * alpha;
            const double v0n = v[0].real() * v[0].real() + v[0].imag() * v[0].imag();
            const double scale = 1.0 / std::sqrt(tail2 + v0n);
            for (std::size_t r = 0; r < len; ++r) {
                v[r] *= scale;
                vc[r] = std::conj(v[r]);
            }

            // rows c+1.., columns c..: H <- H - 2 v (v^* H)
            const std::size_t width = k - c;
            std::fill(w, w + width, cplx(0.0, 0.0));
            for (std::size_t r = 0; r < len; ++r) {
                Ops::axpy(vc[r], h + (c + 1 + r) * k + c, w, width);
            }
            for (std::size_t r = 0; r < len; ++r) {
                Ops::axpy(-2.0 * v[r], w, h + (c + 1 + r) * k + c, width);
            }

            // all rows, columns c+1..: H <- H - 2 (H v) v^*
            for (std::size_t i = 0; i < k; ++i) {
                cplx *row = h + i * k + c + 1;
                const cplx s = Ops::dotu(row, v, len);
                Ops::axpy(-2.0 * s, vc, row, len);
            }
        }
    }

    // c_1..c_k of det(xI - H) = x^k + c_1 x^(k-1) + ... + c_k, H upper Hessenberg.
    static void charpoly(const cplx *h, std::size_t k, cplx *poly, cplx *coeffs) {
        const std::size_t stride = k + 1;
        std::fill(poly, poly + stride * stride, cplx(0.0, 0.0));
        poly[0] = 1.0;
        for (std::size_t i = 1; i <= k; ++i) {
            cplx *pi = poly + i * stride;
            const cplx *prev = poly + (i - 1) * stride;
            const cplx hii = h[(i - 1) * k + (i - 1)];
            for (std::size_t t = 0; t < i; ++t) {
                pi[t + 1] += prev[t];
            }
            Ops::axpy(-hii, prev, pi, i);
            cplx prod = 1.0;
            for (std::size_t r = 1; r < i; ++r) {
                prod *= h[(i - r) * k + (i - r - 1)];
                const cplx coef = prod * h[(i - r - 1) * k + (i - 1)];
                Ops::axpy(-coef, poly + (i - r - 1) * stride, pi, i - r);
            }
        }
        const cplx *pk = poly + k * stride;
        coeffs[0] = 1.0;
        for (std::size_t i = 1; i <= k; ++i) {
            coeffs[i] = pk[k - i];
        }
    }

    static cplx subset_term(const cplx *a, std::size_t n, std::size_t m, std::uint64_t mask, Workspace &ws) {
        std::size_t k = 0;
        for (std::size_t i = 0; i < m; ++i) {
            if ((mask >> i) & 1U) {
                ws.idx[k++] = 2 * i;
                ws.idx[k++] = 2 * i + 1;
            }
        }
        if (k == 0) {
            return m == 0 ? cplx(1.0, 0.0) : cplx(0.0, 0.0);
        }

        for (std::size_t r = 0; r < k; ++r) {
            const std::size_t ir = ws.idx[r];
            const cplx *arow = a + ir * n;
            cplx *crow = ws.c.data() + r * k;
            for (std::size_t s = 0; s < k; s += 2) {
                // idx comes in partner pairs, so X just swaps adjacent columns
                crow[s] = arow[ws.idx[s + 1]];
                crow[s + 1] = arow[ws.idx[s]];
            }
            ws.u[r] = arow[ir];
        }
        for (std::size_t r = 0; r < k; r += 2) {
            ws.w[r] = ws.u[r + 1];
            ws.w[r + 1] = ws.u[r];
        }

        std::copy(ws.u.begin(), ws.u.begin() + static_cast<std::ptrdiff_t>(k), ws.y.begin());
        for (std::size_t j = 1; j <= m; ++j) {
            ws.loops[j] = Ops::dotu(ws.w.data(), ws.y.data(), k);
            if (j < m) {
                for (std::size_t r = 0; r < k; ++r) {
                    ws.y_next[r] = Ops::dotu(ws.c.data() + r * k, ws.y.data(), k);
                }
                std::swap(ws.y, ws.y_next);
            }
        }

        to_hessenberg(ws.c.data(), k, ws.v.data(), ws.vc.data(), ws.row.data());
        charpoly(ws.c.data(), k, ws.poly.data(), ws.coeffs.data());

        // Newton's identities: p_j = -(j c_j + sum_{i<j} c_i p_{j-i}), c_i = 0 for i > k
        for (std::size_t j = 1; j <= m; ++j) {
            cplx s = (j <= k) ? static_cast<double>(j) * ws.coeffs[j] : cplx(0.0, 0.0);
            const std::size_t upto = std::min(j - 1, k);
            for (std::size_t i = 1; i <= upto; ++i) {
                s += ws.coeffs[i] * ws.power[j - i];
            }
            ws.power[j] = -s;
        }

        for (std::size_t j = 1; j <= m; ++j) {
            ws.f[j] = (ws.power[j] / static_cast<double>(j) + ws.loops[j]) * 0.5 * static_cast<double>(j);
        }
        // E = exp(F): t E_t = sum_j (j f_j) E_{t-j}; ws.f already holds j f_j
        ws.e[0] = 1.0;
        for (std::size_t t = 1; t <= m; ++t) {
            cplx s = 0.0;
            for (std::size_t j = 1; j <= t; ++j) {
                s += ws.f[j] * ws.e[t - j];
            }
            ws.e[t] = s / static_cast<double>(t);
        }
        return ws.e[m];
    }

    /// Loop hafnian of an even-dimensional row-major matrix.
    static cplx even(const cplx *a, std::size_t n) {
        const std::size_t m = n / 2;
        Workspace ws(n, m);
        cplx total = 0.0;
        const std::uint64_t subsets = std::uint64_t{1} << m;
        for (std::uint64_t mask = 0; mask < subsets; ++mask) {
            const cplx term = subset_term(a, n, m, mask, ws);
            const auto chosen = static_cast<std::size_t>(std::popcount(mask));
            if ((m - chosen) & 1U) {
                total -= term;
            } else {
                total += term;
            }
        }
        return total;
    }
};

} // namespace oqss::kernels::detail

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

#include "oqss/hafnian.hpp"

#include <algorithm>
#include <bit>
#include <chrono>
#include <cmath>
#include <numeric>
#include <random>
#include <sstream>

#include "oqss/error.hpp"

namespace oqss::hafnian {

SymmetricComplexMatrix::SymmetricComplexMatrix(std::size_t dim) : dim_(dim), data_(dim * dim, cplx(0.0, 0.0)) {}

SymmetricComplexMatrix::SymmetricComplexMatrix(std::size_t dim, std::vector<cplx> entries)
    : dim_(dim), data_(std::move(entries)) {
    if (data_.size() != dim_ * dim_) {
        throw ContractError("SymmetricComplexMatrix: expected " + std::to_string(dim_ * dim_) + " entries, got " +
                            std::to_string(data_.size()));
    }
    for (std::size_t i = 0; i < dim_; ++i) {
        for (std::size_t j = i + 1; j < dim_; ++j) {
            if (data_[i * dim_ + j] != data_[j * dim_ + i]) {
                throw ContractError("SymmetricComplexMatrix: entry (" + std::to_string(i) + "," + std::to_string(j) +
                                    ") differs from its transpose");
            }
        }
    }
}

SymmetricComplexMatrix SymmetricComplexMatrix::symmetrized(std::size_t dim, std::span<const cplx> entries) {
    if (entries.size() != dim * dim) {
        throw ContractError("SymmetricComplexMatrix::symmetrized: size mismatch");
    }
    SymmetricComplexMatrix out(dim);
    for (std::size_t i = 0; i < dim; ++i) {
        out.data_[i * dim + i] = entries[i * dim + i];
        for (std::size_t j = i + 1; j < dim; ++j) {
            out.set(i, j, 0.5 * (entries[i * dim + j] + entries[j * dim + i]));
        }
    }
    return out;
}

std::vector<cplx> SymmetricComplexMatrix::diagonal() const {
    std::vector<cplx> d(dim_);
    for (std::size_t i = 0; i < dim_; ++i) {
        d[i] = data_[i * dim_ + i];
    }
    return d;
}

std::size_t RepetitionVector::total() const noexcept {
    return std::accumulate(counts.begin(), counts.end(), std::size_t{0});
}

namespace {

cplx bruteforce_rec(const SymmetricComplexMatrix &m, std::uint32_t remaining) {
    if (remaining == 0) {
        return 1.0;
    }
    const auto v = static_cast<std::size_t>(std::countr_zero(remaining));
    const std::uint32_t rest = remaining & (remaining - 1U);
    cplx total = m(v, v) * bruteforce_rec(m, rest);
    for (std::uint32_t bits = rest; bits != 0; bits &= bits - 1U) {
        const auto u = static_cast<std::size_t>(std::countr_zero(bits));
        total += m(v, u) * bruteforce_rec(m, rest & ~(1U << u));
    }
    return total;
}

} // namespace

cplx loop_hafnian(const SymmetricComplexMatrix &m) { return loop_hafnian(m, kernels::dispatch()); }

cplx loop_hafnian(const SymmetricComplexMatrix &m, const kernels::Table &kt) {
    const std::size_t dim = m.dim();
    if (dim > kMaxDimension) {
        throw CapacityError("loop_hafnian: dimension " + std::to_string(dim) + " exceeds ceiling " +
                            std::to_string(kMaxDimension));
    }
    if (dim == 0) {
        return 1.0;
    }
    if (dim == 1) {
        return m(0, 0);
    }

    // An isolated vertex with loop weight 1 leaves the loop hafnian unchanged.
    const std::size_t n = dim + (dim & 1U);
    std::vector<cplx> a(n * n, cplx(0.0, 0.0));
    for (std::size_t i = 0; i < dim; ++i) {
        for (std::size_t j = 0; j < dim; ++j) {
            a[i * n + j] = m(i, j);
        }
    }
    if (n != dim) {
        a[(n - 1) * n + (n - 1)] = 1.0;
    }

    return kt.loop_hafnian_even(a.data(), n);
}

cplx loop_hafnian_bruteforce(const SymmetricComplexMatrix &m) {
    if (m.dim() > kMaxBruteForceDimension) {
        throw CapacityError("loop_hafnian_bruteforce: dimension " + std::to_string(m.dim()) + " exceeds ceiling " +
                            std::to_string(kMaxBruteForceDimension));
    }
    const std::uint32_t all = m.dim() == 0 ? 0U : ((1U << m.dim()) - 1U);
    return bruteforce_rec(m, all);
}

SymmetricComplexMatrix reduce_matrix(const SymmetricComplexMatrix &m, const RepetitionVector &reps,
                                     std::span<const cplx> diagonal_override) {
    if (reps.counts.size() != m.dim() || diagonal_override.size() != m.dim()) {
        throw ContractError("reduce_matrix: repetition vector and diagonal override must have length " +
                            std::to_string(m.dim()));
    }
    std::vector<std::size_t> rows;
    rows.reserve(reps.total());
    for (std::size_t i = 0; i < reps.counts.size(); ++i) {
        rows.insert(rows.end(), reps.counts[i], i);
    }
    const std::size_t d = rows.size();
    SymmetricComplexMatrix out(d);
    for (std::size_t a = 0; a < d; ++a) {
        out.set(a, a, diagonal_override[rows[a]]);
        for (std::size_t b = a + 1; b < d; ++b) {
            out.set(a, b, m(rows[a], rows[b]));
        }
    }
    return out;
}

CostModel CostModel::from_pattern(std::span<const std::size_t> pattern, double d) {
    if (pattern.empty()) {
        throw ContractError("CostModel::from_pattern: empty pattern");
    }
    CostModel c;
    c.l = pattern.size();
    double sum = 0.0;
    double log_sum = 0.0;
    for (std::size_t n : pattern) {
        sum += static_cast<double>(n + 1);
        log_sum += std::log(static_cast<double>(n + 1));
    }
    c.arithmetic_mean = sum / static_cast<double>(c.l);
    c.geometric_mean = std::exp(log_sum / static_cast<double>(c.l));
    c.d = d;
    return c;
}

PredictedCost predicted_cost(const CostModel &c) {
    const auto l = static_cast<double>(c.l);
    PredictedCost p;
    p.steps_pattern = l * c.arithmetic_mean * std::pow(c.geometric_mean, l);
    p.steps_truncation = l * l * c.d * c.d * std::pow(c.d, l);
    return p;
}

std::vector<BenchmarkRow> benchmark_hafnian(std::span<const BenchmarkCase> sizes, double min_batch_ns, int batches) {
    using clock = std::chrono::steady_clock;
    std::vector<BenchmarkRow> rows;
    rows.reserve(sizes.size());
    for (const BenchmarkCase &bc : sizes) {
        if (bc.pattern.size() != bc.l || bc.l == 0) {
            throw ContractError("benchmark_hafnian: pattern length must equal l >= 1");
        }
        std::mt19937_64 rng(0x5eedULL + bc.l);
        std::uniform_real_distribution<double> uni(-1.0, 1.0);
        SymmetricComplexMatrix base(bc.l);
        std::vector<cplx> gamma(bc.l);
        const double scale = 0.5 / std::sqrt(static_cast<double>(bc.l));
        for (std::size_t i = 0; i < bc.l; ++i) {
            gamma[i] = cplx(uni(rng), uni(rng)) * 0.5;
            for (std::size_t j = i; j < bc.l; ++j) {
                base.set(i, j, cplx(uni(rng), uni(rng)) * scale);
            }
        }
        const SymmetricComplexMatrix reduced = reduce_matrix(base, RepetitionVector{bc.pattern}, gamma);

        double best = 0.0;
        volatile double sink = 0.0;
        for (int b = 0; b < std::max(batches, 1); ++b) {
            std::size_t calls = 0;
            const auto t0 = clock::now();
            double elapsed = 0.0;
            do {
                sink = sink + loop_hafnian(reduced).real();
                ++calls;
                elapsed = std::chrono::duration<double, std::nano>(clock::now() - t0).count();
            } while (elapsed < min_batch_ns);
            const double per_call = elapsed / static_cast<double>(calls);
            best = (b == 0) ? per_call : std::min(best, per_call);
        }

        BenchmarkRow row;
        row.D = reduced.dim();
        row.l = bc.l;
        row.pattern = bc.pattern;
        const std::size_t nmax = *std::max_element(bc.pattern.begin(), bc.pattern.end());
        row.predicted_steps =
            predicted_cost(CostModel::from_pattern(bc.pattern, static_cast<double>(nmax + 1))).min();
        row.wall_time_ns = best;
        rows.push_back(std::move(row));
    }
    return rows;
}

std::vector<BenchmarkCase> pattern_sweep(std::size_t d_min, std::size_t d_max, std::size_t step) {
    if (step == 0 || d_min > d_max || d_min == 0) {
        throw ContractError("pattern_sweep: need 0 < d_min <= d_max and step > 0");
    }
    std::vector<BenchmarkCase> cases;
    for (std::size_t d = d_min; d <= d_max; d += step) {
        BenchmarkCase bc;
        bc.pattern.assign(d / 2, 2);
        if (d % 2 == 1) {
            bc.pattern.push_back(1);
        }
        bc.l = bc.pattern.size();
        cases.push_back(std::move(bc));
    }
    return cases;
}

std::string benchmark_csv(std::span<const BenchmarkRow> rows) {
    std::ostringstream os;
    os << "D,l,pattern,predicted_steps,wall_time_ns\n";
    os.precision(10);
    for (const BenchmarkRow &r : rows) {
        os << r.D << ',' << r.l << ',';
        for (std::size_t i = 0; i < r.pattern.size(); ++i) {
            os << (i ? "-" : "") << r.pattern[i];
        }
        os << ',' << r.predicted_steps << ',' << r.wall_time_ns << '\n';
    }
    return os.str();
}

double corrected_log2_slope(std::span<const BenchmarkRow> rows) {
    if (rows.size() < 2) {
        throw ContractError("corrected_log2_slope: need at least two rows");
    }
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    for (const BenchmarkRow &r : rows) {
        const auto x = static_cast<double>(r.D);
        const double y = std::log2(r.wall_time_ns / (x * x * x));
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    const auto n = static_cast<double>(rows.size());
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

} // namespace oqss::hafnian

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
 * @brief Exact loop hafnians of complex symmetric matrices.
 *
 * The loop hafnian sums, over every way of partitioning the vertex set into
 * pairs and singletons, the product of the pair weights A(i,j) and the loop
 * weights A(i,i). Fock amplitudes of pure Gaussian states are loop hafnians of
 * a matrix obtained by repeating rows/columns according to the photon pattern
 * (see reduce_matrix).
 *
 * Error budget: the power-trace evaluation agrees with direct enumeration to a
 * relative 1e-9 for dimensions up to 16 with entries of modulus <= 1.
 */

#pragma once

#include <complex>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "oqss/kernels.hpp"

namespace oqss::hafnian {

using cplx = std::complex<double>;

/// Largest dimension accepted by loop_hafnian. Cost is O(D^3 2^(D/2)).
inline constexpr std::size_t kMaxDimension = 48;

/// Largest dimension accepted by loop_hafnian_bruteforce.
inline constexpr std::size_t kMaxBruteForceDimension = 12;

/// Dense row-major complex matrix with entry(i,j) == entry(j,i) exactly.
class SymmetricComplexMatrix {
  public:
    SymmetricComplexMatrix() = default;

    /// Zero matrix of the given dimension.
    explicit SymmetricComplexMatrix(std::size_t dim);

    /// Throws ContractError if entries.size() != dim*dim or the entries are not exactly symmetric.
    SymmetricComplexMatrix(std::size_t dim, std::vector<cplx> entries);

    /// Builds from numerically computed entries, replacing each pair by its mean.
    static SymmetricComplexMatrix symmetrized(std::size_t dim, std::span<const cplx> entries);

    std::size_t dim() const noexcept { return dim_; }
    cplx operator()(std::size_t i, std::size_t j) const noexcept { return data_[i * dim_ + j]; }

    /// Sets entry (i,j) and (j,i).
    void set(std::size_t i, std::size_t j, cplx v) noexcept {
        data_[i * dim_ + j] = v;
        data_[j * dim_ + i] = v;
    }

    std::span<const cplx> entries() const noexcept { return data_; }
    std::vector<cplx> diagonal() const;

  private:
    std::size_t dim_ = 0;
    std::vector<cplx> data_;
};

/// Per-row repetition counts; the reduced matrix has dimension total().
struct RepetitionVector {
    std::vector<std::size_t> counts;

    std::size_t total() const noexcept;
};

/// Power-trace (inclusion-exclusion over vertex pairs) evaluation.
/// Throws CapacityError above kMaxDimension.
cplx loop_hafnian(const SymmetricComplexMatrix &m);

/// Same computation on an explicit kernel table; used for backend equivalence checks.
cplx loop_hafnian(const SymmetricComplexMatrix &m, const kernels::Table &kt);

/// Recursive enumeration over all matchings with loops. Reference semantics; dim <= 12.
cplx loop_hafnian_bruteforce(const SymmetricComplexMatrix &m);

/// Repeats row/column i of `m` reps.counts[i] times and writes the repeated
/// diagonal_override values on the diagonal of the result.
SymmetricComplexMatrix reduce_matrix(const SymmetricComplexMatrix &m, const RepetitionVector &reps,
                                     std::span<const cplx> diagonal_override);

/// Inputs of the two step-count estimates for a loop hafnian of an l-mode pattern.
struct CostModel {
    std::size_t l = 1;
    double arithmetic_mean = 1.0; ///< mean of (n_i + 1)
    double geometric_mean = 1.0;  ///< geometric mean of (n_i + 1)
    double d = 1.0;               ///< truncation dimension

    /// Fills the means from a photon pattern.
    static CostModel from_pattern(std::span<const std::size_t> pattern, double d);
};

struct PredictedCost {
    double steps_pattern = 0.0;    ///< l * A_p * G_p^l
    double steps_truncation = 0.0; ///< l^2 * d^2 * d^l

    double min() const noexcept { return steps_pattern < steps_truncation ? steps_pattern : steps_truncation; }
};

PredictedCost predicted_cost(const CostModel &c);

struct BenchmarkCase {
    std::size_t l = 1;
    std::vector<std::size_t> pattern;
};

struct BenchmarkRow {
    std::size_t D = 0;
    std::size_t l = 0;
    std::vector<std::size_t> pattern;
    double predicted_steps = 0.0;
    double wall_time_ns = 0.0;
};

/// Cases of total dimension D = d_min, d_min+step, ..., d_max: modes carrying
/// two photons each (one mode with a single photon for odd D).
/// Throws ContractError for step == 0 or d_min > d_max.
std::vector<BenchmarkCase> pattern_sweep(std::size_t d_min, std::size_t d_max, std::size_t step);

/// Times loop_hafnian on deterministic inputs, one row per case. Each timing is
/// the minimum over repeated batches lasting at least `min_batch_ns`.
std::vector<BenchmarkRow> benchmark_hafnian(std::span<const BenchmarkCase> sizes, double min_batch_ns = 2.0e7,
                                            int batches = 5);

/// CSV with header `D,l,pattern,predicted_steps,wall_time_ns`; pattern is `-`-joined.
std::string benchmark_csv(std::span<const BenchmarkRow> rows);

/// Least-squares slope of log2(wall_time / D^3) against D.
double corrected_log2_slope(std::span<const BenchmarkRow> rows);

} // namespace oqss::hafnian

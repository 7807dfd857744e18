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
 * @brief Truncated single-mode Fock-space arithmetic.
 *
 * Beam-splitter convention (shared with the gaussian module): B(theta) maps
 *   a1^dag -> cos(theta) a1^dag + sin(theta) a2^dag
 *   a2^dag -> -sin(theta) a1^dag + cos(theta) a2^dag
 * so that <n,0|B|i,j> = sqrt(n!/(i! j!)) cos(theta)^i (-sin(theta))^j.
 */

#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <utility>
#include <vector>

#include <Eigen/Dense>

namespace oqss::fock {

using cplx = std::complex<double>;

/// Amplitudes c_0..c_d of a single-mode state. Vectors returned by normalize()
/// and the heralding operations are tagged normalized; everything else is raw.
class FockVector {
  public:
    FockVector() = default;
    explicit FockVector(std::vector<cplx> amplitudes) : amps_(std::move(amplitudes)) {}

    /// |n> with the given cutoff (cutoff >= n).
    static FockVector basis(std::size_t n, std::size_t cutoff);

    bool empty() const noexcept { return amps_.empty(); }
    std::size_t size() const noexcept { return amps_.size(); }
    /// Highest Fock index represented; requires a non-empty vector.
    std::size_t cutoff() const noexcept { return amps_.empty() ? 0 : amps_.size() - 1; }

    cplx operator[](std::size_t n) const noexcept { return n < amps_.size() ? amps_[n] : cplx(0.0, 0.0); }
    std::span<const cplx> amplitudes() const noexcept { return amps_; }

    double norm() const noexcept;
    bool is_normalized() const noexcept { return normalized_; }

    /// Zero-padded or truncated copy with the given cutoff (tag dropped on truncation).
    FockVector with_cutoff(std::size_t cutoff) const;

  private:
    friend struct Access;
    std::vector<cplx> amps_;
    bool normalized_ = false;
};

struct Normalized {
    FockVector state;
    double norm = 0.0;
};

/// Unit vector and the original norm. Throws DegenerateError for the zero vector.
Normalized normalize(const FockVector &v);

/// |<a|b>|^2 / (|a|^2 |b|^2); the shorter vector is zero-padded.
double fidelity(const FockVector &a, const FockVector &b);

/// <n,m| B(theta) |i,j>; zero unless i + j == n + m.
cplx bs_element(std::size_t i, std::size_t j, std::size_t n, std::size_t m, double theta);

struct Heralded {
    FockVector state;         ///< normalized output
    double probability = 0.0; ///< squared norm before normalization
};

/// Mixes a (mode 1) and b (mode 2) on B(theta) and projects mode 2 onto vacuum.
/// The output cutoff is exactly cutoff(a) + cutoff(b).
Heralded couple_and_herald_zero(const FockVector &a, const FockVector &b, double theta);

/// Unnormalized output amplitudes of couple_and_herald_zero, written into out
/// (size cutoff(a)+cutoff(b)+1). Allocation-free hot path for optimizers.
void couple_zero_raw(std::span<const cplx> a, std::span<const cplx> b, double theta, std::span<cplx> out);

/// Largest cutoff accepted by bs_unitary_oracle.
inline constexpr std::size_t kMaxOracleCutoff = 20;

/// exp(theta (a1 a2^dag - a1^dag a2)) on the truncated space {|i,j> : i,j <= cutoff},
/// indexed i*(cutoff+1)+j. Exact on every block of total photon number <= cutoff.
Eigen::MatrixXcd bs_unitary_oracle(double theta, std::size_t cutoff);

struct WignerGrid {
    double q_min = 0.0, q_max = 0.0, p_min = 0.0, p_max = 0.0;
    std::size_t n_q = 0, n_p = 0;
    /// Row-major: values[iq * n_p + ip] = W(q_iq, p_ip).
    std::vector<double> values;

    double q(std::size_t iq) const noexcept;
    double p(std::size_t ip) const noexcept;
    double at(std::size_t iq, std::size_t ip) const noexcept { return values[iq * n_p + ip]; }
    /// Trapezoidal integral of W over the grid.
    double integral() const;
};

/// Wigner function W(q,p) with hbar = 1 and integral 1, sampled on an inclusive
/// n_q x n_p grid. Throws ContractError for a resolution below 2 or an empty range.
WignerGrid wigner_grid(const FockVector &v, std::pair<double, double> q_range, std::pair<double, double> p_range,
                       std::size_t n_q, std::size_t n_p);

/// Single-point evaluation of the same expansion.
double wigner_at(const FockVector &v, double q, double p);

} // namespace oqss::fock

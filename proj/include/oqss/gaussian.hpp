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
 * @brief Pure multimode Gaussian states and their Fock amplitudes.
 *
 * Conventions: hbar = 1, vacuum quadrature variance 1/2, xpxp ordering,
 * a = (x + i p)/sqrt(2). Every operation G is recorded by its Heisenberg
 * action G^dag xi G = M xi; the state keeps S <- M S and mean <- M mean.
 *
 *   squeeze(r, phi)   S(z) = exp((conj(z) a^2 - z a^dag^2)/2), z = r e^{i phi}
 *   displace(alpha)   D(alpha) = exp(alpha a^dag - conj(alpha) a)
 *   phase(phi)        a -> e^{i phi} a
 *   beamsplitter      a_a -> cos(theta) a_a - e^{-i phi} sin(theta) a_b
 *                     a_b -> e^{i phi} sin(theta) a_a + cos(theta) a_b
 *
 * At phi = 0 the beam splitter is the fock-module B(theta).
 */

#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "oqss/fock.hpp"
#include "oqss/hafnian.hpp"

namespace oqss::gaussian {

using cplx = std::complex<double>;

class GaussianPureState {
  public:
    /// l-mode vacuum; throws ContractError for l == 0.
    static GaussianPureState vacuum(std::size_t l);

    std::size_t modes() const noexcept { return static_cast<std::size_t>(mean_.size() / 2); }
    const Eigen::MatrixXd &symplectic() const noexcept { return s_; }
    const Eigen::VectorXd &mean() const noexcept { return mean_; }
    /// V = S S^T / 2.
    Eigen::MatrixXd covariance() const { return 0.5 * s_ * s_.transpose(); }
    /// max |S Omega S^T - Omega|.
    double symplectic_error() const;

    GaussianPureState apply(const Eigen::MatrixXd &m_local, std::span<const std::size_t> modes) const;
    GaussianPureState displaced(std::size_t mode, cplx alpha) const;

  private:
    GaussianPureState(Eigen::MatrixXd s, Eigen::VectorXd mean) : s_(std::move(s)), mean_(std::move(mean)) {}
    Eigen::MatrixXd s_;
    Eigen::VectorXd mean_;
};

inline GaussianPureState vacuum(std::size_t l) { return GaussianPureState::vacuum(l); }

GaussianPureState apply_squeeze(const GaussianPureState &st, std::size_t mode, double r, double phi);
GaussianPureState apply_displacement(const GaussianPureState &st, std::size_t mode, cplx alpha);
/// Throws ContractError when mode_a == mode_b.
GaussianPureState apply_beamsplitter(const GaussianPureState &st, std::size_t mode_a, std::size_t mode_b, double theta,
                                     double phi);
GaussianPureState apply_phase(const GaussianPureState &st, std::size_t mode, double phi);

/// Omega for l modes in xpxp ordering.
Eigen::MatrixXd symplectic_form(std::size_t l);

/// <n|psi> = C * lhaf(reduce_matrix(B, n, gamma)) / sqrt(prod n_i!).
/// The global phase is fixed by taking C real and positive.
struct BargmannForm {
    hafnian::SymmetricComplexMatrix B;
    std::vector<cplx> gamma;
    cplx prefactor = 1.0;
};

/// Throws ValidityError if the stored transform is not symplectic to 1e-8.
BargmannForm bargmann_form(const GaussianPureState &st);

/// Exact amplitude <n|psi>. Throws ContractError on a length mismatch and
/// CapacityError when sum(n) exceeds the loop-hafnian ceiling.
cplx fock_amplitude(const GaussianPureState &st, std::span<const std::size_t> n);
cplx fock_amplitude(const BargmannForm &bf, std::span<const std::size_t> n);

struct DetectionPattern {
    std::vector<std::size_t> modes;  ///< heralded mode indices, distinct
    std::vector<std::size_t> counts; ///< photons registered on each
};

/// Exact probability of the detection pattern with the output mode traced out.
/// The pattern must cover every mode except output_mode.
double herald_probability(const BargmannForm &bf, const DetectionPattern &pattern, std::size_t output_mode);

struct HeraldedState {
    fock::FockVector state;   ///< normalized amplitudes 0..cutoff
    double probability = 0.0; ///< exact herald probability
    double tail_mass = 0.0;   ///< fraction of the conditional state above the evaluated range
    std::size_t evaluated_cutoff = 0;
};

/// Largest total photon count (output + heralds) evaluated while extending the tail.
inline constexpr std::size_t kMaxTailDimension = 24;

/// Conditional output-mode state. Amplitudes are computed up to `cutoff`;
/// evaluation continues past it until the captured mass reaches
/// (1 - 1e-12) of the exact herald probability or the total photon number hits
/// kMaxTailDimension, and the remainder is reported as tail_mass.
/// Throws DegenerateError when the herald probability is below 1e-300.
HeraldedState heralded_state(const GaussianPureState &st, const DetectionPattern &pattern, std::size_t output_mode,
                             std::size_t cutoff);

struct CircuitOp {
    std::string op; ///< "squeeze" | "displace" | "beamsplitter" | "phase"
    std::vector<std::size_t> modes;
    std::vector<double> params; ///< (r, phi) | (re, im) | (theta, phi) | (phi)
};

struct Circuit {
    std::size_t modes = 1;
    std::vector<CircuitOp> ops;
};

/// Runs the circuit on vacuum. Throws ContractError on an unknown op or arity.
GaussianPureState run_circuit(const Circuit &c);

} // namespace oqss::gaussian

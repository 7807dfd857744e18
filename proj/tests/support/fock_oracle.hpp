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

// Brute-force Fock-space simulation of small Gaussian circuits. Single-mode
// preparations are exponentiated on a wide truncation; the interferometer then
// acts on a tensor product truncated per mode, which is exact for every
// amplitude whose total photon number stays within that truncation.

#pragma once

#include <cmath>
#include <complex>
#include <random>
#include <vector>

#include <Eigen/Dense>

#include "oqss/fock.hpp"
#include "oqss/gaussian.hpp"

namespace oqss::testing {

using cplx = std::complex<double>;

/// exp(g) for anti-Hermitian g via the Hermitian eigenproblem of i*g.
inline Eigen::MatrixXcd expm_antihermitian(const Eigen::MatrixXcd &g) {
    const Eigen::MatrixXcd h = cplx(0.0, 1.0) * g;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(0.5 * (h + h.adjoint()));
    const Eigen::VectorXcd ph = (cplx(0.0, -1.0) * es.eigenvalues().cast<cplx>()).array().exp();
    return es.eigenvectors() * ph.asDiagonal() * es.eigenvectors().adjoint();
}

inline Eigen::MatrixXcd annihilation(std::size_t k) {
    Eigen::MatrixXcd a = Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(k + 1), static_cast<Eigen::Index>(k + 1));
    for (std::size_t n = 1; n <= k; ++n) {
        a(static_cast<Eigen::Index>(n - 1), static_cast<Eigen::Index>(n)) = std::sqrt(static_cast<double>(n));
    }
    return a;
}

/// Single-mode state vector on a truncation of `k` photons.
class SingleModeOracle {
  public:
    explicit SingleModeOracle(std::size_t k = 120) : a_(annihilation(k)), psi_(Eigen::VectorXcd::Zero(a_.rows())) {
        psi_(0) = 1.0;
    }
    void squeeze(double r, double phi) {
        const cplx z = std::polar(r, phi);
        const Eigen::MatrixXcd a2 = a_ * a_;
        psi_ = expm_antihermitian(0.5 * (std::conj(z) * a2 - z * a2.adjoint())) * psi_;
    }
    void displace(cplx alpha) {
        psi_ = expm_antihermitian(alpha * a_.adjoint() - std::conj(alpha) * a_) * psi_;
    }
    void phase(double phi) {
        for (Eigen::Index n = 0; n < psi_.size(); ++n) {
            psi_(n) *= std::polar(1.0, phi * static_cast<double>(n));
        }
    }
    const Eigen::VectorXcd &vector() const { return psi_; }

  private:
    Eigen::MatrixXcd a_;
    Eigen::VectorXcd psi_;
};

/// Product of single-mode states followed by passive two-mode operations.
class MultiModeOracle {
  public:
    MultiModeOracle(const std::vector<SingleModeOracle> &inputs, std::size_t t) : l_(inputs.size()), t_(t) {
        std::size_t size = 1;
        for (std::size_t i = 0; i < l_; ++i) {
            size *= t_ + 1;
        }
        psi_.assign(size, cplx(0.0, 0.0));
        for (std::size_t idx = 0; idx < size; ++idx) {
            cplx v = 1.0;
            const std::vector<std::size_t> n = digits(idx);
            for (std::size_t m = 0; m < l_; ++m) {
                v *= inputs[m].vector()(static_cast<Eigen::Index>(n[m]));
            }
            psi_[idx] = v;
        }
    }

    void phase(std::size_t mode, double phi) {
        for (std::size_t idx = 0; idx < psi_.size(); ++idx) {
            psi_[idx] *= std::polar(1.0, phi * static_cast<double>(digits(idx)[mode]));
        }
    }

    /// Same operation as gaussian::apply_beamsplitter.
    void beamsplitter(std::size_t ma, std::size_t mb, double theta, double phi) {
        phase(mb, -phi);
        const Eigen::MatrixXcd u = fock::bs_unitary_oracle(theta, t_);
        std::vector<cplx> next(psi_.size(), cplx(0.0, 0.0));
        for (std::size_t idx = 0; idx < psi_.size(); ++idx) {
            const std::vector<std::size_t> n = digits(idx);
            const auto col = static_cast<Eigen::Index>(n[ma] * (t_ + 1) + n[mb]);
            std::vector<std::size_t> out = n;
            for (std::size_t i = 0; i <= t_; ++i) {
                for (std::size_t j = 0; j <= t_; ++j) {
                    out[ma] = i;
                    out[mb] = j;
                    next[index(out)] += u(static_cast<Eigen::Index>(i * (t_ + 1) + j), col) * psi_[idx];
                }
            }
        }
        psi_ = std::move(next);
        phase(mb, phi);
    }

    cplx amplitude(const std::vector<std::size_t> &n) const { return psi_[index(n)]; }

  private:
    std::vector<std::size_t> digits(std::size_t idx) const {
        std::vector<std::size_t> n(l_);
        for (std::size_t m = l_; m-- > 0;) {
            n[m] = idx % (t_ + 1);
            idx /= t_ + 1;
        }
        return n;
    }
    std::size_t index(const std::vector<std::size_t> &n) const {
        std::size_t idx = 0;
        for (std::size_t m = 0; m < l_; ++m) {
            idx = idx * (t_ + 1) + n[m];
        }
        return idx;
    }

    std::size_t l_;
    std::size_t t_;
    std::vector<cplx> psi_;
};

/// Random circuit: per-mode squeeze/displace/phase, then beam splitters and phases.
inline gaussian::Circuit random_circuit(std::size_t l, std::mt19937_64 &rng, double r_max = 1.2, double a_max = 1.0) {
    std::uniform_real_distribution<double> uni(0.0, 1.0);
    const double two_pi = 2.0 * 3.14159265358979323846;
    gaussian::Circuit c;
    c.modes = l;
    for (std::size_t m = 0; m < l; ++m) {
        c.ops.push_back({"squeeze", {m}, {r_max * uni(rng), two_pi * uni(rng)}});
        const double amp = a_max * uni(rng), arg = two_pi * uni(rng);
        c.ops.push_back({"displace", {m}, {amp * std::cos(arg), amp * std::sin(arg)}});
        c.ops.push_back({"phase", {m}, {two_pi * uni(rng)}});
    }
    for (std::size_t a = 0; a + 1 < l; ++a) {
        for (std::size_t b = a + 1; b < l; ++b) {
            c.ops.push_back({"beamsplitter", {a, b}, {3.0 * uni(rng), two_pi * uni(rng)}});
        }
    }
    for (std::size_t m = 0; m < l; ++m) {
        c.ops.push_back({"phase", {m}, {two_pi * uni(rng)}});
    }
    return c;
}

/// Replays a random_circuit-shaped circuit (single-mode ops before two-mode ones).
inline MultiModeOracle simulate(const gaussian::Circuit &c, std::size_t t) {
    std::vector<SingleModeOracle> singles(c.modes);
    std::size_t k = 0;
    for (; k < c.ops.size() && c.ops[k].modes.size() == 1; ++k) {
        const gaussian::CircuitOp &op = c.ops[k];
        SingleModeOracle &s = singles[op.modes[0]];
        if (op.op == "squeeze") {
            s.squeeze(op.params[0], op.params[1]);
        } else if (op.op == "displace") {
            s.displace(cplx(op.params[0], op.params[1]));
        } else {
            s.phase(op.params[0]);
        }
    }
    MultiModeOracle mm(singles, t);
    for (; k < c.ops.size(); ++k) {
        const gaussian::CircuitOp &op = c.ops[k];
        if (op.op == "beamsplitter") {
            mm.beamsplitter(op.modes[0], op.modes[1], op.params[0], op.params[1]);
        } else {
            mm.phase(op.modes[0], op.params[0]);
        }
    }
    return mm;
}

} // namespace oqss::testing

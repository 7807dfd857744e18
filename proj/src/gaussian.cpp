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

#include "oqss/gaussian.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>

#include "oqss/error.hpp"

namespace oqss::gaussian {

namespace {

using Eigen::Index;

constexpr double kSymplecticTol = 1e-8;

Index ix(std::size_t i) { return static_cast<Index>(i); }

void check_mode(const GaussianPureState &st, std::size_t mode, const char *who) {
    if (mode >= st.modes()) {
        throw ContractError(std::string(who) + ": mode " + std::to_string(mode) + " out of range for " +
                            std::to_string(st.modes()) + " modes");
    }
}

double log_factorial(std::size_t n) { return std::lgamma(static_cast<double>(n) + 1.0); }

} // namespace

Eigen::MatrixXd symplectic_form(std::size_t l) {
    Eigen::MatrixXd om = Eigen::MatrixXd::Zero(ix(2 * l), ix(2 * l));
    for (std::size_t i = 0; i < l; ++i) {
        om(ix(2 * i), ix(2 * i + 1)) = 1.0;
        om(ix(2 * i + 1), ix(2 * i)) = -1.0;
    }
    return om;
}

GaussianPureState GaussianPureState::vacuum(std::size_t l) {
    if (l == 0) {
        throw ContractError("vacuum: need at least one mode");
    }
    return {Eigen::MatrixXd::Identity(ix(2 * l), ix(2 * l)), Eigen::VectorXd::Zero(ix(2 * l))};
}

double GaussianPureState::symplectic_error() const {
    const Eigen::MatrixXd om = symplectic_form(modes());
    return (s_ * om * s_.transpose() - om).cwiseAbs().maxCoeff();
}

GaussianPureState GaussianPureState::apply(const Eigen::MatrixXd &m_local, std::span<const std::size_t> modes) const {
    // Only the rows belonging to `modes` change.
    const std::size_t k = modes.size();
    std::vector<Index> rows(2 * k);
    for (std::size_t a = 0; a < k; ++a) {
        rows[2 * a] = ix(2 * modes[a]);
        rows[2 * a + 1] = ix(2 * modes[a] + 1);
    }
    Eigen::MatrixXd sub(ix(2 * k), s_.cols());
    Eigen::VectorXd msub(ix(2 * k));
    for (std::size_t r = 0; r < 2 * k; ++r) {
        sub.row(ix(r)) = s_.row(rows[r]);
        msub(ix(r)) = mean_(rows[r]);
    }
    const Eigen::MatrixXd new_sub = m_local * sub;
    const Eigen::VectorXd new_m = m_local * msub;
    GaussianPureState out = *this;
    for (std::size_t r = 0; r < 2 * k; ++r) {
        out.s_.row(rows[r]) = new_sub.row(ix(r));
        out.mean_(rows[r]) = new_m(ix(r));
    }
    return out;
}

GaussianPureState GaussianPureState::displaced(std::size_t mode, cplx alpha) const {
    GaussianPureState out = *this;
    out.mean_(ix(2 * mode)) += std::numbers::sqrt2 * alpha.real();
    out.mean_(ix(2 * mode + 1)) += std::numbers::sqrt2 * alpha.imag();
    return out;
}

GaussianPureState apply_squeeze(const GaussianPureState &st, std::size_t mode, double r, double phi) {
    check_mode(st, mode, "apply_squeeze");
    const double ch = std::cosh(r), sh = std::sinh(r);
    const double c = std::cos(phi), s = std::sin(phi);
    Eigen::Matrix2d m;
    m << ch - sh * c, -sh * s, -sh * s, ch + sh * c;
    const std::array<std::size_t, 1> modes{mode};
    return st.apply(m, modes);
}

GaussianPureState apply_displacement(const GaussianPureState &st, std::size_t mode, cplx alpha) {
    check_mode(st, mode, "apply_displacement");
    return st.displaced(mode, alpha);
}

GaussianPureState apply_phase(const GaussianPureState &st, std::size_t mode, double phi) {
    check_mode(st, mode, "apply_phase");
    const double c = std::cos(phi), s = std::sin(phi);
    Eigen::Matrix2d m;
    m << c, -s, s, c;
    const std::array<std::size_t, 1> modes{mode};
    return st.apply(m, modes);
}

GaussianPureState apply_beamsplitter(const GaussianPureState &st, std::size_t mode_a, std::size_t mode_b, double theta,
                                     double phi) {
    check_mode(st, mode_a, "apply_beamsplitter");
    check_mode(st, mode_b, "apply_beamsplitter");
    if (mode_a == mode_b) {
        throw ContractError("apply_beamsplitter: modes must differ");
    }
    const double c = std::cos(theta), s = std::sin(theta);
    const std::array<std::array<cplx, 2>, 2> u{{{c, -std::polar(s, -phi)}, {std::polar(s, phi), c}}};
    // a_i -> sum_j U_ij a_j in quadratures: [[Re, -Im], [Im, Re]] blocks.
    Eigen::Matrix4d m;
    for (int i = 0; i < 2; ++i) {
        for (int j = 0; j < 2; ++j) {
            const cplx z = u[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
            m(2 * i, 2 * j) = z.real();
            m(2 * i, 2 * j + 1) = -z.imag();
            m(2 * i + 1, 2 * j) = z.imag();
            m(2 * i + 1, 2 * j + 1) = z.real();
        }
    }
    const std::array<std::size_t, 2> modes{mode_a, mode_b};
    return st.apply(m, modes);
}

BargmannForm bargmann_form(const GaussianPureState &st) {
    const double err = st.symplectic_error();
    if (!(err <= kSymplecticTol)) {
        throw ValidityError("bargmann_form: transform is not symplectic (error " + std::to_string(err) + ")");
    }
    const std::size_t l = st.modes();
    const Eigen::MatrixXd &s = st.symplectic();
    const Eigen::MatrixXd om = symplectic_form(l);
    const Eigen::MatrixXd minv = -om * s.transpose() * om;

    // S^-1 in the (a, a^dag) basis: a = alpha a' + beta a'^dag (per mode pair).
    Eigen::MatrixXcd alpha(ix(l), ix(l)), beta(ix(l), ix(l));
    for (std::size_t i = 0; i < l; ++i) {
        for (std::size_t j = 0; j < l; ++j) {
            const double mxx = minv(ix(2 * i), ix(2 * j)), mxp = minv(ix(2 * i), ix(2 * j + 1));
            const double mpx = minv(ix(2 * i + 1), ix(2 * j)), mpp = minv(ix(2 * i + 1), ix(2 * j + 1));
            alpha(ix(i), ix(j)) = 0.5 * cplx(mxx + mpp, mpx - mxp);
            beta(ix(i), ix(j)) = 0.5 * cplx(mxx - mpp, mpx + mxp);
        }
    }
    const Eigen::MatrixXcd b = -alpha.partialPivLu().solve(beta);

    BargmannForm bf;
    std::vector<cplx> entries(b.data(), b.data() + b.size()); // symmetric, so storage order is irrelevant
    bf.B = hafnian::SymmetricComplexMatrix::symmetrized(l, entries);

    const Eigen::VectorXd &r = st.mean();
    Eigen::VectorXcd mu(ix(l));
    for (std::size_t i = 0; i < l; ++i) {
        mu(ix(i)) = cplx(r(ix(2 * i)), r(ix(2 * i + 1))) / std::numbers::sqrt2;
    }
    Eigen::MatrixXcd bsym(ix(l), ix(l));
    for (std::size_t i = 0; i < l; ++i) {
        for (std::size_t j = 0; j < l; ++j) {
            bsym(ix(i), ix(j)) = bf.B(i, j);
        }
    }
    const Eigen::VectorXcd g = mu - bsym * mu.conjugate();
    bf.gamma.assign(g.data(), g.data() + g.size());

    // |<0|psi>|^2 = exp(-r^T (V + I/2)^-1 r / 2) / sqrt(det(V + I/2))
    const Eigen::MatrixXd q = st.covariance() + 0.5 * Eigen::MatrixXd::Identity(ix(2 * l), ix(2 * l));
    const Eigen::LLT<Eigen::MatrixXd> llt(q);
    const double logdet = 2.0 * llt.matrixL().toDenseMatrix().diagonal().array().log().sum();
    const double quad = r.dot(llt.solve(r));
    bf.prefactor = std::exp(0.5 * (-0.5 * quad - 0.5 * logdet));
    return bf;
}

cplx fock_amplitude(const BargmannForm &bf, std::span<const std::size_t> n) {
    if (n.size() != bf.B.dim()) {
        throw ContractError("fock_amplitude: pattern length " + std::to_string(n.size()) + " != mode count " +
                            std::to_string(bf.B.dim()));
    }
    std::size_t total = 0;
    double log_norm = 0.0;
    for (std::size_t k : n) {
        total += k;
        log_norm += log_factorial(k);
    }
    if (total > hafnian::kMaxDimension) {
        throw CapacityError("fock_amplitude: total photon number " + std::to_string(total) + " exceeds " +
                            std::to_string(hafnian::kMaxDimension));
    }
    const hafnian::RepetitionVector reps{std::vector<std::size_t>(n.begin(), n.end())};
    const cplx h = hafnian::loop_hafnian(hafnian::reduce_matrix(bf.B, reps, bf.gamma));
    return bf.prefactor * h * std::exp(-0.5 * log_norm);
}

cplx fock_amplitude(const GaussianPureState &st, std::span<const std::size_t> n) {
    if (n.size() != st.modes()) {
        throw ContractError("fock_amplitude: pattern length " + std::to_string(n.size()) + " != mode count " +
                            std::to_string(st.modes()));
    }
    return fock_amplitude(bargmann_form(st), n);
}

namespace {

std::vector<std::size_t> full_pattern(std::size_t l, const DetectionPattern &p, std::size_t output_mode) {
    if (p.modes.size() != p.counts.size()) {
        throw ContractError("DetectionPattern: modes and counts differ in length");
    }
    if (output_mode >= l) {
        throw ContractError("heralding: output mode out of range");
    }
    if (p.modes.size() + 1 != l) {
        throw ContractError("heralding: the pattern must cover every mode except the output mode");
    }
    std::vector<std::size_t> full(l, 0);
    std::vector<bool> seen(l, false);
    seen[output_mode] = true;
    for (std::size_t k = 0; k < p.modes.size(); ++k) {
        const std::size_t m = p.modes[k];
        if (m >= l || seen[m]) {
            throw ContractError("DetectionPattern: heralded modes must be distinct, in range and exclude the output");
        }
        seen[m] = true;
        full[m] = p.counts[k];
    }
    return full;
}

} // namespace

double herald_probability(const BargmannForm &bf, const DetectionPattern &pattern, std::size_t output_mode) {
    const std::size_t l = bf.B.dim();
    (void)full_pattern(l, pattern, output_mode);
    const std::size_t h = pattern.modes.size();
    const std::size_t o = output_mode;

    // Integrate the output mode out of <psi|psi> in the Bargmann representation:
    // the heralded-mode variables z and their conjugates w remain, with a
    // Gaussian generating function whose loop hafnian gives the probability.
    const cplx a = bf.B(o, o);
    const cplx ca = std::conj(a);
    const double s = 1.0 / (1.0 - std::norm(a));
    const cplx g0 = bf.gamma[o];
    std::vector<cplx> beta(h);
    for (std::size_t k = 0; k < h; ++k) {
        beta[k] = bf.B(o, pattern.modes[k]);
    }

    hafnian::SymmetricComplexMatrix big(2 * h);
    std::vector<cplx> diag(2 * h);
    for (std::size_t i = 0; i < h; ++i) {
        const std::size_t mi = pattern.modes[i];
        for (std::size_t j = i; j < h; ++j) {
            const std::size_t mj = pattern.modes[j];
            big.set(i, j, bf.B(mi, mj) + s * ca * beta[i] * beta[j]);
            big.set(h + i, h + j, std::conj(bf.B(mi, mj)) + s * a * std::conj(beta[i] * beta[j]));
        }
        for (std::size_t j = 0; j < h; ++j) {
            big.set(i, h + j, s * beta[i] * std::conj(beta[j]));
        }
        diag[i] = bf.gamma[mi] + s * (std::conj(g0) + ca * g0) * beta[i];
        diag[h + i] = std::conj(bf.gamma[mi]) + s * (g0 + a * std::conj(g0)) * std::conj(beta[i]);
    }

    std::vector<std::size_t> reps(2 * h);
    double log_norm = 0.0;
    for (std::size_t k = 0; k < h; ++k) {
        reps[k] = reps[h + k] = pattern.counts[k];
        log_norm += log_factorial(pattern.counts[k]);
    }
    const double cst = s * (std::norm(g0) + std::real(ca * g0 * g0));
    const cplx lh = hafnian::loop_hafnian(hafnian::reduce_matrix(big, hafnian::RepetitionVector{reps}, diag));
    return std::norm(bf.prefactor) * std::sqrt(s) * std::exp(cst - log_norm) * lh.real();
}

HeraldedState heralded_state(const GaussianPureState &st, const DetectionPattern &pattern, std::size_t output_mode,
                             std::size_t cutoff) {
    const std::size_t l = st.modes();
    std::vector<std::size_t> n = full_pattern(l, pattern, output_mode);
    const BargmannForm bf = bargmann_form(st);
    const double p_exact = herald_probability(bf, pattern, output_mode);
    if (!(p_exact >= 1e-300)) {
        throw DegenerateError("heralded_state: detection pattern has probability " + std::to_string(p_exact));
    }
    std::size_t heralded = 0;
    for (std::size_t c : pattern.counts) {
        heralded += c;
    }

    std::vector<cplx> amps(cutoff + 1);
    double captured = 0.0;
    std::size_t k = 0;
    for (;; ++k) {
        const bool inside = k <= cutoff;
        if (!inside && (captured >= (1.0 - 1e-12) * p_exact || k + heralded > kMaxTailDimension)) {
            break;
        }
        n[output_mode] = k;
        const cplx a = fock_amplitude(bf, n);
        captured += std::norm(a);
        if (inside) {
            amps[k] = a;
        }
    }

    HeraldedState out;
    out.probability = std::min(p_exact, 1.0);
    out.evaluated_cutoff = k - 1;
    out.tail_mass = std::max(0.0, 1.0 - captured / p_exact);
    out.state = fock::normalize(fock::FockVector(std::move(amps))).state;
    return out;
}

GaussianPureState run_circuit(const Circuit &c) {
    GaussianPureState st = vacuum(c.modes);
    for (const CircuitOp &op : c.ops) {
        const auto need = [&op](std::size_t nm, std::size_t np) {
            if (op.modes.size() != nm || op.params.size() != np) {
                throw ContractError("circuit op '" + op.op + "' expects " + std::to_string(nm) + " mode(s) and " +
                                    std::to_string(np) + " parameter(s)");
            }
        };
        if (op.op == "squeeze") {
            need(1, 2);
            st = apply_squeeze(st, op.modes[0], op.params[0], op.params[1]);
        } else if (op.op == "displace") {
            need(1, 2);
            st = apply_displacement(st, op.modes[0], cplx(op.params[0], op.params[1]));
        } else if (op.op == "beamsplitter") {
            need(2, 2);
            st = apply_beamsplitter(st, op.modes[0], op.modes[1], op.params[0], op.params[1]);
        } else if (op.op == "phase") {
            need(1, 1);
            st = apply_phase(st, op.modes[0], op.params[0]);
        } else {
            throw ContractError("unknown circuit op '" + op.op + "'");
        }
    }
    return st;
}

} // namespace oqss::gaussian

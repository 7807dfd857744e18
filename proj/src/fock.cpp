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

#include "oqss/fock.hpp"

#include <cmath>
#include <numbers>

#include "oqss/error.hpp"

namespace oqss::fock {

struct Access {
    static FockVector tagged(std::vector<cplx> amps) {
        FockVector v(std::move(amps));
        v.normalized_ = true;
        return v;
    }
};

namespace {

double log_factorial(std::size_t n) { return std::lgamma(static_cast<double>(n) + 1.0); }

double log_binomial(std::size_t n, std::size_t k) {
    return log_factorial(n) - log_factorial(k) - log_factorial(n - k);
}

// pow(x, k) with pow(0, 0) == 1
double ipow(double x, std::size_t k) {
    double r = 1.0;
    for (std::size_t i = 0; i < k; ++i) {
        r *= x;
    }
    return r;
}

} // namespace

FockVector FockVector::basis(std::size_t n, std::size_t cutoff) {
    if (n > cutoff) {
        throw ContractError("FockVector::basis: n exceeds cutoff");
    }
    std::vector<cplx> amps(cutoff + 1, cplx(0.0, 0.0));
    amps[n] = 1.0;
    return Access::tagged(std::move(amps));
}

double FockVector::norm() const noexcept {
    double s = 0.0;
    for (const cplx &c : amps_) {
        s += std::norm(c);
    }
    return std::sqrt(s);
}

FockVector FockVector::with_cutoff(std::size_t cutoff) const {
    std::vector<cplx> amps(cutoff + 1, cplx(0.0, 0.0));
    bool dropped = false;
    for (std::size_t n = 0; n < amps_.size(); ++n) {
        if (n <= cutoff) {
            amps[n] = amps_[n];
        } else if (amps_[n] != cplx(0.0, 0.0)) {
            dropped = true;
        }
    }
    FockVector out(std::move(amps));
    out.normalized_ = normalized_ && !dropped;
    return out;
}

Normalized normalize(const FockVector &v) {
    const double n = v.norm();
    if (!(n > 0.0)) {
        throw DegenerateError("normalize: zero vector");
    }
    std::vector<cplx> amps(v.amplitudes().begin(), v.amplitudes().end());
    for (cplx &c : amps) {
        c /= n;
    }
    return {Access::tagged(std::move(amps)), n};
}

double fidelity(const FockVector &a, const FockVector &b) {
    const std::size_t len = std::min(a.size(), b.size());
    cplx overlap = 0.0;
    for (std::size_t n = 0; n < len; ++n) {
        overlap += std::conj(a[n]) * b[n];
    }
    const double na = a.norm();
    const double nb = b.norm();
    if (!(na > 0.0) || !(nb > 0.0)) {
        throw DegenerateError("fidelity: zero vector");
    }
    const double f = std::norm(overlap) / (na * na * nb * nb);
    return std::min(f, 1.0);
}

cplx bs_element(std::size_t i, std::size_t j, std::size_t n, std::size_t m, double theta) {
    if (i + j != n + m) {
        return 0.0;
    }
    const double c = std::cos(theta);
    const double s = std::sin(theta);
    // B|i,j> = (c a1^ + s a2^)^i (-s a1^ + c a2^)^j / sqrt(i! j!) |0>; p mode-1
    // photons come from the first factor and n-p from the second.
    const double log_pref = 0.5 * (log_factorial(n) + log_factorial(m) - log_factorial(i) - log_factorial(j));
    const std::size_t p_lo = n > j ? n - j : 0;
    const std::size_t p_hi = std::min(i, n);
    double total = 0.0;
    for (std::size_t p = p_lo; p <= p_hi; ++p) {
        const std::size_t q = n - p;
        const double mag = std::exp(log_binomial(i, p) + log_binomial(j, q) + log_pref);
        const double sign = (q & 1U) ? -1.0 : 1.0;
        total += sign * mag * ipow(c, p) * ipow(s, i - p) * ipow(s, q) * ipow(c, j - q);
    }
    return total;
}

void couple_zero_raw(std::span<const cplx> a, std::span<const cplx> b, double theta, std::span<cplx> out) {
    const std::size_t da = a.size() - 1;
    const std::size_t db = b.size() - 1;
    const double c = std::cos(theta);
    const double ms = -std::sin(theta);
    // <n,0|B|i,j> = sqrt(n!) * (c^i / sqrt(i!)) * ((-s)^j / sqrt(j!))
    cplx wa[64], wb[64];
    std::vector<cplx> wa_heap, wb_heap;
    cplx *pa = wa;
    cplx *pb = wb;
    if (a.size() > 64 || b.size() > 64) {
        wa_heap.resize(a.size());
        wb_heap.resize(b.size());
        pa = wa_heap.data();
        pb = wb_heap.data();
    }
    double scale = 1.0;
    for (std::size_t i = 0; i <= da; ++i) {
        if (i > 0) {
            scale *= c / std::sqrt(static_cast<double>(i));
        }
        pa[i] = a[i] * scale;
    }
    scale = 1.0;
    for (std::size_t j = 0; j <= db; ++j) {
        if (j > 0) {
            scale *= ms / std::sqrt(static_cast<double>(j));
        }
        pb[j] = b[j] * scale;
    }
    double sqrt_fact = 1.0;
    for (std::size_t n = 0; n <= da + db; ++n) {
        if (n > 0) {
            sqrt_fact *= std::sqrt(static_cast<double>(n));
        }
        const std::size_t i_lo = n > db ? n - db : 0;
        const std::size_t i_hi = std::min(n, da);
        cplx s = 0.0;
        for (std::size_t i = i_lo; i <= i_hi; ++i) {
            s += pa[i] * pb[n - i];
        }
        out[n] = s * sqrt_fact;
    }
}

Heralded couple_and_herald_zero(const FockVector &a, const FockVector &b, double theta) {
    if (a.empty() || b.empty()) {
        throw ContractError("couple_and_herald_zero: empty input");
    }
    std::vector<cplx> out(a.cutoff() + b.cutoff() + 1);
    couple_zero_raw(a.amplitudes(), b.amplitudes(), theta, out);
    double prob = 0.0;
    for (const cplx &c : out) {
        prob += std::norm(c);
    }
    // inputs may be raw; report the probability for normalized inputs
    const double na = a.norm();
    const double nb = b.norm();
    if (!(na > 0.0) || !(nb > 0.0)) {
        throw DegenerateError("couple_and_herald_zero: zero input vector");
    }
    prob /= na * na * nb * nb;
    if (!(prob > 0.0)) {
        throw DegenerateError("couple_and_herald_zero: vacuum herald has zero probability");
    }
    Normalized nrm = normalize(FockVector(std::move(out)));
    return {std::move(nrm.state), std::min(prob, 1.0)};
}

Eigen::MatrixXcd bs_unitary_oracle(double theta, std::size_t cutoff) {
    if (cutoff > kMaxOracleCutoff) {
        throw CapacityError("bs_unitary_oracle: cutoff " + std::to_string(cutoff) + " exceeds " +
                            std::to_string(kMaxOracleCutoff));
    }
    const std::size_t d = cutoff + 1;
    const auto idx = [d](std::size_t i, std::size_t j) { return static_cast<Eigen::Index>(i * d + j); };
    // Hermitian H = i * theta * (a1 a2^dag - a1^dag a2), so exp(-i H) is the beam splitter.
    Eigen::MatrixXcd h = Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(d * d), static_cast<Eigen::Index>(d * d));
    const cplx it(0.0, theta);
    for (std::size_t i = 0; i < d; ++i) {
        for (std::size_t j = 0; j < d; ++j) {
            // a1 a2^dag |i,j> = sqrt(i (j+1)) |i-1, j+1>
            if (i > 0 && j + 1 < d) {
                h(idx(i - 1, j + 1), idx(i, j)) += it * std::sqrt(static_cast<double>(i * (j + 1)));
            }
            // -a1^dag a2 |i,j> = -sqrt((i+1) j) |i+1, j-1>
            if (j > 0 && i + 1 < d) {
                h(idx(i + 1, j - 1), idx(i, j)) -= it * std::sqrt(static_cast<double>((i + 1) * j));
            }
        }
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(h);
    const Eigen::VectorXcd phases = (-cplx(0.0, 1.0) * es.eigenvalues().cast<cplx>()).array().exp();
    return es.eigenvectors() * phases.asDiagonal() * es.eigenvectors().adjoint();
}

double WignerGrid::q(std::size_t iq) const noexcept {
    return n_q < 2 ? q_min : q_min + (q_max - q_min) * static_cast<double>(iq) / static_cast<double>(n_q - 1);
}

double WignerGrid::p(std::size_t ip) const noexcept {
    return n_p < 2 ? p_min : p_min + (p_max - p_min) * static_cast<double>(ip) / static_cast<double>(n_p - 1);
}

double WignerGrid::integral() const {
    const double dq = (q_max - q_min) / static_cast<double>(n_q - 1);
    const double dp = (p_max - p_min) / static_cast<double>(n_p - 1);
    double s = 0.0;
    for (std::size_t iq = 0; iq < n_q; ++iq) {
        const double wq = (iq == 0 || iq + 1 == n_q) ? 0.5 : 1.0;
        for (std::size_t ip = 0; ip < n_p; ++ip) {
            const double wp = (ip == 0 || ip + 1 == n_p) ? 0.5 : 1.0;
            s += wq * wp * at(iq, ip);
        }
    }
    return s * dq * dp;
}

double wigner_at(const FockVector &v, double q, double p) {
    // Iterative evaluation of W_{|m><n|} for m <= n with A = (q + i p)/sqrt(2):
    //   W_{0,0} = exp(-2|A|^2)/pi,  W_{0,n} = 2A W_{0,n-1}/sqrt(n),
    //   W_{m,n} = (2A W_{m,n-1} - sqrt(m) W_{m-1,n}) / sqrt(n)   (row m > 0, n > m)
    //   W_{m,m} = (2 conj(A) W_{m-1,m} - sqrt(m) W_{m-1,m-1}) / sqrt(m)
    const std::size_t d = v.size();
    if (d == 0) {
        return 0.0;
    }
    const cplx a(q / std::numbers::sqrt2, p / std::numbers::sqrt2);
    std::vector<cplx> w(d);
    w[0] = std::exp(-2.0 * std::norm(a)) / std::numbers::pi;
    const auto rho = [&v](std::size_t m, std::size_t n) { return v[m] * std::conj(v[n]); };
    double total = std::real(rho(0, 0) * w[0]);
    for (std::size_t n = 1; n < d; ++n) {
        w[n] = 2.0 * a * w[n - 1] / std::sqrt(static_cast<double>(n));
        total += 2.0 * std::real(rho(0, n) * w[n]);
    }
    for (std::size_t m = 1; m < d; ++m) {
        const double sm = std::sqrt(static_cast<double>(m));
        cplx temp = w[m];
        w[m] = (2.0 * std::conj(a) * temp - sm * w[m - 1]) / sm;
        total += std::real(rho(m, m) * w[m]);
        for (std::size_t n = m + 1; n < d; ++n) {
            const cplx next = (2.0 * a * w[n - 1] - sm * temp) / std::sqrt(static_cast<double>(n));
            temp = w[n];
            w[n] = next;
            total += 2.0 * std::real(rho(m, n) * w[n]);
        }
    }
    return total;
}

WignerGrid wigner_grid(const FockVector &v, std::pair<double, double> q_range, std::pair<double, double> p_range,
                       std::size_t n_q, std::size_t n_p) {
    if (n_q < 2 || n_p < 2) {
        throw ContractError("wigner_grid: resolution must be at least 2 in each direction");
    }
    if (!(q_range.second > q_range.first) || !(p_range.second > p_range.first)) {
        throw ContractError("wigner_grid: empty range");
    }
    WignerGrid g;
    g.q_min = q_range.first;
    g.q_max = q_range.second;
    g.p_min = p_range.first;
    g.p_max = p_range.second;
    g.n_q = n_q;
    g.n_p = n_p;
    g.values.resize(n_q * n_p);
    for (std::size_t iq = 0; iq < n_q; ++iq) {
        for (std::size_t ip = 0; ip < n_p; ++ip) {
            g.values[iq * n_p + ip] = wigner_at(v, g.q(iq), g.p(ip));
        }
    }
    return g;
}

} // namespace oqss::fock

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

#include "oqss/gkp.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "oqss/error.hpp"

namespace oqss::gkp {

double delta_from_db(double squeezing_db) { return std::sqrt(std::pow(10.0, -squeezing_db / 10.0)); }

double db_from_delta(double delta) { return -10.0 * std::log10(delta * delta); }

double db_delta_roundtrip(double squeezing_db) { return db_from_delta(delta_from_db(squeezing_db)); }

namespace {

// Peaks are dropped once the envelope weight falls below this.
constexpr double kEnvelopeFloor = 1e-16;

double comb(double q, double delta, int logical) {
    const double d2 = delta * delta;
    const double root_pi = std::sqrt(std::numbers::pi);
    // exp(-d2 c^2 / 2) < floor  <=>  |c| > sqrt(-2 ln floor / d2)
    const double c_max = std::sqrt(-2.0 * std::log(kEnvelopeFloor) / d2);
    const auto s_max = static_cast<long>(std::ceil(c_max / (2.0 * root_pi))) + 1;
    double v = 0.0;
    for (long s = -s_max; s <= s_max; ++s) {
        const double c = static_cast<double>(2 * s + logical) * root_pi;
        const double env = -0.5 * d2 * c * c;
        if (env < std::log(kEnvelopeFloor)) {
            continue;
        }
        const double x = q - c;
        v += std::exp(env - x * x / (2.0 * d2));
    }
    return v;
}

} // namespace

std::vector<double> codeword_coefficients(const GkpParams &p, std::size_t k) {
    if (p.logical != 0 && p.logical != 1) {
        throw ContractError("gkp: logical must be 0 or 1, got " + std::to_string(p.logical));
    }
    if (!std::isfinite(p.squeezing_db)) {
        throw ContractError("gkp: squeezing level must be finite");
    }
    const double delta = p.delta();

    // Trapezoid rule on a symmetric grid covering the support of h_0..h_k;
    // for smooth, rapidly decaying integrands it converges spectrally.
    const double half = std::sqrt(2.0 * static_cast<double>(k) + 1.0) + 12.0;
    const double step = std::min(0.002, delta / 50.0);
    const auto npts = static_cast<std::size_t>(std::ceil(half / step));
    std::vector<double> g(k + 1, 0.0);
    std::vector<double> h(k + 1);
    const double h0_scale = std::pow(std::numbers::pi, -0.25);
    for (std::size_t i = 0; i <= 2 * npts; ++i) {
        const double q = (static_cast<double>(i) - static_cast<double>(npts)) * step;
        const double w = comb(q, delta, p.logical);
        if (w == 0.0) {
            continue;
        }
        // Hermite functions by the stable recursion
        h[0] = h0_scale * std::exp(-0.5 * q * q);
        if (k >= 1) {
            h[1] = std::numbers::sqrt2 * q * h[0];
        }
        for (std::size_t n = 1; n < k; ++n) {
            const auto nd = static_cast<double>(n);
            h[n + 1] = std::sqrt(2.0 / (nd + 1.0)) * q * h[n] - std::sqrt(nd / (nd + 1.0)) * h[n - 1];
        }
        for (std::size_t n = 0; n <= k; ++n) {
            g[n] += w * h[n];
        }
    }
    double norm2 = 0.0;
    for (double x : g) {
        norm2 += x * x;
    }
    const double inv = 1.0 / std::sqrt(norm2);
    for (double &x : g) {
        x *= inv;
    }
    return g;
}

fock::FockVector gkp_coefficients(const GkpParams &p, std::size_t n_max) {
    const std::vector<double> g = codeword_coefficients(p, n_max);
    std::vector<fock::cplx> amps(g.begin(), g.end());
    return fock::normalize(fock::FockVector(std::move(amps))).state;
}

double truncation_fidelity(const GkpParams &p, std::size_t n_max) {
    const std::vector<double> g = codeword_coefficients(p, reference_cutoff(n_max));
    double kept = 0.0;
    for (std::size_t n = 0; n <= n_max; ++n) {
        kept += g[n] * g[n];
    }
    return std::min(kept, 1.0);
}

} // namespace oqss::gkp

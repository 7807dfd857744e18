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

#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include "doctest.h"
#include "oqss/error.hpp"
#include "oqss/fock.hpp"

using namespace oqss;
using namespace oqss::fock;

namespace {

FockVector random_vector(std::size_t cutoff, std::mt19937_64 &rng) {
    std::normal_distribution<double> g;
    std::vector<cplx> amps(cutoff + 1);
    for (cplx &c : amps) {
        c = cplx(g(rng), g(rng));
    }
    return FockVector(std::move(amps));
}

// Hermite function h_n(x) by the stable three-term recursion.
double hermite_function(std::size_t n, double x) {
    double h0 = std::pow(std::numbers::pi, -0.25) * std::exp(-0.5 * x * x);
    if (n == 0) {
        return h0;
    }
    double h1 = std::sqrt(2.0) * x * h0;
    for (std::size_t k = 1; k < n; ++k) {
        const double h2 = std::sqrt(2.0 / (k + 1.0)) * x * h1 - std::sqrt(k / (k + 1.0)) * h0;
        h0 = h1;
        h1 = h2;
    }
    return h1;
}

} // namespace

TEST_CASE("normalize") {
    Normalized a = normalize(FockVector({1.0, 0.0}));
    CHECK(a.norm == doctest::Approx(1.0));
    CHECK(a.state[0] == cplx(1.0, 0.0));
    CHECK(a.state.is_normalized());

    Normalized b = normalize(FockVector({3.0, 4.0}));
    CHECK(b.norm == doctest::Approx(5.0));
    CHECK(b.state[0].real() == doctest::Approx(0.6));
    CHECK(b.state[1].real() == doctest::Approx(0.8));

    std::mt19937_64 rng(7);
    const FockVector r = random_vector(9, rng);
    CHECK_FALSE(r.is_normalized());
    const Normalized once = normalize(r);
    const Normalized twice = normalize(once.state);
    CHECK(twice.norm == doctest::Approx(1.0).epsilon(1e-12));
    for (std::size_t n = 0; n <= 9; ++n) {
        CHECK(std::abs(once.state[n] - twice.state[n]) < 1e-12);
    }

    CHECK_THROWS_AS(normalize(FockVector({0.0, 0.0})), DegenerateError);
}

TEST_CASE("fidelity") {
    std::mt19937_64 rng(11);
    const FockVector a = normalize(random_vector(6, rng)).state;
    const FockVector b = normalize(random_vector(4, rng)).state;
    CHECK(fidelity(a, a) == doctest::Approx(1.0));
    CHECK(fidelity(FockVector::basis(0, 3), FockVector::basis(1, 3)) == 0.0);
    const double h = 1.0 / std::sqrt(2.0);
    CHECK(fidelity(FockVector({h, 0.0, h}), FockVector::basis(0, 0)) == doctest::Approx(0.5));

    // symmetric and blind to global phase
    CHECK(fidelity(a, b) == doctest::Approx(fidelity(b, a)));
    std::vector<cplx> rot(a.amplitudes().begin(), a.amplitudes().end());
    for (cplx &c : rot) {
        c *= std::polar(1.0, 1.234);
    }
    CHECK(fidelity(FockVector(rot), b) == doctest::Approx(fidelity(a, b)));
}

TEST_CASE("bs_element closed form") {
    const double theta = 0.37;
    CHECK(bs_element(1, 0, 1, 0, theta).real() == doctest::Approx(std::cos(theta)));
    CHECK(bs_element(1, 1, 2, 0, std::numbers::pi / 4).real() == doctest::Approx(-1.0 / std::sqrt(2.0)));
    CHECK(bs_element(2, 1, 2, 0, theta) == cplx(0.0, 0.0));
    CHECK(bs_element(0, 0, 1, 0, theta) == cplx(0.0, 0.0));

    // each input column is a unit vector within its photon-number block
    for (std::size_t i = 0; i <= 6; ++i) {
        for (std::size_t j = 0; j <= 6; ++j) {
            double s = 0.0;
            for (std::size_t n = 0; n <= i + j; ++n) {
                s += std::norm(bs_element(i, j, n, i + j - n, theta));
            }
            CHECK(s == doctest::Approx(1.0).epsilon(1e-12));
        }
    }
}

TEST_CASE("bs_unitary_oracle agrees with bs_element") {
    const std::size_t cutoff = 12;
    const std::size_t d = cutoff + 1;
    CHECK_THROWS_AS(bs_unitary_oracle(0.1, kMaxOracleCutoff + 1), CapacityError);

    const Eigen::MatrixXcd id = bs_unitary_oracle(0.0, cutoff);
    CHECK((id - Eigen::MatrixXcd::Identity(id.rows(), id.cols())).norm() < 1e-12);

    for (double theta : {0.3, std::numbers::pi / 4, 1.1, -0.8}) {
        const Eigen::MatrixXcd u = bs_unitary_oracle(theta, cutoff);
        // unitary on the photon-conserving blocks that the truncation leaves intact
        double err = 0.0;
        for (std::size_t i = 0; i <= cutoff; ++i) {
            for (std::size_t j = 0; i + j <= cutoff; ++j) {
                const auto col = static_cast<Eigen::Index>(i * d + j);
                err = std::max(err, std::abs(u.col(col).squaredNorm() - 1.0));
                for (std::size_t n = 0; n <= i + j; ++n) {
                    const std::size_t m = i + j - n;
                    const cplx want = bs_element(i, j, n, m, theta);
                    const cplx got = u(static_cast<Eigen::Index>(n * d + m), col);
                    if (2 * (i + j) <= cutoff) {
                        CHECK(std::abs(got - want) < 1e-9);
                    }
                }
            }
        }
        CHECK(err < 1e-8);
    }
}

TEST_CASE("couple_and_herald_zero") {
    Heralded vac = couple_and_herald_zero(FockVector::basis(0, 0), FockVector::basis(0, 0), 0.4);
    CHECK(vac.probability == doctest::Approx(1.0));
    CHECK(std::abs(vac.state[0]) == doctest::Approx(1.0));

    const double theta = 0.6;
    Heralded one = couple_and_herald_zero(FockVector::basis(1, 1), FockVector::basis(0, 0), theta);
    CHECK(one.probability == doctest::Approx(std::cos(theta) * std::cos(theta)));
    CHECK(std::abs(one.state[1]) == doctest::Approx(1.0));

    Heralded hom = couple_and_herald_zero(FockVector::basis(1, 1), FockVector::basis(1, 1), std::numbers::pi / 4);
    CHECK(hom.probability == doctest::Approx(0.5));
    CHECK(std::abs(hom.state[2]) == doctest::Approx(1.0));
    CHECK(hom.state.is_normalized());

    // against the definition: c_n = sum a_i b_j <n,0|B|i,j>
    std::mt19937_64 rng(3);
    const FockVector a = normalize(random_vector(5, rng)).state;
    const FockVector b = normalize(random_vector(3, rng)).state;
    const Heralded h = couple_and_herald_zero(a, b, 0.9);
    REQUIRE(h.state.cutoff() == 8);
    std::vector<cplx> want(9);
    double p = 0.0;
    for (std::size_t n = 0; n <= 8; ++n) {
        for (std::size_t i = 0; i <= std::min<std::size_t>(n, 5); ++i) {
            if (n - i <= 3) {
                want[n] += a[i] * b[n - i] * bs_element(i, n - i, n, 0, 0.9);
            }
        }
        p += std::norm(want[n]);
    }
    CHECK(h.probability == doctest::Approx(p).epsilon(1e-12));
    CHECK(h.probability > 0.0);
    CHECK(h.probability <= 1.0);
    for (std::size_t n = 0; n <= 8; ++n) {
        CHECK(std::abs(h.state[n] - want[n] / std::sqrt(p)) < 1e-12);
    }

    // at theta = 0 the photon in b stays in the heralded mode
    CHECK_THROWS_AS(couple_and_herald_zero(FockVector::basis(0, 0), FockVector::basis(1, 1), 0.0), DegenerateError);
}

TEST_CASE("wigner closed forms") {
    CHECK(wigner_at(FockVector::basis(0, 0), 0.0, 0.0) == doctest::Approx(1.0 / std::numbers::pi));
    CHECK(wigner_at(FockVector::basis(1, 1), 0.0, 0.0) == doctest::Approx(-1.0 / std::numbers::pi));
    // W of |n> at the origin is (-1)^n / pi
    CHECK(wigner_at(FockVector::basis(4, 6), 0.0, 0.0) == doctest::Approx(1.0 / std::numbers::pi));
    // vacuum: exp(-(q^2+p^2))/pi
    CHECK(wigner_at(FockVector::basis(0, 3), 0.7, -0.4) ==
          doctest::Approx(std::exp(-(0.49 + 0.16)) / std::numbers::pi));

    CHECK_THROWS_AS(wigner_grid(FockVector::basis(0, 0), {-1, 1}, {-1, 1}, 1, 5), ContractError);
}

TEST_CASE("wigner grid integral, parity symmetry and marginals") {
    const double h = 1.0 / std::sqrt(2.0);
    const FockVector even({h, 0.0, cplx(0.0, h)});
    const WignerGrid g = wigner_grid(even, {-6.0, 6.0}, {-6.0, 6.0}, 121, 121);
    CHECK(g.integral() == doctest::Approx(1.0).epsilon(1e-3));
    for (std::size_t iq = 0; iq < g.n_q; ++iq) {
        for (std::size_t ip = 0; ip < g.n_p; ++ip) {
            CHECK(std::abs(g.at(iq, ip) - g.at(g.n_q - 1 - iq, g.n_p - 1 - ip)) < 1e-12);
        }
    }

    // The p-marginal of W is |psi(q)|^2 and the q-marginal is |psi~(p)|^2; a
    // complex superposition pins both the orientation and the sign of p.
    std::mt19937_64 rng(5);
    const FockVector v = normalize(random_vector(4, rng)).state;
    const WignerGrid w = wigner_grid(v, {-7.0, 7.0}, {-7.0, 7.0}, 141, 281);
    const double dp = 14.0 / 280.0;
    const double dq = 14.0 / 140.0;
    const cplx minus_i(0.0, -1.0);
    for (std::size_t iq = 10; iq < w.n_q; iq += 17) {
        const double q = w.q(iq);
        double marg = 0.0;
        for (std::size_t ip = 0; ip < w.n_p; ++ip) {
            marg += w.at(iq, ip) * dp;
        }
        cplx psi = 0.0;
        cplx phi = 0.0;
        cplx phase = 1.0;
        for (std::size_t n = 0; n <= 4; ++n) {
            psi += v[n] * hermite_function(n, q);
            phi += v[n] * phase * hermite_function(n, q); // momentum wavefunction at p = q
            phase *= minus_i;
        }
        CHECK(marg == doctest::Approx(std::norm(psi)).epsilon(1e-6));

        // q-marginal evaluated at p = q (grid along q has the same points at this stride)
        double qmarg = 0.0;
        const std::size_t ip = 2 * iq;
        for (std::size_t jq = 0; jq < w.n_q; ++jq) {
            qmarg += w.at(jq, ip) * dq;
        }
        REQUIRE(std::abs(w.p(ip) - q) < 1e-12);
        CHECK(qmarg == doctest::Approx(std::norm(phi)).epsilon(1e-5));
    }
}

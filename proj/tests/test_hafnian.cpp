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

#include <algorithm>
#include <numeric>
#include <random>
#include <vector>

#include "doctest.h"
#include "oqss/error.hpp"
#include "oqss/hafnian.hpp"
#include "support/random_matrix.hpp"

using namespace oqss;
using namespace oqss::hafnian;
using oqss::testing::random_symmetric;
using oqss::testing::rel_err;

namespace {

// Sums matchings-with-loops grouped by the number of pairs they use. A matching
// with p pairs on n vertices has n - p factors, so scaling the matrix by s
// scales that group by s^(n-p).
void degree_parts(const SymmetricComplexMatrix &m, std::uint32_t remaining, std::size_t pairs, cplx weight,
                  std::vector<cplx> &by_pairs) {
    if (remaining == 0) {
        by_pairs[pairs] += weight;
        return;
    }
    const auto v = static_cast<std::size_t>(__builtin_ctz(remaining));
    const std::uint32_t rest = remaining & (remaining - 1U);
    degree_parts(m, rest, pairs, weight * m(v, v), by_pairs);
    for (std::uint32_t bits = rest; bits != 0; bits &= bits - 1U) {
        const auto u = static_cast<std::size_t>(__builtin_ctz(bits));
        degree_parts(m, rest & ~(1U << u), pairs + 1, weight * m(v, u), by_pairs);
    }
}

SymmetricComplexMatrix scaled(const SymmetricComplexMatrix &m, cplx s) {
    SymmetricComplexMatrix out(m.dim());
    for (std::size_t i = 0; i < m.dim(); ++i) {
        for (std::size_t j = i; j < m.dim(); ++j) {
            out.set(i, j, s * m(i, j));
        }
    }
    return out;
}

} // namespace

TEST_CASE("SymmetricComplexMatrix rejects asymmetric entries") {
    CHECK_THROWS_AS(SymmetricComplexMatrix(2, {1.0, 2.0, 3.0, 4.0}), ContractError);
    CHECK_THROWS_AS(SymmetricComplexMatrix(2, {1.0, 2.0, 2.0}), ContractError);
    CHECK_NOTHROW(SymmetricComplexMatrix(2, {1.0, 2.0, 2.0, 4.0}));
}

TEST_CASE("loop_hafnian small cases") {
    CHECK(loop_hafnian(SymmetricComplexMatrix(0)) == cplx(1.0, 0.0));
    CHECK(loop_hafnian_bruteforce(SymmetricComplexMatrix(0)) == cplx(1.0, 0.0));

    const cplx a(0.3, -1.7);
    CHECK(loop_hafnian(SymmetricComplexMatrix(1, {a})) == a);

    // two matchings: the pair (2) and two loops (1*3)
    const SymmetricComplexMatrix m2(2, {1.0, 2.0, 2.0, 3.0});
    CHECK(std::abs(loop_hafnian(m2) - cplx(5.0, 0.0)) < 1e-13);
    CHECK(std::abs(loop_hafnian_bruteforce(m2) - cplx(5.0, 0.0)) < 1e-13);

    CHECK(loop_hafnian_bruteforce(SymmetricComplexMatrix(2, {1.0, 0.0, 0.0, 1.0})) == cplx(1.0, 0.0));

    // three pair+loop matchings and one triple loop
    const SymmetricComplexMatrix ones(3, std::vector<cplx>(9, 1.0));
    CHECK(loop_hafnian_bruteforce(ones) == cplx(4.0, 0.0));
    CHECK(std::abs(loop_hafnian(ones) - cplx(4.0, 0.0)) < 1e-12);
}

TEST_CASE("loop_hafnian of the all-ones matrix counts telephone numbers") {
    // involutions of n elements: 1, 1, 2, 4, 10, 26, 76, 232, 764, 2620, 9496
    const std::vector<double> telephone{1, 1, 2, 4, 10, 26, 76, 232, 764, 2620, 9496};
    for (std::size_t n = 0; n < telephone.size(); ++n) {
        const SymmetricComplexMatrix ones(n, std::vector<cplx>(n * n, 1.0));
        CHECK(std::abs(loop_hafnian(ones) - telephone[n]) < 1e-9 * telephone[n]);
    }
}

TEST_CASE("loop_hafnian matches brute force on a random dim-8 matrix") {
    std::mt19937_64 rng(8);
    const auto m = random_symmetric(8, rng);
    CHECK(rel_err(loop_hafnian(m), loop_hafnian_bruteforce(m)) < 1e-9);
}

TEST_CASE("property: loop_hafnian equals brute force for dims 0..10") {
    std::mt19937_64 rng(20260101);
    for (int trial = 0; trial < 120; ++trial) {
        const std::size_t dim = static_cast<std::size_t>(trial % 11);
        const auto m = random_symmetric(dim, rng);
        const cplx fast = loop_hafnian(m);
        const cplx slow = loop_hafnian_bruteforce(m);
        INFO("dim=" << dim << " fast=" << fast << " slow=" << slow);
        CHECK(rel_err(fast, slow) < 1e-9);
    }
}

TEST_CASE("property: block-diagonal matrices factorize") {
    std::mt19937_64 rng(77);
    for (int trial = 0; trial < 20; ++trial) {
        const std::size_t da = 1 + static_cast<std::size_t>(trial % 5);
        const std::size_t db = 1 + static_cast<std::size_t>((trial / 5) % 4);
        const auto a = random_symmetric(da, rng);
        const auto b = random_symmetric(db, rng);
        SymmetricComplexMatrix block(da + db);
        for (std::size_t i = 0; i < da; ++i) {
            for (std::size_t j = i; j < da; ++j) {
                block.set(i, j, a(i, j));
            }
        }
        for (std::size_t i = 0; i < db; ++i) {
            for (std::size_t j = i; j < db; ++j) {
                block.set(da + i, da + j, b(i, j));
            }
        }
        CHECK(rel_err(loop_hafnian(block), loop_hafnian(a) * loop_hafnian(b)) < 1e-10);
    }
}

TEST_CASE("property: loop_hafnian(sA) is the degree-graded polynomial of brute force") {
    std::mt19937_64 rng(6);
    const std::vector<cplx> scales{cplx(0.5, 0.0), cplx(-1.3, 0.4), cplx(2.0, -0.7)};
    for (std::size_t dim = 1; dim <= 6; ++dim) {
        const auto m = random_symmetric(dim, rng);
        std::vector<cplx> by_pairs(dim / 2 + 1, 0.0);
        degree_parts(m, (1U << dim) - 1U, 0, 1.0, by_pairs);
        for (cplx s : scales) {
            cplx poly = 0.0;
            for (std::size_t p = 0; p < by_pairs.size(); ++p) {
                poly += std::pow(s, static_cast<int>(dim - p)) * by_pairs[p];
            }
            CHECK(rel_err(loop_hafnian(scaled(m, s)), poly) < 1e-10);
            CHECK(rel_err(loop_hafnian_bruteforce(scaled(m, s)), poly) < 1e-12);
        }
    }
}

TEST_CASE("capacity errors") {
    CHECK_THROWS_AS(loop_hafnian_bruteforce(SymmetricComplexMatrix(13)), CapacityError);
    CHECK_THROWS_AS(loop_hafnian(SymmetricComplexMatrix(kMaxDimension + 1)), CapacityError);
}

TEST_CASE("reduce_matrix") {
    std::mt19937_64 rng(3);
    const auto m = random_symmetric(3, rng);
    const std::vector<cplx> diag = m.diagonal();

    SUBCASE("all-zero repetitions give the empty matrix") {
        CHECK(reduce_matrix(m, RepetitionVector{{0, 0, 0}}, diag).dim() == 0);
    }
    SUBCASE("unit repetitions with the original diagonal are the identity reduction") {
        const auto r = reduce_matrix(m, RepetitionVector{{1, 1, 1}}, diag);
        REQUIRE(r.dim() == 3);
        for (std::size_t i = 0; i < 3; ++i) {
            for (std::size_t j = 0; j < 3; ++j) {
                CHECK(r(i, j) == m(i, j));
            }
        }
    }
    SUBCASE("repeating one row tiles its diagonal entry off-diagonal") {
        const SymmetricComplexMatrix two(2, {cplx(1, 1), cplx(2, 0), cplx(2, 0), cplx(3, 0)});
        const std::vector<cplx> over{cplx(9, -1), cplx(8, 0)};
        const auto r = reduce_matrix(two, RepetitionVector{{2, 0}}, over);
        REQUIRE(r.dim() == 2);
        CHECK(r(0, 1) == cplx(1, 1));
        CHECK(r(1, 0) == cplx(1, 1));
        CHECK(r(0, 0) == cplx(9, -1));
        CHECK(r(1, 1) == cplx(9, -1));
    }
    SUBCASE("length mismatch") {
        CHECK_THROWS_AS(reduce_matrix(m, RepetitionVector{{1, 1}}, diag), ContractError);
        CHECK_THROWS_AS(reduce_matrix(m, RepetitionVector{{1, 1, 1}}, std::vector<cplx>(2)), ContractError);
    }
}

TEST_CASE("property: reduction is invariant under joint permutation of modes and counts") {
    std::mt19937_64 rng(11);
    std::uniform_int_distribution<std::size_t> count(0, 3);
    for (int trial = 0; trial < 25; ++trial) {
        const std::size_t l = 2 + static_cast<std::size_t>(trial % 3);
        const auto m = random_symmetric(l, rng);
        std::vector<cplx> gamma(l);
        std::uniform_real_distribution<double> uni(-1.0, 1.0);
        for (auto &g : gamma) {
            g = cplx(uni(rng), uni(rng));
        }
        std::vector<std::size_t> reps(l);
        for (auto &r : reps) {
            r = count(rng);
        }
        std::vector<std::size_t> perm(l);
        std::iota(perm.begin(), perm.end(), 0);
        std::shuffle(perm.begin(), perm.end(), rng);

        SymmetricComplexMatrix pm(l);
        std::vector<cplx> pgamma(l);
        std::vector<std::size_t> preps(l);
        for (std::size_t i = 0; i < l; ++i) {
            pgamma[i] = gamma[perm[i]];
            preps[i] = reps[perm[i]];
            for (std::size_t j = i; j < l; ++j) {
                pm.set(i, j, m(perm[i], perm[j]));
            }
        }
        const cplx a = loop_hafnian(reduce_matrix(m, RepetitionVector{reps}, gamma));
        const cplx b = loop_hafnian(reduce_matrix(pm, RepetitionVector{preps}, pgamma));
        CHECK(rel_err(b, a) < 1e-10);
    }
}

TEST_CASE("predicted_cost") {
    const std::vector<std::size_t> twos{2, 2, 2};
    const auto c = predicted_cost(CostModel::from_pattern(twos, 10.0));
    CHECK(c.steps_pattern == doctest::Approx(243.0));
    CHECK(c.steps_truncation == doctest::Approx(900000.0));
    CHECK(c.min() == doctest::Approx(243.0));

    const std::vector<std::size_t> zero{0};
    const auto one = predicted_cost(CostModel::from_pattern(zero, 1.0));
    CHECK(one.steps_pattern == doctest::Approx(1.0));
    CHECK(one.steps_truncation == doctest::Approx(1.0));

    const std::vector<std::size_t> mixed{0, 2, 4};
    const auto cm = CostModel::from_pattern(mixed, 5.0);
    CHECK(cm.arithmetic_mean == doctest::Approx(3.0));
    CHECK(cm.geometric_mean == doctest::Approx(std::cbrt(15.0)));
    CHECK(cm.arithmetic_mean >= cm.geometric_mean);
    CHECK(cm.geometric_mean >= 1.0);
}

TEST_CASE("benchmark_hafnian") {
    const std::vector<BenchmarkCase> one{{2, {2, 2}}};
    const auto rows = benchmark_hafnian(one, 1.0e5, 2);
    REQUIRE(rows.size() == 1);
    CHECK(rows[0].D == 4);
    CHECK(rows[0].wall_time_ns > 0.0);
    const std::string csv = benchmark_csv(rows);
    CHECK(csv.rfind("D,l,pattern,predicted_steps,wall_time_ns\n4,2,2-2,", 0) == 0);

    const auto sweep = pattern_sweep(7, 10, 3);
    REQUIRE(sweep.size() == 2);
    CHECK(sweep[0].pattern == std::vector<std::size_t>{2, 2, 2, 1});
    CHECK(sweep[1].l == 5);
    CHECK_THROWS_AS(pattern_sweep(8, 4, 2), ContractError);

    const std::vector<BenchmarkCase> bad{{3, {1, 1}}};
    CHECK_THROWS_AS(benchmark_hafnian(bad), ContractError);
}

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

#pragma once

#include <complex>
#include <random>

#include "oqss/hafnian.hpp"

namespace oqss::testing {

/// Symmetric matrix with entries uniform in the unit square [-1,1] x [-1,1] i.
inline hafnian::SymmetricComplexMatrix random_symmetric(std::size_t dim, std::mt19937_64 &rng, double scale = 1.0) {
    std::uniform_real_distribution<double> uni(-1.0, 1.0);
    hafnian::SymmetricComplexMatrix m(dim);
    for (std::size_t i = 0; i < dim; ++i) {
        for (std::size_t j = i; j < dim; ++j) {
            m.set(i, j, std::complex<double>(uni(rng), uni(rng)) * scale);
        }
    }
    return m;
}

inline double rel_err(std::complex<double> got, std::complex<double> want) {
    const double denom = std::max(std::abs(want), 1e-300);
    return std::abs(got - want) / denom;
}

} // namespace oqss::testing

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
 * @brief Approximate GKP codewords in the Fock basis.
 *
 * Symmetric-Delta convention: peak width and envelope width are both Delta,
 *   psi(q) ~ sum_s exp(-Delta^2 c_s^2 / 2) exp(-(q - c_s)^2 / (2 Delta^2)),
 *   c_s = (2s + logical) sqrt(pi),   Delta^2 = 10^(-dB/10).
 */

#pragma once

#include <cstddef>
#include <vector>

#include "oqss/fock.hpp"

namespace oqss::gkp {

double delta_from_db(double squeezing_db);
double db_from_delta(double delta);
/// dB -> Delta -> dB.
double db_delta_roundtrip(double squeezing_db);

struct GkpParams {
    double squeezing_db = 10.0;
    int logical = 0; ///< 0 or 1
    double delta() const { return delta_from_db(squeezing_db); }
};

/// Cutoff standing in for the untruncated codeword.
inline std::size_t reference_cutoff(std::size_t n_max) { return n_max * 4 > 128 ? n_max * 4 : 128; }

/// Real Fock coefficients g_0..g_k of the codeword, normalized over 0..k.
/// Throws ContractError for a logical value other than 0/1 or a non-finite level.
std::vector<double> codeword_coefficients(const GkpParams &p, std::size_t k);

/// Normalized truncation of the codeword to |0>..|n_max>.
fock::FockVector gkp_coefficients(const GkpParams &p, std::size_t n_max);

/// |<0bar_nmax | 0bar>|^2 with the reference cutoff as the untruncated state.
double truncation_fidelity(const GkpParams &p, std::size_t n_max);

} // namespace oqss::gkp

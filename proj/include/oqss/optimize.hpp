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
 * @brief Seeded multistart bounded maximization.
 *
 * Restart i starts at the box center (or config.initial) for i == 0 and otherwise at a uniform
 * point drawn from a generator seeded with splitmix64(seed + i), so results
 * do not depend on the thread count or scheduling.
 */

#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <limits>
#include <span>
#include <string>
#include <vector>

namespace oqss::optimize {

enum class Method {
    nelder_mead, ///< derivative-free simplex descent
    bfgs,        ///< quasi-Newton on central finite differences
    hybrid,      ///< simplex, then a quasi-Newton polish
};

std::string to_string(Method m);
/// Throws ContractError for an unknown name.
Method method_from_string(const std::string &s);

struct Bound {
    double lo = 0.0;
    double hi = 1.0;
    bool periodic = false; ///< wrap into [lo, hi) instead of clamping
};

struct OptimizerConfig {
    std::size_t restarts = 20;
    std::size_t max_evals = 5000; ///< per restart
    double tolerance = 1e-10;     ///< objective change treated as converged
    std::uint64_t seed = 1;
    std::vector<Bound> bounds;
    Method method = Method::nelder_mead;
    std::size_t threads = 1; ///< 0 = hardware concurrency
    /// Stop once a restart reaches this value. The result is then the best of
    /// restarts 0..k, k the first restart reaching it, which is still
    /// independent of scheduling.
    double target = std::numeric_limits<double>::infinity();
    /// Replaces the box center as the start of restart 0 when non-empty.
    std::vector<double> initial;
};

struct RestartTrace {
    double best_value = 0.0;
    std::size_t evals = 0;
    bool converged = false;
};

struct OptTrace {
    std::vector<RestartTrace> restarts;
};

struct OptResult {
    std::vector<double> best_params;
    double best_value = -std::numeric_limits<double>::infinity();
    OptTrace trace;
};

using Objective = std::function<double(std::span<const double>)>;

/// Maximizes `f` over the box. The objective may be called concurrently.
/// Throws ContractError on an invalid config and SolverError when `f`
/// returns a non-finite value (the message carries the parameter point).
OptResult maximize(const Objective &f, const OptimizerConfig &config);

std::uint64_t splitmix64(std::uint64_t x);

} // namespace oqss::optimize

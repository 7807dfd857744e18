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

#include "oqss/kernels.hpp"

#include <cstdlib>
#include <string>

#include "oqss/error.hpp"

namespace oqss::kernels {

namespace {

bool cpu_has_avx2() noexcept {
#if defined(OQSS_HAVE_AVX2_KERNELS) && (defined(__GNUC__) || defined(__clang__))
    __builtin_cpu_init();
    return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
    return false;
#endif
}

Backend pick() noexcept {
    const char *env = std::getenv("OQSS_SIMD");
    if (env != nullptr && std::string(env) == "scalar") {
        return Backend::scalar;
    }
    return cpu_has_avx2() ? Backend::avx2 : Backend::scalar;
}

} // namespace

bool supported(Backend b) noexcept {
    switch (b) {
    case Backend::scalar:
        return true;
    case Backend::avx2:
        return cpu_has_avx2();
    }
    return false;
}

const Table &table(Backend b) {
    if (!supported(b)) {
        throw ContractError("kernel backend '" + std::string(name(b)) + "' is not available on this CPU/build");
    }
#if defined(OQSS_HAVE_AVX2_KERNELS)
    if (b == Backend::avx2) {
        return detail::avx2_table();
    }
#endif
    return detail::scalar_table();
}

Backend active() noexcept {
    static const Backend b = pick();
    return b;
}

std::string_view name(Backend b) noexcept {
    switch (b) {
    case Backend::scalar:
        return "scalar";
    case Backend::avx2:
        return "avx2";
    }
    return "unknown";
}

const Table &dispatch() noexcept {
    static const Table &t = [] () -> const Table & {
#if defined(OQSS_HAVE_AVX2_KERNELS)
        if (active() == Backend::avx2) {
            return detail::avx2_table();
        }
#endif
        return detail::scalar_table();
    }();
    return t;
}

} // namespace oqss::kernels

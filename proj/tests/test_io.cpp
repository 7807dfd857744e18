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
#include <filesystem>
#include <set>

#include "doctest.h"
#include "oqss/error.hpp"
#include "oqss/io.hpp"

using namespace oqss;
using fock::cplx;
using fock::FockVector;

namespace {

std::filesystem::path scratch_dir() {
    const auto p = std::filesystem::temp_directory_path() / "oqss_test_io";
    std::filesystem::create_directories(p);
    return p;
}

} // namespace

TEST_CASE("fock file round trip") {
    const FockVector v(std::vector<cplx>{{0.1, -0.2}, {1.0 / 3.0, 0.0}, {0.0, 0.0}, {-1e-17, 2.5e-300}});
    const FockVector back = io::parse_fock(io::format_fock(v));
    REQUIRE(back.size() == v.size());
    for (std::size_t n = 0; n < v.size(); ++n) {
        CHECK(back[n] == v[n]);
    }
    const auto path = scratch_dir() / "v.txt";
    io::write_fock_file(path, v);
    CHECK(io::read_fock_file(path)[1] == v[1]);
}

TEST_CASE("fock file parsing") {
    const FockVector v = io::parse_fock("# comment\n\n3 0.5 0 # trailing\n0 0.5 0\n");
    CHECK(v.cutoff() == 3);
    CHECK(v[1] == cplx(0.0, 0.0));
    CHECK(v[3] == cplx(0.5, 0.0));
    CHECK_THROWS_AS(io::parse_fock(""), ParseError);
    CHECK_THROWS_AS(io::parse_fock("0 1\n"), ParseError);
    CHECK_THROWS_AS(io::parse_fock("0 1 0\n0 1 0\n"), ParseError);
    CHECK_THROWS_AS(io::parse_fock("-1 1 0\n"), ParseError);
    CHECK_THROWS_AS(io::parse_fock("0 1 0 7\n"), ParseError);
    CHECK_THROWS_AS(io::parse_fock("0 nan 0\n"), ParseError);
    CHECK_THROWS_AS(io::read_fock_file(scratch_dir() / "missing.txt"), IoError);
}

TEST_CASE("wigner csv layout") {
    const auto g = fock::wigner_grid(FockVector::basis(0, 0), {-1, 1}, {-2, 2}, 3, 5);
    const std::string csv = io::wigner_csv(g);
    CHECK(csv.rfind("# -1 1 -2 2 3 5\n", 0) == 0);
    std::size_t lines = 0, commas = 0;
    for (char c : csv) {
        lines += c == '\n';
        commas += c == ',';
    }
    CHECK(lines == 4);
    CHECK(commas == 3 * 4);
}

TEST_CASE("circuit json round trip") {
    gaussian::Circuit c{2, {{"squeeze", {0}, {0.3, 0.1}}, {"beamsplitter", {0, 1}, {0.7, 0.2}}}};
    const gaussian::Circuit back = io::circuit_from_json(io::parse_json(io::to_json(c).dump()));
    CHECK(back.modes == 2);
    REQUIRE(back.ops.size() == 2);
    CHECK(back.ops[1].op == "beamsplitter");
    CHECK(back.ops[1].params[0] == 0.7);
    CHECK_THROWS_AS(io::circuit_from_json(io::parse_json(R"({"modes": 1})")), ParseError);
    CHECK_THROWS_AS(io::parse_json("{not json"), ParseError);
}

TEST_CASE("synthesis result json round trip") {
    const FockVector t(std::vector<cplx>{1 / std::sqrt(2.0), 0, 1 / std::sqrt(2.0)});
    backcast::SynthesisConfig cfg;
    cfg.leaf.opt.restarts = 8;
    const auto r = backcast::synthesize(t, backcast::plan_layers(2, {.n_layers = 2}), cfg);
    REQUIRE(r.complete());
    const std::string text = io::to_json(r).dump(2);
    const auto back = io::result_from_json(io::parse_json(text));
    CHECK(io::to_json(back).dump(2) == text);
    const auto v = backcast::forward_verify(back, t);
    CHECK(std::abs(v.fidelity - r.end_to_end_fidelity) < 1e-12);

    auto j = io::parse_json(text);
    j["nodes"].erase(1);
    CHECK_THROWS_AS(io::result_from_json(j), ParseError);
    CHECK_THROWS_AS(io::result_from_json(io::parse_json("{}")), ParseError);
}

TEST_CASE("run directories are never reused") {
    const auto base = scratch_dir() / "runs";
    std::set<std::filesystem::path> seen;
    for (int i = 0; i < 3; ++i) {
        const auto p = io::make_run_directory(base, "t");
        CHECK(std::filesystem::is_directory(p));
        CHECK(seen.insert(p).second);
    }
    std::filesystem::remove_all(base);
}

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
 * @brief File formats: FockVector text files, Wigner CSV, and JSON for
 * circuits, plans and synthesis results.
 *
 * FockVector file: one `n re im` triple per line; `#` starts a comment;
 * missing levels are zero. Doubles are written with round-trip precision.
 */

#pragma once

#include <filesystem>
#include <string>

#include <json.hpp>

#include "oqss/backcast.hpp"
#include "oqss/fock.hpp"
#include "oqss/gaussian.hpp"

namespace oqss::io {

using json = nlohmann::ordered_json;

std::string format_fock(const fock::FockVector &v);
/// Throws ParseError (with the line number) on malformed input, duplicate or
/// negative levels, non-finite values, or an empty file.
fock::FockVector parse_fock(const std::string &text);

void write_text(const std::filesystem::path &path, const std::string &text);
/// Throws IoError when the file cannot be read.
std::string read_text(const std::filesystem::path &path);

void write_fock_file(const std::filesystem::path &path, const fock::FockVector &v);
fock::FockVector read_fock_file(const std::filesystem::path &path);

/// Header `# q_min q_max p_min p_max n_q n_p`, then n_q rows of n_p values.
std::string wigner_csv(const fock::WignerGrid &g);

json to_json(const gaussian::Circuit &c);
gaussian::Circuit circuit_from_json(const json &j);

json to_json(const backcast::LayerPlan &p);
backcast::LayerPlan plan_from_json(const json &j);

json to_json(const optimize::OptimizerConfig &c);
optimize::OptimizerConfig optimizer_config_from_json(const json &j);

json to_json(const backcast::SynthesisResult &r);
/// Inverse of to_json; throws ParseError on missing or mistyped fields.
backcast::SynthesisResult result_from_json(const json &j);

/// Parses JSON text, mapping syntax errors to ParseError.
json parse_json(const std::string &text);

/// Creates base/<UTC timestamp>-<tag>[-k] without ever reusing an existing
/// directory. Throws IoError on failure.
std::filesystem::path make_run_directory(const std::filesystem::path &base, const std::string &tag);

} // namespace oqss::io

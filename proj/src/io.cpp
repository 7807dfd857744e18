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

#include "oqss/io.hpp"

#include <chrono>
#include <cmath>
#include <ctime>
#include <fstream>
#include <iomanip>
#include <limits>
#include <map>
#include <sstream>

#include "oqss/error.hpp"

namespace oqss::io {

using fock::cplx;
using fock::FockVector;

namespace {

constexpr int kDigits = std::numeric_limits<double>::max_digits10;

// JSON has no infinities; they are stored as null.
json num(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

double get_num(const json &j, double fallback) { return j.is_null() ? fallback : j.get<double>(); }

json complex_list(std::span<const cplx> v) {
    json a = json::array();
    for (const cplx &c : v) {
        a.push_back({c.real(), c.imag()});
    }
    return a;
}

std::vector<cplx> complex_list_from(const json &j) {
    std::vector<cplx> v;
    for (const json &e : j) {
        if (!e.is_array() || e.size() != 2) {
            throw ParseError("expected [re, im] pair");
        }
        v.emplace_back(e[0].get<double>(), e[1].get<double>());
    }
    return v;
}

template <class F> auto guarded(const char *what, F &&f) {
    try {
        return f();
    } catch (const nlohmann::json::exception &e) {
        throw ParseError(std::string(what) + ": " + e.what());
    }
}

json trace_json(const optimize::OptTrace &t) {
    json a = json::array();
    for (const optimize::RestartTrace &r : t.restarts) {
        a.push_back({{"best_value", num(r.best_value)}, {"evals", r.evals}, {"converged", r.converged}});
    }
    return a;
}

optimize::OptTrace trace_from(const json &j) {
    optimize::OptTrace t;
    for (const json &r : j) {
        t.restarts.push_back({get_num(r.at("best_value"), 0.0), r.at("evals").get<std::size_t>(),
                              r.at("converged").get<bool>()});
    }
    return t;
}

} // namespace

std::string format_fock(const FockVector &v) {
    std::ostringstream os;
    os << std::setprecision(kDigits);
    os << "# n re im\n";
    for (std::size_t n = 0; n < v.size(); ++n) {
        os << n << ' ' << v[n].real() << ' ' << v[n].imag() << '\n';
    }
    return os.str();
}

FockVector parse_fock(const std::string &text) {
    std::istringstream in(text);
    std::map<std::size_t, cplx> levels;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (const auto hash = line.find('#'); hash != std::string::npos) {
            line.erase(hash);
        }
        std::istringstream ls(line);
        std::string first;
        if (!(ls >> first)) {
            continue;
        }
        const auto fail = [&](const std::string &why) {
            throw ParseError("fock file line " + std::to_string(lineno) + ": " + why);
        };
        if (first.find_first_not_of("0123456789") != std::string::npos) {
            fail("level must be a non-negative integer, got '" + first + "'");
        }
        std::size_t n = 0;
        try {
            n = std::stoul(first);
        } catch (const std::exception &) {
            fail("level out of range");
        }
        double re = 0.0, im = 0.0;
        std::string extra;
        if (!(ls >> re >> im)) {
            fail("expected `n re im`");
        }
        if (ls >> extra) {
            fail("unexpected trailing field '" + extra + "'");
        }
        if (!std::isfinite(re) || !std::isfinite(im)) {
            fail("non-finite amplitude");
        }
        if (n > 100000) {
            fail("level exceeds 100000");
        }
        if (!levels.emplace(n, cplx(re, im)).second) {
            fail("duplicate level " + std::to_string(n));
        }
    }
    if (levels.empty()) {
        throw ParseError("fock file: no amplitudes");
    }
    std::vector<cplx> amps(levels.rbegin()->first + 1, 0.0);
    for (const auto &[n, c] : levels) {
        amps[n] = c;
    }
    return FockVector(std::move(amps));
}

void write_text(const std::filesystem::path &path, const std::string &text) {
    std::ofstream out(path, std::ios::binary);
    out << text;
    out.close();
    if (!out) {
        throw IoError("cannot write " + path.string());
    }
}

std::string read_text(const std::filesystem::path &path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw IoError("cannot read " + path.string());
    }
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

void write_fock_file(const std::filesystem::path &path, const FockVector &v) { write_text(path, format_fock(v)); }

FockVector read_fock_file(const std::filesystem::path &path) { return parse_fock(read_text(path)); }

std::string wigner_csv(const fock::WignerGrid &g) {
    std::ostringstream os;
    os << std::setprecision(kDigits);
    os << "# " << g.q_min << ' ' << g.q_max << ' ' << g.p_min << ' ' << g.p_max << ' ' << g.n_q << ' ' << g.n_p
       << '\n';
    for (std::size_t iq = 0; iq < g.n_q; ++iq) {
        for (std::size_t ip = 0; ip < g.n_p; ++ip) {
            os << (ip ? "," : "") << g.at(iq, ip);
        }
        os << '\n';
    }
    return os.str();
}

json to_json(const gaussian::Circuit &c) {
    json ops = json::array();
    for (const gaussian::CircuitOp &op : c.ops) {
        ops.push_back({{"op", op.op}, {"modes", op.modes}, {"params", op.params}});
    }
    return {{"modes", c.modes}, {"ops", ops}};
}

gaussian::Circuit circuit_from_json(const json &j) {
    return guarded("circuit", [&] {
        gaussian::Circuit c;
        c.modes = j.at("modes").get<std::size_t>();
        for (const json &op : j.at("ops")) {
            c.ops.push_back({op.at("op").get<std::string>(), op.at("modes").get<std::vector<std::size_t>>(),
                             op.at("params").get<std::vector<double>>()});
        }
        return c;
    });
}

json to_json(const backcast::LayerPlan &p) {
    json nodes = json::array();
    for (const backcast::PlanNode &n : p.nodes) {
        json e = {{"id", n.id}, {"layer", n.layer}, {"index", n.index}, {"budget", n.budget}};
        if (n.is_leaf()) {
            e["herald"] = n.herald;
        } else {
            e["children"] = {*n.left, *n.right};
        }
        nodes.push_back(e);
    }
    return {{"n_max", p.n_max}, {"n_layers", p.n_layers}, {"nodes", nodes}};
}

backcast::LayerPlan plan_from_json(const json &j) {
    return guarded("plan", [&] {
        backcast::LayerPlan p;
        p.n_max = j.at("n_max").get<std::size_t>();
        p.n_layers = j.at("n_layers").get<std::size_t>();
        for (const json &e : j.at("nodes")) {
            backcast::PlanNode n;
            n.id = e.at("id").get<std::size_t>();
            n.layer = e.at("layer").get<std::size_t>();
            n.index = e.at("index").get<std::size_t>();
            n.budget = e.at("budget").get<std::size_t>();
            if (e.contains("children")) {
                const auto ch = e.at("children").get<std::vector<std::size_t>>();
                if (ch.size() != 2) {
                    throw ParseError("plan: interior node needs two children");
                }
                n.left = ch[0];
                n.right = ch[1];
            } else {
                n.herald = e.at("herald").get<std::vector<std::size_t>>();
            }
            if (n.id != p.nodes.size()) {
                throw ParseError("plan: node ids must be 0..N-1 in order");
            }
            p.nodes.push_back(std::move(n));
        }
        return p;
    });
}

json to_json(const optimize::OptimizerConfig &c) {
    return {{"method", optimize::to_string(c.method)},
            {"restarts", c.restarts},
            {"max_evals", c.max_evals},
            {"tolerance", c.tolerance},
            {"target", num(c.target)}};
}

optimize::OptimizerConfig optimizer_config_from_json(const json &j) {
    return guarded("optimizer config", [&] {
        optimize::OptimizerConfig c;
        c.method = optimize::method_from_string(j.at("method").get<std::string>());
        c.restarts = j.at("restarts").get<std::size_t>();
        c.max_evals = j.at("max_evals").get<std::size_t>();
        c.tolerance = j.at("tolerance").get<double>();
        c.target = get_num(j.at("target"), std::numeric_limits<double>::infinity());
        return c;
    });
}

json to_json(const backcast::SynthesisResult &r) {
    json nodes = json::array();
    for (const backcast::NodeSolution &n : r.nodes) {
        json e = {{"id", n.id},
                  {"status", backcast::to_string(n.status)},
                  {"message", n.message},
                  {"target", complex_list(n.target.amplitudes())},
                  {"local_fidelity", n.local_fidelity},
                  {"herald_probability", n.herald_probability},
                  {"seed", n.seed},
                  {"wall_seconds", n.wall_seconds}};
        if (n.id < r.plan.nodes.size() && r.plan.nodes[n.id].is_leaf()) {
            e["params"] = n.params.values;
            e["circuit"] = n.params.values.size() == backcast::CircuitParams::count(n.params.inputs)
                               ? to_json(n.params.circuit())
                               : json(nullptr);
        } else {
            e["theta"] = n.theta;
        }
        e["trace"] = trace_json(n.trace);
        nodes.push_back(e);
    }
    json out = {{"format", "oqss-synthesis-result"},
                {"version", 1},
                {"plan", to_json(r.plan)},
                {"end_to_end_fidelity", r.end_to_end_fidelity},
                {"p_suc_first_layer", r.p_suc_first_layer},
                {"p_suc_total", r.p_suc_total},
                {"log10_p_suc_total", r.p_suc_total > 0 ? json(std::log10(r.p_suc_total)) : json(nullptr)},
                {"max_leaf_tail", r.max_leaf_tail},
                {"guard", r.guard},
                {"complete", r.complete()},
                {"failed_node", r.failed_node ? json(*r.failed_node) : json(nullptr)},
                {"wall_seconds", r.wall_seconds}};
    if (r.post_correction) {
        const backcast::PostCorrection &pc = *r.post_correction;
        out["post_correction"] = {{"fidelity", pc.fidelity},
                                  {"r", pc.r},
                                  {"phi", pc.phi},
                                  {"rotation", pc.rotation},
                                  {"alpha", {pc.alpha.real(), pc.alpha.imag()}}};
    }
    out["nodes"] = nodes;
    return out;
}

backcast::SynthesisResult result_from_json(const json &j) {
    return guarded("synthesis result", [&] {
        if (j.value("format", "") != "oqss-synthesis-result") {
            throw ParseError("synthesis result: missing format tag");
        }
        backcast::SynthesisResult r;
        r.plan = plan_from_json(j.at("plan"));
        r.end_to_end_fidelity = j.at("end_to_end_fidelity").get<double>();
        r.p_suc_first_layer = j.at("p_suc_first_layer").get<double>();
        r.p_suc_total = j.at("p_suc_total").get<double>();
        r.max_leaf_tail = j.at("max_leaf_tail").get<double>();
        r.guard = j.at("guard").get<std::size_t>();
        if (!j.at("failed_node").is_null()) {
            r.failed_node = j.at("failed_node").get<std::size_t>();
        }
        r.wall_seconds = j.at("wall_seconds").get<double>();
        if (j.contains("post_correction")) {
            const json &pc = j.at("post_correction");
            r.post_correction = backcast::PostCorrection{
                pc.at("fidelity").get<double>(), pc.at("r").get<double>(), pc.at("phi").get<double>(),
                pc.at("rotation").get<double>(), cplx(pc.at("alpha")[0].get<double>(), pc.at("alpha")[1].get<double>())};
        }
        for (const json &e : j.at("nodes")) {
            backcast::NodeSolution n;
            n.id = e.at("id").get<std::size_t>();
            if (n.id != r.nodes.size() || n.id >= r.plan.nodes.size()) {
                throw ParseError("synthesis result: node ids must follow the plan");
            }
            n.status = backcast::node_status_from_string(e.at("status").get<std::string>());
            n.message = e.at("message").get<std::string>();
            const auto amps = complex_list_from(e.at("target"));
            n.target = amps.empty() ? FockVector() : FockVector(amps);
            n.local_fidelity = e.at("local_fidelity").get<double>();
            n.herald_probability = e.at("herald_probability").get<double>();
            n.seed = e.at("seed").get<std::uint64_t>();
            n.wall_seconds = e.at("wall_seconds").get<double>();
            if (r.plan.nodes[n.id].is_leaf()) {
                n.params = {r.plan.nodes[n.id].inputs(), e.at("params").get<std::vector<double>>()};
            } else {
                n.theta = e.at("theta").get<double>();
            }
            n.trace = trace_from(e.at("trace"));
            r.nodes.push_back(std::move(n));
        }
        if (r.nodes.size() != r.plan.nodes.size()) {
            throw ParseError("synthesis result: node count differs from the plan");
        }
        return r;
    });
}

json parse_json(const std::string &text) {
    try {
        return json::parse(text);
    } catch (const nlohmann::json::exception &e) {
        throw ParseError(std::string("json: ") + e.what());
    }
}

std::filesystem::path make_run_directory(const std::filesystem::path &base, const std::string &tag) {
    std::error_code ec;
    std::filesystem::create_directories(base, ec);
    if (ec) {
        throw IoError("cannot create " + base.string() + ": " + ec.message());
    }
    const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    std::ostringstream stamp;
    stamp << std::put_time(&tm, "%Y%m%dT%H%M%SZ") << '-' << tag;
    for (int k = 0; k < 10000; ++k) {
        const std::filesystem::path p = base / (k == 0 ? stamp.str() : stamp.str() + "-" + std::to_string(k));
        // create_directory reports false for an existing path: never reuse one
        if (std::filesystem::create_directory(p, ec)) {
            return p;
        }
        if (ec) {
            throw IoError("cannot create " + p.string() + ": " + ec.message());
        }
    }
    throw IoError("cannot find a fresh run directory under " + base.string());
}

} // namespace oqss::io

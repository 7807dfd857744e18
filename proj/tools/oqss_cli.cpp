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

// oqss: batch driver for target generation, synthesis, verification,
// hafnian benchmarking and Wigner grids.
//
// Exit codes: 0 success, 2 usage, 3 planning, 4 solver, 5 I/O or parse,
// 6 forward/backward inconsistency, 7 fidelity below the requested floor.

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "oqss/backcast.hpp"
#include "oqss/error.hpp"
#include "oqss/fock.hpp"
#include "oqss/gkp.hpp"
#include "oqss/hafnian.hpp"
#include "oqss/io.hpp"

namespace fs = std::filesystem;
using namespace oqss;

namespace {

enum Exit : int { kOk = 0, kUsage = 2, kPlanning = 3, kSolver = 4, kIo = 5, kConsistency = 6, kBelowFloor = 7 };

// Explicit output files must not clobber earlier results.
void refuse_overwrite(const fs::path &p) {
    if (fs::exists(p)) {
        throw IoError(p.string() + " already exists; results are never overwritten");
    }
}

std::string fmt(double v, int prec = 10) {
    std::ostringstream os;
    os << std::setprecision(prec) << v;
    return os.str();
}

// ---------------------------------------------------------------- gkp-target

struct GkpTargetArgs {
    double db = 0.0;
    std::size_t n_max = 0;
    int logical = 0;
    std::string out;
    std::string output_dir;
};

int cmd_gkp_target(const GkpTargetArgs &a) {
    const gkp::GkpParams p{a.db, a.logical};
    const fock::FockVector v = gkp::gkp_coefficients(p, a.n_max);
    fs::path path;
    if (!a.out.empty()) {
        path = a.out;
        refuse_overwrite(path);
    } else {
        path = io::make_run_directory(a.output_dir, "gkp-target") / "target.txt";
    }
    std::ostringstream header;
    header << "# GKP logical " << a.logical << ", " << a.db << " dB (Delta = " << fmt(p.delta()) << "), n_max "
           << a.n_max << '\n';
    io::write_text(path, header.str() + io::format_fock(v));
    const double tf = gkp::truncation_fidelity(p, a.n_max);
    std::cout << "target: " << path.string() << '\n' << "truncation_fidelity: " << fmt(tf, 12) << '\n';
    return kOk;
}

// ---------------------------------------------------------------- synthesize

struct SynthArgs {
    std::optional<double> db;
    int logical = 0;
    std::string target_file;
    std::size_t n_max = 0;
    std::size_t layers = 0; // 0 = automatic
    std::size_t leaf_budget = 4;
    std::string method = "hybrid";
    std::size_t restarts = 100;
    std::size_t max_evals = 5000;
    std::size_t partitions = 256;
    double r_max = 2.0;
    double alpha_max = 2.0;
    double interior_floor = 0.999;
    double leaf_floor = 0.99;
    double floor = 0.99;
    std::uint64_t seed = 1;
    std::size_t threads = 0;
    bool post_correct = false;
    std::string output_dir;
};

std::string node_table(const backcast::SynthesisResult &r) {
    std::ostringstream os;
    os << std::left << std::setw(5) << "id" << std::setw(7) << "layer" << std::setw(8) << "budget" << std::setw(12)
       << "herald" << std::setw(13) << "status" << std::setw(16) << "local_F" << std::setw(14) << "P_local"
       << "wall_s\n";
    for (const backcast::PlanNode &pn : r.plan.nodes) {
        const backcast::NodeSolution &ns = r.nodes[pn.id];
        std::string h = "-";
        if (pn.is_leaf()) {
            h.clear();
            for (std::size_t c : pn.herald) {
                h += (h.empty() ? "(" : ",") + std::to_string(c);
            }
            h += h.empty() ? "()" : ")";
        }
        os << std::setw(5) << pn.id << std::setw(7) << pn.layer << std::setw(8) << pn.budget << std::setw(12) << h
           << std::setw(13) << backcast::to_string(ns.status) << std::setw(16) << fmt(ns.local_fidelity, 12)
           << std::setw(14) << fmt(ns.herald_probability, 6) << fmt(ns.wall_seconds, 4) << '\n';
        if (!ns.message.empty()) {
            os << "     " << ns.message << '\n';
        }
    }
    return os.str();
}

int cmd_synthesize(const SynthArgs &a, const std::string &config_text) {
    fock::FockVector target;
    std::string target_desc;
    if (a.db) {
        if (a.n_max == 0) {
            throw PlanningError("synthesize: --nmax must be at least 1 for a GKP target");
        }
        target = gkp::gkp_coefficients({*a.db, a.logical}, a.n_max);
        target_desc = "gkp logical " + std::to_string(a.logical) + " at " + fmt(*a.db) + " dB";
    } else {
        target = io::read_fock_file(a.target_file);
        target_desc = "file " + a.target_file;
    }
    const std::size_t n_max = a.n_max ? a.n_max : target.cutoff();
    if (target.cutoff() > n_max) {
        // Fock files may carry higher levels; they are truncated to the budget.
        target = target.with_cutoff(n_max);
    }
    backcast::PlanPolicy policy;
    policy.leaf_budget = a.leaf_budget;
    if (a.layers) {
        policy.n_layers = a.layers;
    }
    const backcast::LayerPlan plan = backcast::plan_layers(n_max, policy);

    backcast::SynthesisConfig cfg;
    cfg.seed = a.seed;
    cfg.threads = a.threads;
    cfg.interior_floor = a.interior_floor;
    cfg.leaf_floor = a.leaf_floor;
    cfg.post_correct = a.post_correct;
    cfg.split.max_partitions = a.partitions;
    cfg.leaf.r_max = a.r_max;
    cfg.leaf.alpha_max = a.alpha_max;
    cfg.leaf.opt.method = optimize::method_from_string(a.method);
    cfg.leaf.opt.restarts = a.restarts;
    cfg.leaf.opt.max_evals = a.max_evals;

    const fs::path dir = io::make_run_directory(a.output_dir, "synthesize");
    io::write_text(dir / "config.ini", config_text);
    io::write_fock_file(dir / "target.txt", fock::normalize(target.with_cutoff(n_max)).state);

    const backcast::SynthesisResult r = backcast::synthesize(target, plan, cfg);
    io::json j = io::to_json(r);
    j["config"] = config_text;
    io::write_text(dir / "result.json", j.dump(2) + "\n");

    std::ostringstream rep;
    rep << "target: " << target_desc << ", n_max " << n_max << '\n'
        << "plan: " << plan.n_layers << " layer(s), " << plan.leaf_ids().size() << " first-layer circuit(s)\n";
    if (r.complete()) {
        rep << "end_to_end_fidelity: " << fmt(r.end_to_end_fidelity, 12) << '\n'
            << "p_suc_first_layer: " << fmt(r.p_suc_first_layer, 6) << '\n'
            << "p_suc_total: " << fmt(r.p_suc_total, 6) << " (log10 " << fmt(std::log10(r.p_suc_total), 5) << ")\n"
            << "max_leaf_tail: " << fmt(r.max_leaf_tail, 3) << '\n';
        if (r.post_correction) {
            rep << "post_corrected_fidelity: " << fmt(r.post_correction->fidelity, 12) << '\n';
        }
    } else {
        rep << "incomplete: node " << *r.failed_node << " " << backcast::to_string(r.nodes[*r.failed_node].status)
            << ": " << r.nodes[*r.failed_node].message << '\n';
    }
    if (r.failed_node) {
        rep << "first_non_ok_node: " << *r.failed_node << '\n';
    }
    rep << "wall_seconds: " << fmt(r.wall_seconds, 4) << "\n\n" << node_table(r) << "\n# config\n" << config_text;
    io::write_text(dir / "report.txt", rep.str());
    std::cout << rep.str() << "\nresults: " << dir.string() << '\n';

    if (!r.complete()) {
        return kSolver;
    }
    return r.end_to_end_fidelity >= a.floor ? kOk : kBelowFloor;
}

// ---------------------------------------------------------------- verify

int cmd_verify(const std::string &result_file, const std::string &target_file) {
    const backcast::SynthesisResult r = io::result_from_json(io::parse_json(io::read_text(result_file)));
    const fock::FockVector target = io::read_fock_file(target_file);
    if (!r.complete()) {
        std::cout << "result is incomplete (first non-ok node " << (r.failed_node ? *r.failed_node : 0) << ")\n";
        return kSolver;
    }
    const backcast::Verification v = backcast::forward_verify(r, target, false);
    std::cout << "fidelity: " << fmt(v.fidelity, 12) << '\n'
              << "stored_fidelity: " << fmt(r.end_to_end_fidelity, 12) << '\n'
              << "p_suc_first_layer: " << fmt(v.p_suc_first_layer, 6) << '\n'
              << "p_suc_total: " << fmt(v.p_suc_total, 6) << '\n'
              << "max_local_mismatch: " << fmt(v.max_local_mismatch, 3) << '\n';
    bool ok = true;
    if (v.max_local_mismatch > backcast::kConsistencyTol) {
        std::cout << "inconsistent: a node's stored solution does not reproduce its local fidelity\n";
        ok = false;
    }
    if (std::abs(v.fidelity - r.end_to_end_fidelity) > 1e-9) {
        std::cout << "inconsistent: recomputed fidelity differs from the stored value by "
                  << fmt(v.fidelity - r.end_to_end_fidelity, 3) << '\n';
        ok = false;
    }
    std::cout << (ok ? "verified\n" : "verification FAILED\n");
    return ok ? kOk : kConsistency;
}

// ---------------------------------------------------------------- hafnian-bench

int cmd_hafnian_bench(std::size_t d_min, std::size_t d_max, std::size_t step, double batch_ms, const std::string &out) {
    const auto cases = hafnian::pattern_sweep(d_min, d_max, step);
    const auto rows = hafnian::benchmark_hafnian(cases, batch_ms * 1e6);
    const std::string csv = hafnian::benchmark_csv(rows);
    if (!out.empty()) {
        refuse_overwrite(out);
        io::write_text(out, csv);
    } else {
        std::cout << csv;
    }
    if (rows.size() >= 2) {
        std::cerr << "log2(time/D^3) slope per unit D: " << fmt(hafnian::corrected_log2_slope(rows), 4)
                  << " (2^(D/2) family: 0.5)\n";
    }
    return kOk;
}

// ---------------------------------------------------------------- wigner

int cmd_wigner(const std::string &file, std::vector<double> q, std::vector<double> p, std::size_t nq, std::size_t np,
               const std::string &out) {
    const fock::FockVector v = io::read_fock_file(file);
    const std::string csv = io::wigner_csv(fock::wigner_grid(v, {q[0], q[1]}, {p[0], p[1]}, nq, np));
    if (!out.empty()) {
        refuse_overwrite(out);
        io::write_text(out, csv);
    } else {
        std::cout << csv;
    }
    return kOk;
}

} // namespace

int main(int argc, char **argv) {
    CLI::App app{"oqss: optical quantum state synthesis by layered backcasting"};
    app.require_subcommand(1);
    app.set_config("--config", "", "INI/TOML config file; [synthesize] etc. sections hold subcommand options");
    std::string output_dir = "runs";
    app.add_option("--output-dir", output_dir, "Base directory for timestamped run directories")
        ->envname("OQSS_OUTPUT_DIR")
        ->capture_default_str();

    std::function<int()> run;

    GkpTargetArgs ga;
    auto *gkp_cmd = app.add_subcommand("gkp-target", "Write an approximate GKP codeword as a FockVector file");
    gkp_cmd->add_option("--db", ga.db, "Squeezing level in dB")->required();
    gkp_cmd->add_option("--nmax", ga.n_max, "Truncation photon number")->required()->check(CLI::Range(0, 4096));
    gkp_cmd->add_option("--logical", ga.logical, "Logical value 0 or 1")->check(CLI::IsMember({0, 1}));
    gkp_cmd->add_option("--out", ga.out, "Output file (default: new run directory)");
    gkp_cmd->callback([&] {
        ga.output_dir = output_dir;
        run = [&] { return cmd_gkp_target(ga); };
    });

    SynthArgs sa;
    double db = 0.0;
    auto *syn = app.add_subcommand("synthesize", "Plan, backcast and forward-verify a circuit tree");
    auto *db_opt = syn->add_option("--db", db, "GKP target squeezing in dB");
    syn->add_option("--logical", sa.logical, "GKP logical value")->check(CLI::IsMember({0, 1}))->capture_default_str();
    auto *file_opt = syn->add_option("--target-file", sa.target_file, "FockVector target file")
                         ->check(CLI::ExistingFile);
    db_opt->excludes(file_opt);
    syn->add_option("--nmax", sa.n_max, "Root photon budget (0 = target cutoff)")->capture_default_str();
    syn->add_option("--layers", sa.layers, "Force the number of layers (0 = automatic)")->capture_default_str();
    syn->add_option("--leaf-budget", sa.leaf_budget, "Preferred photon budget per first-layer circuit")
        ->capture_default_str();
    syn->add_option("--method", sa.method, "Local optimizer")
        ->check(CLI::IsMember({"nelder-mead", "bfgs", "hybrid"}))
        ->capture_default_str();
    syn->add_option("--restarts", sa.restarts, "Optimizer restarts per node")->check(CLI::Range(1, 100000))
        ->capture_default_str();
    syn->add_option("--max-evals", sa.max_evals, "Objective evaluations per restart")->capture_default_str();
    syn->add_option("--partitions", sa.partitions, "Root partitions scored per split")->capture_default_str();
    syn->add_option("--r-max", sa.r_max, "Squeezing bound")->capture_default_str();
    syn->add_option("--alpha-max", sa.alpha_max, "Displacement bound per quadrature")->capture_default_str();
    syn->add_option("--interior-floor", sa.interior_floor, "Local fidelity floor at beam-splitter nodes")
        ->capture_default_str();
    syn->add_option("--leaf-floor", sa.leaf_floor, "Local fidelity floor at first-layer circuits")
        ->capture_default_str();
    syn->add_option("--floor", sa.floor, "End-to-end fidelity required for exit code 0")->capture_default_str();
    syn->add_option("--seed", sa.seed, "Master seed")->capture_default_str();
    syn->add_option("--threads", sa.threads, "Worker threads (0 = logical cores)")
        ->envname("OQSS_THREADS")
        ->capture_default_str();
    syn->add_flag("--post-correct", sa.post_correct, "Also report the best single-mode Gaussian output correction");
    syn->callback([&] {
        if (db_opt->count() == 0 && file_opt->count() == 0) {
            throw CLI::RequiredError("synthesize needs exactly one of --db or --target-file");
        }
        if (db_opt->count()) {
            sa.db = db;
        }
        sa.output_dir = output_dir;
        run = [&] {
            // Unset options without defaults are dropped so the file reloads cleanly.
            std::istringstream all(syn->config_to_str(true, false));
            std::string config = "[synthesize]\n", line;
            while (std::getline(all, line)) {
                if (line.size() < 3 || line.compare(line.size() - 3, 3, "=\"\"") != 0) {
                    config += line + "\n";
                }
            }
            return cmd_synthesize(sa, config);
        };
    });

    std::string result_file, target_file;
    auto *ver = app.add_subcommand("verify", "Re-simulate a stored result forward and check it");
    ver->add_option("--result", result_file, "result.json from synthesize")->required();
    ver->add_option("--target", target_file, "FockVector target file")->required();
    ver->callback([&] { run = [&] { return cmd_verify(result_file, target_file); }; });

    std::size_t d_min = 8, d_max = 20, step = 2;
    double batch_ms = 20.0;
    std::string bench_out;
    auto *bench = app.add_subcommand("hafnian-bench", "Time loop hafnians over a dimension sweep (CSV)");
    bench->add_option("--dmin", d_min, "Smallest dimension")->check(CLI::Range(1, 40))->capture_default_str();
    bench->add_option("--dmax", d_max, "Largest dimension")->check(CLI::Range(1, 40))->capture_default_str();
    bench->add_option("--step", step, "Dimension step")->check(CLI::Range(1, 40))->capture_default_str();
    bench->add_option("--batch-ms", batch_ms, "Minimum duration of one timing batch")->capture_default_str();
    bench->add_option("--out", bench_out, "CSV file (default: stdout)");
    bench->callback([&] {
        if (d_min > d_max) {
            throw CLI::ValidationError("--dmin", "must not exceed --dmax");
        }
        run = [&] { return cmd_hafnian_bench(d_min, d_max, step, batch_ms, bench_out); };
    });

    std::string fock_file, wigner_out;
    std::vector<double> q_range{-6, 6}, p_range{-6, 6};
    std::size_t nq = 121, np = 121;
    auto *wig = app.add_subcommand("wigner", "Sample the Wigner function of a FockVector file (CSV)");
    wig->add_option("--fock", fock_file, "FockVector file")->required();
    wig->add_option("--q-range", q_range, "q_min q_max")->expected(2)->capture_default_str();
    wig->add_option("--p-range", p_range, "p_min p_max")->expected(2)->capture_default_str();
    wig->add_option("--nq", nq, "Grid points along q")->check(CLI::Range(2, 4096))->capture_default_str();
    wig->add_option("--np", np, "Grid points along p")->check(CLI::Range(2, 4096))->capture_default_str();
    wig->add_option("--out", wigner_out, "CSV file (default: stdout)");
    wig->callback([&] {
        if (!(q_range[0] < q_range[1]) || !(p_range[0] < p_range[1])) {
            throw CLI::ValidationError("--q-range/--p-range", "ranges must be increasing");
        }
        run = [&] { return cmd_wigner(fock_file, q_range, p_range, nq, np, wigner_out); };
    });

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp &e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp &e) {
        return app.exit(e);
    } catch (const CLI::ParseError &e) {
        app.exit(e);
        return kUsage;
    }

    try {
        return run();
    } catch (const PlanningError &e) {
        std::cerr << "planning error: " << e.what() << '\n';
        return kPlanning;
    } catch (const backcast::BelowFloorError &e) {
        std::cerr << "below floor: " << e.what() << '\n';
        return kBelowFloor;
    } catch (const SolverError &e) {
        std::cerr << "solver error: " << e.what() << '\n';
        return kSolver;
    } catch (const ConsistencyError &e) {
        std::cerr << "consistency error: " << e.what() << '\n';
        return kConsistency;
    } catch (const IoError &e) {
        std::cerr << "I/O error: " << e.what() << '\n';
        return kIo;
    } catch (const ParseError &e) {
        std::cerr << "parse error: " << e.what() << '\n';
        return kIo;
    } catch (const ContractError &e) {
        std::cerr << "invalid input: " << e.what() << '\n';
        return kUsage;
    } catch (const Error &e) {
        std::cerr << "error: " << e.what() << '\n';
        return kSolver;
    }
}

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

#include "oqss/backcast.hpp"

#include <algorithm>
#include <atomic>
#include <bit>
#include <chrono>
#include <cmath>
#include <functional>
#include <numbers>
#include <numeric>
#include <random>
#include <sstream>
#include <thread>

#include <Eigen/Eigenvalues>

namespace oqss::backcast {

using fock::cplx;
using fock::FockVector;

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::uint64_t node_seed(std::uint64_t seed, std::size_t id) {
    return optimize::splitmix64(seed ^ (0x9e3779b97f4a7c15ULL * (id + 1)));
}

std::size_t resolve_threads(std::size_t t) {
    return t == 0 ? std::max<std::size_t>(1, std::thread::hardware_concurrency()) : t;
}

} // namespace

// ---------------------------------------------------------------- planning

std::vector<std::size_t> LayerPlan::leaf_ids() const {
    std::vector<std::size_t> ids;
    for (const PlanNode &n : nodes) {
        if (n.is_leaf()) {
            ids.push_back(n.id);
        }
    }
    return ids;
}

std::size_t leaf_capacity(std::size_t inputs) {
    if (inputs <= 1) {
        return 0;
    }
    return (inputs + 2) * (inputs - 1) / 2 - 1;
}

std::vector<std::size_t> leaf_herald(std::size_t budget) {
    if (budget == 0) {
        return {};
    }
    // Prefer at most two photons per detector; allow up to kMaxHerald if needed.
    for (std::size_t per : {std::size_t{2}, kMaxHerald}) {
        for (std::size_t h = 1; h + 1 <= kMaxInputs; ++h) {
            if (h * per >= budget && leaf_capacity(h + 1) >= budget) {
                std::vector<std::size_t> counts(h, budget / h);
                for (std::size_t i = 0; i < budget % h; ++i) {
                    ++counts[i];
                }
                return counts;
            }
        }
    }
    throw PlanningError("leaf budget " + std::to_string(budget) + " exceeds the largest first-layer capacity " +
                        std::to_string(leaf_capacity(kMaxInputs)));
}

namespace {

std::size_t max_leaf_budget() { return leaf_capacity(kMaxInputs); }

LayerPlan build_plan(std::size_t n_max, std::size_t n_layers) {
    LayerPlan plan;
    plan.n_max = n_max;
    plan.n_layers = n_layers;
    plan.nodes.push_back({0, n_layers, 0, n_max, std::nullopt, std::nullopt, {}});
    // breadth-first expansion keeps ids layer-ordered
    for (std::size_t i = 0; i < plan.nodes.size(); ++i) {
        const PlanNode node = plan.nodes[i];
        if (node.layer == 1) {
            plan.nodes[i].herald = leaf_herald(node.budget);
            continue;
        }
        const std::size_t hi = (node.budget + 1) / 2;
        const std::size_t lo = node.budget / 2;
        const std::size_t left = plan.nodes.size();
        plan.nodes.push_back({left, node.layer - 1, 2 * node.index, hi, std::nullopt, std::nullopt, {}});
        plan.nodes.push_back({left + 1, node.layer - 1, 2 * node.index + 1, lo, std::nullopt, std::nullopt, {}});
        plan.nodes[i].left = left;
        plan.nodes[i].right = left + 1;
    }
    return plan;
}

} // namespace

LayerPlan plan_layers(std::size_t n_max, const PlanPolicy &policy) {
    if (n_max == 0) {
        throw PlanningError("plan_layers: n_max must be at least 1");
    }
    const std::size_t cap = max_leaf_budget();
    if (policy.leaf_budget == 0 || policy.leaf_budget > cap) {
        throw PlanningError("plan_layers: leaf budget must lie in 1.." + std::to_string(cap));
    }
    constexpr std::size_t kMaxLayers = 16;
    std::size_t layers = 0;
    if (policy.n_layers) {
        layers = *policy.n_layers;
        if (layers == 0 || layers > kMaxLayers) {
            throw PlanningError("plan_layers: layer count must lie in 1.." + std::to_string(kMaxLayers));
        }
        const std::size_t leaves = std::size_t{1} << (layers - 1);
        if ((n_max + leaves - 1) / leaves > cap) {
            std::size_t need = layers;
            while ((n_max + (std::size_t{1} << (need - 1)) - 1) >> (need - 1) > cap) {
                ++need;
            }
            throw PlanningError("plan_layers: n_max=" + std::to_string(n_max) + " does not fit " +
                                std::to_string(layers) + " layer(s): first-layer circuits (<= " +
                                std::to_string(kMaxInputs) + " inputs, <= " + std::to_string(kMaxHerald) +
                                " photons per detector) hold at most " + std::to_string(cap) +
                                " photons each. Feasible: n_max in 1.." + std::to_string(cap * leaves) +
                                " with " + std::to_string(layers) + " layer(s), or at least " +
                                std::to_string(need) + " layers for n_max=" + std::to_string(n_max));
        }
    } else {
        layers = 1;
        while (((n_max + (std::size_t{1} << (layers - 1)) - 1) >> (layers - 1)) > policy.leaf_budget) {
            ++layers;
            if (layers > kMaxLayers) {
                throw PlanningError("plan_layers: n_max=" + std::to_string(n_max) + " needs more than " +
                                    std::to_string(kMaxLayers) + " layers");
            }
        }
    }
    LayerPlan plan = build_plan(n_max, layers);
    check_plan(plan);
    return plan;
}

void check_plan(const LayerPlan &plan) {
    if (plan.nodes.empty() || plan.nodes[0].budget != plan.n_max || plan.nodes[0].layer != plan.n_layers) {
        throw PlanningError("plan: root must carry the full budget at the top layer");
    }
    std::size_t leaf_sum = 0;
    std::size_t herald_sum = 0;
    std::size_t capacity = 0;
    for (const PlanNode &n : plan.nodes) {
        if (n.is_leaf()) {
            if (n.layer != 1) {
                throw PlanningError("plan: leaf " + std::to_string(n.id) + " is not in the first layer");
            }
            if (n.inputs() > kMaxInputs) {
                throw PlanningError("plan: leaf " + std::to_string(n.id) + " has more than " +
                                    std::to_string(kMaxInputs) + " inputs");
            }
            std::size_t h = 0;
            for (std::size_t c : n.herald) {
                if (c > kMaxHerald) {
                    throw PlanningError("plan: leaf " + std::to_string(n.id) + " heralds more than " +
                                        std::to_string(kMaxHerald) + " photons on one detector");
                }
                h += c;
            }
            if (h != n.budget) {
                throw PlanningError("plan: leaf " + std::to_string(n.id) + " herald total differs from its budget");
            }
            leaf_sum += n.budget;
            herald_sum += h;
            capacity += leaf_capacity(n.inputs());
            continue;
        }
        if (!n.right || *n.left >= plan.nodes.size() || *n.right >= plan.nodes.size()) {
            throw PlanningError("plan: node " + std::to_string(n.id) + " has invalid children");
        }
        const PlanNode &a = plan.nodes[*n.left];
        const PlanNode &b = plan.nodes[*n.right];
        if (a.budget + b.budget != n.budget || a.layer + 1 != n.layer || b.layer + 1 != n.layer) {
            throw PlanningError("plan: budgets of node " + std::to_string(n.id) + " are not additive");
        }
    }
    if (leaf_sum != plan.n_max || herald_sum != plan.n_max) {
        throw PlanningError("plan: first-layer herald counts do not add up to n_max");
    }
    if (plan.n_max > capacity) {
        throw PlanningError("plan: n_max=" + std::to_string(plan.n_max) + " exceeds the first-layer capacity " +
                            std::to_string(capacity));
    }
}

// ---------------------------------------------------------------- splitting

namespace {

// Coefficients of the Bargmann polynomial T(z) = sum t_n z^n / sqrt(n!).
std::vector<cplx> bargmann_poly(const FockVector &t) {
    std::vector<cplx> p(t.size());
    double inv_sqrt_fact = 1.0;
    for (std::size_t n = 0; n < t.size(); ++n) {
        if (n > 0) {
            inv_sqrt_fact /= std::sqrt(static_cast<double>(n));
        }
        p[n] = t[n] * inv_sqrt_fact;
    }
    return p;
}

std::vector<cplx> poly_roots(const std::vector<cplx> &p, std::size_t deg) {
    if (deg == 0) {
        return {};
    }
    // Rescale z = rho w so the end coefficients match; this keeps the companion
    // matrix balanced for high degrees.
    const double rho = std::pow(std::abs(p[0]) > 0.0 ? std::abs(p[0]) / std::abs(p[deg]) : 1.0, 1.0 / deg);
    const double scale = rho > 0.0 && std::isfinite(rho) ? rho : 1.0;
    std::vector<cplx> q(deg + 1);
    double pw = 1.0;
    for (std::size_t i = 0; i <= deg; ++i, pw *= scale) {
        q[i] = p[i] * pw;
    }
    const auto d = static_cast<Eigen::Index>(deg);
    Eigen::MatrixXcd comp = Eigen::MatrixXcd::Zero(d, d);
    for (Eigen::Index i = 1; i < d; ++i) {
        comp(i, i - 1) = 1.0;
    }
    for (Eigen::Index i = 0; i < d; ++i) {
        comp(i, d - 1) = -q[static_cast<std::size_t>(i)] / q[deg];
    }
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(comp, false);
    std::vector<cplx> roots(deg);
    for (std::size_t k = 0; k < deg; ++k) {
        roots[k] = es.eigenvalues()(static_cast<Eigen::Index>(k)) * scale;
    }
    // Newton refinement on the original polynomial.
    for (cplx &r : roots) {
        for (int it = 0; it < 8; ++it) {
            cplx f = p[deg], df = 0.0;
            for (std::size_t i = deg; i-- > 0;) {
                df = df * r + f;
                f = f * r + p[i];
            }
            if (std::abs(df) == 0.0) {
                break;
            }
            const cplx step = f / df;
            if (!std::isfinite(step.real()) || !std::isfinite(step.imag())) {
                break;
            }
            r -= step;
            if (std::abs(step) <= 1e-15 * std::max(1.0, std::abs(r))) {
                break;
            }
        }
    }
    return roots;
}

// Fock amplitudes of prod_k (scale * w - root_k), padded to `cutoff`.
std::vector<cplx> from_roots(const std::vector<cplx> &roots, double scale, std::size_t cutoff) {
    std::vector<cplx> poly{1.0};
    for (const cplx &r : roots) {
        std::vector<cplx> next(poly.size() + 1, 0.0);
        for (std::size_t i = 0; i < poly.size(); ++i) {
            next[i] -= r * poly[i];
            next[i + 1] += scale * poly[i];
        }
        poly = std::move(next);
    }
    std::vector<cplx> amps(cutoff + 1, 0.0);
    double sqrt_fact = 1.0;
    for (std::size_t i = 0; i < poly.size() && i <= cutoff; ++i) {
        if (i > 0) {
            sqrt_fact *= std::sqrt(static_cast<double>(i));
        }
        amps[i] = poly[i] * sqrt_fact;
    }
    double nrm = 0.0;
    for (const cplx &c : amps) {
        nrm += std::norm(c);
    }
    nrm = std::sqrt(nrm);
    for (cplx &c : amps) {
        c /= nrm;
    }
    return amps;
}

struct Candidate {
    std::vector<cplx> a, b;
    double theta = 0.0;
    double probability = -1.0;
};

double zero_herald_probability(const std::vector<cplx> &a, const std::vector<cplx> &b, double theta,
                               std::vector<cplx> &scratch) {
    scratch.resize(a.size() + b.size() - 1);
    fock::couple_zero_raw(a, b, theta, scratch);
    double p = 0.0;
    for (const cplx &c : scratch) {
        p += std::norm(c);
    }
    return p;
}

// Best angle for one division of the roots.
Candidate best_angle(const std::vector<cplx> &ra, const std::vector<cplx> &rb, std::size_t n_a, std::size_t n_b) {
    std::vector<cplx> scratch;
    const auto eval = [&](double th, Candidate &c) {
        c.a = from_roots(ra, 1.0 / std::cos(th), n_a);
        c.b = from_roots(rb, -1.0 / std::sin(th), n_b);
        c.theta = th;
        c.probability = zero_herald_probability(c.a, c.b, th, scratch);
    };
    constexpr double eps = 1e-6;
    constexpr int grid = 48;
    Candidate best, tmp;
    int best_k = 0;
    for (int k = 0; k <= grid; ++k) {
        const double th = eps + (std::numbers::pi / 2 - 2 * eps) * k / grid;
        eval(th, tmp);
        if (tmp.probability > best.probability) {
            best = tmp;
            best_k = k;
        }
    }
    // golden-section refinement around the best grid point
    const double step = (std::numbers::pi / 2 - 2 * eps) / grid;
    double lo = std::max(eps, best.theta - step), hi = std::min(std::numbers::pi / 2 - eps, best.theta + step);
    (void)best_k;
    const double g = (std::sqrt(5.0) - 1.0) / 2.0;
    double x1 = hi - g * (hi - lo), x2 = lo + g * (hi - lo);
    Candidate c1, c2;
    eval(x1, c1);
    eval(x2, c2);
    for (int it = 0; it < 40; ++it) {
        if (c1.probability > c2.probability) {
            hi = x2;
            x2 = x1;
            c2 = c1;
            x1 = hi - g * (hi - lo);
            eval(x1, c1);
        } else {
            lo = x1;
            x1 = x2;
            c1 = c2;
            x2 = lo + g * (hi - lo);
            eval(x2, c2);
        }
    }
    for (Candidate *c : {&c1, &c2}) {
        if (c->probability > best.probability) {
            best = *c;
        }
    }
    return best;
}

// Enumerates (or samples) subsets of the roots given to input a.
std::vector<std::vector<bool>> root_divisions(std::size_t k, std::size_t n_a, std::size_t n_b, std::size_t limit,
                                              std::uint64_t seed) {
    const std::size_t ka_lo = k > n_b ? k - n_b : 0;
    const std::size_t ka_hi = std::min(k, n_a);
    double total = 0.0;
    for (std::size_t ka = ka_lo; ka <= ka_hi; ++ka) {
        total += std::exp(std::lgamma(k + 1.0) - std::lgamma(ka + 1.0) - std::lgamma(k - ka + 1.0));
    }
    std::vector<std::vector<bool>> out;
    if (total <= static_cast<double>(limit) && k < 63) {
        for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << k); ++mask) {
            const auto pc = static_cast<std::size_t>(std::popcount(mask));
            if (pc < ka_lo || pc > ka_hi) {
                continue;
            }
            std::vector<bool> sel(k);
            for (std::size_t i = 0; i < k; ++i) {
                sel[i] = ((mask >> i) & 1U) != 0;
            }
            out.push_back(std::move(sel));
        }
        return out;
    }
    std::mt19937_64 rng(optimize::splitmix64(seed));
    std::vector<std::size_t> idx(k);
    for (std::size_t s = 0; s < limit; ++s) {
        // the balanced size ka = round(k * n_a / n) is always used
        const std::size_t ka = std::clamp<std::size_t>((k * n_a + (n_a + n_b) / 2) / (n_a + n_b), ka_lo, ka_hi);
        std::iota(idx.begin(), idx.end(), 0);
        std::shuffle(idx.begin(), idx.end(), rng);
        std::vector<bool> sel(k, false);
        for (std::size_t i = 0; i < ka; ++i) {
            sel[idx[i]] = true;
        }
        out.push_back(std::move(sel));
    }
    return out;
}

} // namespace

SplitResult split_target(const FockVector &target_in, std::size_t n_a, std::size_t n_b, const SplitOptions &opt) {
    if (target_in.empty() || target_in.cutoff() != n_a + n_b) {
        throw ContractError("split_target: target cutoff must equal n_a + n_b");
    }
    const FockVector target = fock::normalize(target_in).state;
    const std::vector<cplx> p = bargmann_poly(target);
    // Trim negligible top Fock amplitudes (not Bargmann coefficients, which
    // carry the 1/sqrt(n!) factor).
    double tmax = 0.0;
    for (const cplx &c : target.amplitudes()) {
        tmax = std::max(tmax, std::abs(c));
    }
    std::size_t deg = p.size() - 1;
    while (deg > 0 && std::abs(target[deg]) <= 1e-15 * tmax) {
        --deg;
    }
    const std::vector<cplx> roots = poly_roots(p, deg);

    SplitResult res;
    Candidate best;
    const auto divisions = root_divisions(roots.size(), n_a, n_b, opt.max_partitions, opt.seed);
    for (const std::vector<bool> &sel : divisions) {
        std::vector<cplx> ra, rb;
        for (std::size_t i = 0; i < roots.size(); ++i) {
            (sel[i] ? ra : rb).push_back(roots[i]);
        }
        Candidate c = best_angle(ra, rb, n_a, n_b);
        if (c.probability > best.probability) {
            best = std::move(c);
        }
    }
    res.partitions_scored = divisions.size();

    const auto fidelity_of = [&](const std::vector<cplx> &a, const std::vector<cplx> &b, double th) {
        std::vector<cplx> out(n_a + n_b + 1);
        fock::couple_zero_raw(a, b, th, out);
        return fock::fidelity(FockVector(std::move(out)), target);
    };
    double fid = fidelity_of(best.a, best.b, best.theta);

    // Root finding loses accuracy for clustered roots; polish numerically if needed.
    if (fid < 1.0 - 1e-10) {
        optimize::OptimizerConfig oc = opt.polish;
        oc.bounds.clear();
        oc.initial.clear();
        const std::size_t na1 = n_a + 1, nb1 = n_b + 1;
        for (std::size_t i = 0; i < 2 * (na1 + nb1); ++i) {
            oc.bounds.push_back({-1.0, 1.0, false});
        }
        oc.bounds.push_back({0.0, std::numbers::pi / 2, false});
        for (const cplx &c : best.a) {
            oc.initial.push_back(c.real());
            oc.initial.push_back(c.imag());
        }
        for (const cplx &c : best.b) {
            oc.initial.push_back(c.real());
            oc.initial.push_back(c.imag());
        }
        oc.initial.push_back(best.theta);
        oc.seed = opt.seed;
        oc.max_evals = std::max(oc.max_evals, oc.bounds.size() + 2);
        const auto unpack = [&](std::span<const double> x, std::vector<cplx> &a, std::vector<cplx> &b) {
            a.resize(na1);
            b.resize(nb1);
            for (std::size_t i = 0; i < na1; ++i) {
                a[i] = cplx(x[2 * i], x[2 * i + 1]);
            }
            for (std::size_t i = 0; i < nb1; ++i) {
                b[i] = cplx(x[2 * na1 + 2 * i], x[2 * na1 + 2 * i + 1]);
            }
        };
        const optimize::Objective f = [&](std::span<const double> x) {
            std::vector<cplx> a, b;
            unpack(x, a, b);
            std::vector<cplx> out(n_a + n_b + 1);
            fock::couple_zero_raw(a, b, x.back(), out);
            double nrm = 0.0;
            for (const cplx &c : out) {
                nrm += std::norm(c);
            }
            if (!(nrm > 1e-300)) {
                return 0.0;
            }
            return fock::fidelity(FockVector(std::move(out)), target);
        };
        const optimize::OptResult r = optimize::maximize(f, oc);
        res.trace = r.trace;
        if (r.best_value > fid) {
            std::vector<cplx> a, b;
            unpack(r.best_params, a, b);
            const FockVector na = fock::normalize(FockVector(a)).state;
            const FockVector nb = fock::normalize(FockVector(b)).state;
            best.a.assign(na.amplitudes().begin(), na.amplitudes().end());
            best.b.assign(nb.amplitudes().begin(), nb.amplitudes().end());
            best.theta = r.best_params.back();
            std::vector<cplx> scratch;
            best.probability = zero_herald_probability(best.a, best.b, best.theta, scratch);
            fid = r.best_value;
        }
    }

    res.sub_a = fock::normalize(FockVector(best.a)).state;
    res.sub_b = fock::normalize(FockVector(best.b)).state;
    res.theta = best.theta;
    res.fidelity = fid;
    res.probability = best.probability;
    if (fid < opt.floor) {
        throw BelowFloorError("split_target: best fidelity " + std::to_string(fid) + " is below the floor " +
                                  std::to_string(opt.floor),
                              fid);
    }
    return res;
}

// ---------------------------------------------------------------- leaves

std::size_t CircuitParams::count(std::size_t inputs) { return 4 * inputs + inputs * (inputs - 1) + 1; }

gaussian::Circuit CircuitParams::circuit() const {
    if (values.size() != count(inputs)) {
        throw ContractError("CircuitParams: expected " + std::to_string(count(inputs)) + " values for " +
                            std::to_string(inputs) + " inputs, got " + std::to_string(values.size()));
    }
    gaussian::Circuit c;
    c.modes = inputs;
    std::size_t k = 0;
    for (std::size_t m = 0; m < inputs; ++m, k += 4) {
        c.ops.push_back({"squeeze", {m}, {values[k], values[k + 1]}});
        c.ops.push_back({"displace", {m}, {values[k + 2], values[k + 3]}});
    }
    for (std::size_t i = 0; i < inputs; ++i) {
        for (std::size_t j = i + 1; j < inputs; ++j, k += 2) {
            c.ops.push_back({"beamsplitter", {i, j}, {values[k], values[k + 1]}});
        }
    }
    c.ops.push_back({"phase", {0}, {values[k]}});
    return c;
}

std::vector<optimize::Bound> leaf_bounds(std::size_t inputs, const LeafOptions &opt) {
    std::vector<optimize::Bound> b;
    for (std::size_t m = 0; m < inputs; ++m) {
        b.push_back({0.0, opt.r_max, false});
        b.push_back({0.0, kTwoPi, true});
        b.push_back({-opt.alpha_max, opt.alpha_max, false});
        b.push_back({-opt.alpha_max, opt.alpha_max, false});
    }
    for (std::size_t p = 0; p < inputs * (inputs - 1) / 2; ++p) {
        b.push_back({0.0, std::numbers::pi / 2, false});
        b.push_back({0.0, kTwoPi, true});
    }
    b.push_back({0.0, kTwoPi, true});
    return b;
}

namespace {

gaussian::DetectionPattern leaf_pattern(const std::vector<std::size_t> &herald) {
    gaussian::DetectionPattern dp;
    for (std::size_t i = 0; i < herald.size(); ++i) {
        dp.modes.push_back(i + 1);
        dp.counts.push_back(herald[i]);
    }
    return dp;
}

} // namespace

LeafEvaluation evaluate_leaf(const CircuitParams &p, const std::vector<std::size_t> &herald, const FockVector &target) {
    if (p.inputs != herald.size() + 1) {
        throw ContractError("evaluate_leaf: input count must be 1 + number of detectors");
    }
    const gaussian::BargmannForm bf = gaussian::bargmann_form(gaussian::run_circuit(p.circuit()));
    const gaussian::DetectionPattern dp = leaf_pattern(herald);
    LeafEvaluation ev;
    ev.probability = gaussian::herald_probability(bf, dp, 0);
    if (!(ev.probability > 1e-300)) {
        return ev;
    }
    std::vector<std::size_t> n(p.inputs);
    for (std::size_t i = 0; i < herald.size(); ++i) {
        n[i + 1] = herald[i];
    }
    cplx overlap = 0.0;
    double tnorm = 0.0;
    for (std::size_t k = 0; k < target.size(); ++k) {
        n[0] = k;
        overlap += std::conj(target[k]) * gaussian::fock_amplitude(bf, n);
        tnorm += std::norm(target[k]);
    }
    ev.fidelity = std::min(1.0, std::norm(overlap) / (ev.probability * tnorm));
    return ev;
}

CircuitParams circuit_from_bargmann(const Eigen::MatrixXcd &b, const Eigen::VectorXcd &gamma) {
    const auto l = b.rows();
    if (l < 1 || b.cols() != l || gamma.size() != l || static_cast<std::size_t>(l) > kMaxInputs) {
        throw ContractError("circuit_from_bargmann: B must be square with one gamma entry per mode");
    }
    // Takagi factorization B = W diag(sigma) W^T from the SVD.
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(b, Eigen::ComputeFullU);
    const Eigen::VectorXd sigma = svd.singularValues();
    if (sigma(0) >= 1.0) {
        throw ContractError("circuit_from_bargmann: B has operator norm >= 1");
    }
    Eigen::MatrixXcd w = svd.matrixU();
    const Eigen::MatrixXcd core = w.adjoint() * b * w.conjugate();
    for (Eigen::Index k = 0; k < l; ++k) {
        if (sigma(k) > 1e-14) {
            w.col(k) *= std::polar(1.0, std::arg(core(k, k)) / 2);
        }
    }
    if ((w * sigma.cast<cplx>().asDiagonal() * w.transpose() - b).cwiseAbs().maxCoeff() > 1e-9) {
        throw ContractError("circuit_from_bargmann: degenerate Takagi factorization");
    }

    // Null W into the triangular mesh: W = B(1,2) B(0,2) B(0,1) D.
    const auto bs = [&](Eigen::Index i, Eigen::Index j, double th, double ph) {
        Eigen::MatrixXcd m = Eigen::MatrixXcd::Identity(l, l);
        m(i, i) = m(j, j) = std::cos(th);
        m(i, j) = -std::polar(std::sin(th), -ph);
        m(j, i) = std::polar(std::sin(th), ph);
        return m;
    };
    struct Angle {
        Eigen::Index i, j;
        double theta = 0.0, phi = 0.0;
    };
    std::vector<Angle> mesh;
    for (Eigen::Index i = 0; i < l; ++i) {
        for (Eigen::Index j = i + 1; j < l; ++j) {
            mesh.push_back({i, j});
        }
    }
    // Peel off the splitters in reverse order; splitter (i, j) zeroes entry
    // (i, j), which later peels leave untouched, so the remainder ends diagonal.
    Eigen::MatrixXcd x = w;
    for (std::size_t k = mesh.size(); k-- > 0;) {
        Angle &a = mesh[k];
        const cplx top = x(a.i, a.j);
        const cplx bot = x(a.j, a.j);
        a.theta = std::atan2(std::abs(top), std::abs(bot));
        a.phi = std::abs(top) > 0.0 ? std::arg(bot) - std::arg(-top) : 0.0;
        x = bs(a.i, a.j, a.theta, a.phi).adjoint() * x;
    }
    Eigen::VectorXcd d(l);
    for (Eigen::Index k = 0; k < l; ++k) {
        d(k) = std::polar(1.0, std::arg(x(k, k)));
    }
    Eigen::MatrixXcd m = Eigen::MatrixXcd::Identity(l, l);
    for (const Angle &a : mesh) {
        m = bs(a.i, a.j, a.theta, a.phi) * m;
    }
    if ((m * d.asDiagonal().toDenseMatrix() - w).cwiseAbs().maxCoeff() > 1e-8) {
        throw ContractError("circuit_from_bargmann: interferometer decomposition failed");
    }

    CircuitParams p{static_cast<std::size_t>(l), std::vector<double>(CircuitParams::count(l), 0.0)};
    const Eigen::VectorXcd g_in = m.adjoint() * gamma;
    std::size_t k = 0;
    for (Eigen::Index q = 0; q < l; ++q, k += 4) {
        const cplx bin = d(q) * d(q) * sigma(q);
        p.values[k] = std::atanh(sigma(q));
        p.values[k + 1] = std::fmod(std::arg(-bin) + kTwoPi, kTwoPi);
        const cplx alpha = (g_in(q) + bin * std::conj(g_in(q))) / (1.0 - std::norm(bin));
        p.values[k + 2] = alpha.real();
        p.values[k + 3] = alpha.imag();
    }
    for (const Angle &a : mesh) {
        p.values[k++] = a.theta;
        p.values[k++] = std::fmod(a.phi + 2 * kTwoPi, kTwoPi);
    }
    return p;
}

namespace {

// Bargmann data of a leaf whose output factor exp(B00 z^2/2 + g0 z) is trivial:
// x packs B(0,i), B(i,j) (i <= j) and gamma_i of the heralded modes as re/im pairs.
struct PolyLeaf {
    std::vector<std::size_t> herald;
    std::size_t h = 0, budget = 0;

    std::size_t complex_count() const { return h + h * (h + 1) / 2 + h; }

    void unpack(std::span<const double> x, double s, Eigen::MatrixXcd &b, Eigen::VectorXcd &g) const {
        b = Eigen::MatrixXcd::Zero(h + 1, h + 1);
        g = Eigen::VectorXcd::Zero(h + 1);
        std::size_t k = 0;
        const auto next = [&] {
            const cplx c(x[2 * k], x[2 * k + 1]);
            ++k;
            return c;
        };
        for (std::size_t i = 1; i <= h; ++i) {
            b(0, i) = b(i, 0) = s * next();
        }
        for (std::size_t i = 1; i <= h; ++i) {
            for (std::size_t j = i; j <= h; ++j) {
                b(i, j) = b(j, i) = s * s * next();
            }
        }
        for (std::size_t i = 1; i <= h; ++i) {
            g(i) = s * next();
        }
    }

    // Output amplitudes psi_n ~ [z^n] Q(z) sqrt(n!), n = 0..budget.
    std::vector<cplx> amplitudes(std::span<const double> x) const {
        Eigen::MatrixXcd b;
        Eigen::VectorXcd g;
        unpack(x, 1.0, b, g);
        hafnian::SymmetricComplexMatrix hb(h);
        for (std::size_t i = 0; i < h; ++i) {
            for (std::size_t j = i; j < h; ++j) {
                hb.set(i, j, b(i + 1, j + 1));
            }
        }
        const hafnian::RepetitionVector reps{herald};
        const std::size_t kpts = budget + 1;
        std::vector<cplx> q(kpts, 0.0), u(h);
        for (std::size_t p = 0; p < kpts; ++p) {
            const cplx z = std::polar(1.0, kTwoPi * static_cast<double>(p) / static_cast<double>(kpts));
            for (std::size_t i = 0; i < h; ++i) {
                u[i] = g(i + 1) + b(0, i + 1) * z;
            }
            const cplx val = hafnian::loop_hafnian(hafnian::reduce_matrix(hb, reps, u));
            cplx zk = 1.0;
            for (std::size_t n = 0; n < kpts; ++n, zk *= std::conj(z)) {
                q[n] += val * zk;
            }
        }
        double sqrt_fact = 1.0;
        for (std::size_t n = 0; n < kpts; ++n) {
            if (n > 0) {
                sqrt_fact *= std::sqrt(static_cast<double>(n));
            }
            q[n] *= sqrt_fact / static_cast<double>(kpts);
        }
        return q;
    }
};

double overlap_fidelity(std::span<const cplx> psi, const FockVector &target) {
    cplx ov = 0.0;
    double np = 0.0;
    for (std::size_t n = 0; n < psi.size(); ++n) {
        ov += std::conj(target[n]) * psi[n];
        np += std::norm(psi[n]);
    }
    return np > 1e-300 ? std::norm(ov) / np : 0.0;
}

// Largest herald-mode scale keeping every squeezing within r_max.
double max_scale(const PolyLeaf &pl, std::span<const double> x, double r_max) {
    const double cap = std::tanh(r_max);
    Eigen::MatrixXcd b;
    Eigen::VectorXcd g;
    const auto norm_at = [&](double s) {
        pl.unpack(x, s, b, g);
        return Eigen::JacobiSVD<Eigen::MatrixXcd>(b).singularValues()(0);
    };
    double lo = 0.0, hi = 1.0;
    while (norm_at(hi) < cap && hi < 1e6) {
        lo = hi;
        hi *= 2.0;
    }
    for (int it = 0; it < 60; ++it) {
        const double mid = 0.5 * (lo + hi);
        (norm_at(mid) < cap ? lo : hi) = mid;
    }
    return lo;
}

// Best circuit realizing the polynomial solution x, choosing the scale for
// the highest herald probability within the parameter box.
std::optional<LeafResult> realize(const PolyLeaf &pl, std::span<const double> x, const FockVector &target,
                                  const LeafOptions &opt) {
    const double smax = max_scale(pl, x, opt.r_max);
    if (!(smax > 0.0)) {
        return std::nullopt;
    }
    std::optional<LeafResult> best;
    const auto try_scale = [&](double s) -> double {
        Eigen::MatrixXcd b;
        Eigen::VectorXcd g;
        pl.unpack(x, s, b, g);
        CircuitParams p;
        try {
            p = circuit_from_bargmann(b, g);
        } catch (const ContractError &) {
            return -1.0;
        }
        for (std::size_t q = 0; q < p.inputs; ++q) {
            for (std::size_t c : {2, 3}) {
                if (std::abs(p.values[4 * q + c]) > opt.alpha_max) {
                    return -1.0;
                }
            }
        }
        const LeafEvaluation ev = evaluate_leaf(p, pl.herald, target);
        if (!best || ev.probability > best->probability) {
            best = LeafResult{p, ev.fidelity, ev.probability, {}};
        }
        return ev.probability;
    };
    constexpr int grid = 24;
    double best_s = 0.0, best_p = -1.0;
    for (int k = 1; k <= grid; ++k) {
        const double s = smax * k / grid;
        const double pr = try_scale(s);
        if (pr > best_p) {
            best_p = pr;
            best_s = s;
        }
    }
    if (best_p > 0.0) {
        double lo = std::max(0.0, best_s - smax / grid), hi = std::min(smax, best_s + smax / grid);
        for (int it = 0; it < 30; ++it) {
            const double m1 = lo + (hi - lo) / 3, m2 = hi - (hi - lo) / 3;
            (try_scale(m1) < try_scale(m2) ? lo : hi) = (try_scale(m1) < try_scale(m2) ? m1 : m2);
        }
    }
    return best;
}

} // namespace

LeafResult solve_first_layer(const FockVector &sub_target, const std::vector<std::size_t> &herald,
                             const LeafOptions &opt) {
    const std::size_t budget = std::accumulate(herald.begin(), herald.end(), std::size_t{0});
    if (sub_target.empty() || sub_target.cutoff() != budget) {
        throw ContractError("solve_first_layer: target cutoff must equal the herald total " + std::to_string(budget));
    }
    if (herald.size() + 1 > kMaxInputs) {
        throw ContractError("solve_first_layer: at most " + std::to_string(kMaxInputs) + " inputs");
    }
    const FockVector target = fock::normalize(sub_target).state;
    const std::size_t inputs = herald.size() + 1;
    const optimize::Objective leaf_objective = [&](std::span<const double> x) {
        CircuitParams p{inputs, std::vector<double>(x.begin(), x.end())};
        const LeafEvaluation ev = evaluate_leaf(p, herald, target);
        return ev.fidelity * std::min(1.0, ev.probability / opt.min_probability);
    };
    const auto finish = [&](LeafResult res) {
        const LeafEvaluation ev = evaluate_leaf(res.params, herald, target);
        res.fidelity = ev.fidelity;
        res.probability = ev.probability;
        if (res.fidelity < opt.floor) {
            throw BelowFloorError("solve_first_layer: best fidelity " + std::to_string(res.fidelity) +
                                      " is below the floor " + std::to_string(opt.floor),
                                  res.fidelity);
        }
        return res;
    };

    std::optional<LeafResult> seeded;
    if (opt.algebraic_seed && budget > 0) {
        // Stage 1: match the heralded polynomial to the target in Bargmann space.
        const PolyLeaf pl{herald, herald.size(), budget};
        optimize::OptimizerConfig oc = opt.opt;
        oc.bounds.assign(2 * pl.complex_count(), {-1.0, 1.0, false});
        oc.initial.clear();
        oc.method = optimize::Method::bfgs;
        const optimize::OptResult r1 = optimize::maximize(
            [&](std::span<const double> x) { return overlap_fidelity(pl.amplitudes(x), target); }, oc);
        // Stage 2: realize it as a circuit and polish in the circuit parameters.
        seeded = realize(pl, r1.best_params, target, opt);
        if (seeded) {
            seeded->trace = r1.trace;
            if (seeded->fidelity < 1.0 - 1e-12 || seeded->probability < opt.min_probability) {
                optimize::OptimizerConfig pc = opt.opt;
                pc.bounds = leaf_bounds(inputs, opt);
                pc.initial = seeded->params.values;
                for (std::size_t i = 0; i < pc.initial.size(); ++i) {
                    pc.initial[i] = std::clamp(pc.initial[i], pc.bounds[i].lo, pc.bounds[i].hi);
                }
                pc.restarts = 1;
                const optimize::OptResult r2 = optimize::maximize(leaf_objective, pc);
                if (r2.best_value > leaf_objective(seeded->params.values)) {
                    seeded->params = {inputs, r2.best_params};
                }
                seeded->trace.restarts.insert(seeded->trace.restarts.end(), r2.trace.restarts.begin(),
                                              r2.trace.restarts.end());
            }
            const LeafEvaluation ev = evaluate_leaf(seeded->params, herald, target);
            seeded->fidelity = ev.fidelity;
            seeded->probability = ev.probability;
            if (ev.fidelity >= 1.0 - 1e-6 && ev.probability >= opt.min_probability) {
                return finish(*seeded);
            }
        }
    }

    // Direct multistart over the circuit parameters.
    optimize::OptimizerConfig oc = opt.opt;
    oc.bounds = leaf_bounds(inputs, opt);
    oc.initial.clear();
    const optimize::OptResult r = optimize::maximize(leaf_objective, oc);
    LeafResult res;
    res.params = {inputs, r.best_params};
    res.trace = r.trace;
    if (seeded && leaf_objective(seeded->params.values) > r.best_value) {
        res = *seeded;
    }
    return finish(res);
}

gaussian::HeraldedState leaf_state(const CircuitParams &p, const std::vector<std::size_t> &herald,
                                   std::size_t cutoff) {
    return gaussian::heralded_state(gaussian::run_circuit(p.circuit()), leaf_pattern(herald), 0, cutoff);
}

// ---------------------------------------------------------------- whole tree

std::string to_string(NodeStatus s) {
    switch (s) {
    case NodeStatus::ok: return "ok";
    case NodeStatus::below_floor: return "below-floor";
    case NodeStatus::failed: return "failed";
    case NodeStatus::skipped: return "skipped";
    }
    return "?";
}

NodeStatus node_status_from_string(const std::string &s) {
    for (NodeStatus v : {NodeStatus::ok, NodeStatus::below_floor, NodeStatus::failed, NodeStatus::skipped}) {
        if (to_string(v) == s) {
            return v;
        }
    }
    throw ParseError("unknown node status '" + s + "'");
}

bool SynthesisResult::complete() const {
    if (nodes.size() != plan.nodes.size()) {
        return false;
    }
    return std::all_of(nodes.begin(), nodes.end(), [](const NodeSolution &n) {
        return n.status == NodeStatus::ok || n.status == NodeStatus::below_floor;
    });
}

SynthesisResult synthesize(const FockVector &target_in, const LayerPlan &plan, const SynthesisConfig &cfg) {
    const auto t0 = std::chrono::steady_clock::now();
    check_plan(plan);
    if (target_in.empty() || target_in.cutoff() > plan.n_max) {
        throw ContractError("synthesize: target cutoff exceeds the plan budget " + std::to_string(plan.n_max));
    }
    SynthesisResult res;
    res.plan = plan;
    res.guard = cfg.leaf.guard;
    res.nodes.resize(plan.nodes.size());
    for (std::size_t i = 0; i < plan.nodes.size(); ++i) {
        res.nodes[i].id = i;
        res.nodes[i].seed = node_seed(cfg.seed, i);
    }
    res.nodes[0].target = fock::normalize(target_in.with_cutoff(plan.n_max)).state;

    // Interior nodes, root first (ids are breadth first).
    for (const PlanNode &pn : plan.nodes) {
        NodeSolution &ns = res.nodes[pn.id];
        if (pn.is_leaf() || ns.status == NodeStatus::failed || ns.target.empty()) {
            continue;
        }
        const auto ts = std::chrono::steady_clock::now();
        const PlanNode &a = plan.nodes[*pn.left];
        const PlanNode &b = plan.nodes[*pn.right];
        try {
            SplitOptions so = cfg.split;
            so.floor = 0.0;
            so.seed = ns.seed;
            so.polish.seed = ns.seed;
            so.polish.threads = cfg.threads;
            const SplitResult sr = split_target(ns.target, a.budget, b.budget, so);
            ns.theta = sr.theta;
            ns.local_fidelity = sr.fidelity;
            ns.herald_probability = sr.probability;
            ns.trace = sr.trace;
            ns.status = sr.fidelity >= cfg.interior_floor ? NodeStatus::ok : NodeStatus::below_floor;
            if (ns.status == NodeStatus::below_floor) {
                ns.message = "local fidelity below floor " + std::to_string(cfg.interior_floor);
            }
            res.nodes[a.id].target = sr.sub_a;
            res.nodes[b.id].target = sr.sub_b;
        } catch (const Error &e) {
            ns.status = NodeStatus::failed;
            ns.message = e.what();
        }
        ns.wall_seconds = seconds_since(ts);
    }

    // Leaves are independent: solve them concurrently.
    const std::vector<std::size_t> leaves = plan.leaf_ids();
    const std::size_t threads = resolve_threads(cfg.threads);
    const std::size_t workers = std::min(threads, leaves.size());
    const std::size_t inner = std::max<std::size_t>(1, threads / std::max<std::size_t>(workers, 1));
    std::atomic<std::size_t> next{0};
    const auto work = [&] {
        for (std::size_t k = next.fetch_add(1); k < leaves.size(); k = next.fetch_add(1)) {
            const PlanNode &pn = plan.nodes[leaves[k]];
            NodeSolution &ns = res.nodes[pn.id];
            if (ns.target.empty()) {
                continue; // parent failed
            }
            const auto ts = std::chrono::steady_clock::now();
            try {
                LeafOptions lo = cfg.leaf;
                lo.floor = 0.0;
                lo.opt.seed = ns.seed;
                lo.opt.threads = inner;
                const LeafResult lr = solve_first_layer(ns.target, pn.herald, lo);
                ns.params = lr.params;
                ns.local_fidelity = lr.fidelity;
                ns.herald_probability = lr.probability;
                ns.trace = lr.trace;
                ns.status = lr.fidelity >= cfg.leaf_floor ? NodeStatus::ok : NodeStatus::below_floor;
                if (ns.status == NodeStatus::below_floor) {
                    ns.message = "local fidelity below floor " + std::to_string(cfg.leaf_floor);
                }
            } catch (const Error &e) {
                ns.status = NodeStatus::failed;
                ns.message = e.what();
            }
            ns.wall_seconds = seconds_since(ts);
        }
    };
    if (workers <= 1) {
        work();
    } else {
        std::vector<std::jthread> pool;
        for (std::size_t t = 0; t < workers; ++t) {
            pool.emplace_back(work);
        }
    }

    for (const NodeSolution &ns : res.nodes) {
        if (ns.status != NodeStatus::ok) {
            res.failed_node = ns.id;
            break;
        }
    }
    if (res.complete()) {
        const Verification v = forward_verify(res, res.nodes[0].target);
        res.end_to_end_fidelity = v.fidelity;
        res.p_suc_first_layer = v.p_suc_first_layer;
        res.p_suc_total = v.p_suc_total;
        res.max_leaf_tail = v.max_leaf_tail;
        if (cfg.post_correct) {
            optimize::OptimizerConfig oc;
            oc.seed = cfg.seed;
            oc.restarts = 4;
            oc.max_evals = 2000;
            oc.threads = cfg.threads;
            res.post_correction = post_correct(v.output, res.nodes[0].target, oc);
        }
    }
    res.wall_seconds = seconds_since(t0);
    return res;
}

Verification forward_verify(const SynthesisResult &result, const FockVector &target, bool strict) {
    if (!result.complete()) {
        throw ContractError("forward_verify: result is incomplete");
    }
    const LayerPlan &plan = result.plan;
    check_plan(plan);
    Verification v;
    const auto record = [&](std::size_t id, const char *what, double recomputed, double stored) {
        const double d = std::abs(recomputed - stored);
        v.max_local_mismatch = std::max(v.max_local_mismatch, d);
        if (strict && !(d <= kConsistencyTol)) {
            std::ostringstream os;
            os.precision(12);
            os << "forward_verify: node " << id << " " << what << " recomputes to " << recomputed << " but "
               << stored << " was stored";
            throw ConsistencyError(os.str());
        }
    };

    // Local checks against the stored backward solution.
    for (const PlanNode &pn : plan.nodes) {
        const NodeSolution &ns = result.nodes[pn.id];
        if (pn.is_leaf()) {
            const LeafEvaluation ev = evaluate_leaf(ns.params, pn.herald, ns.target);
            record(pn.id, "leaf fidelity", ev.fidelity, ns.local_fidelity);
            record(pn.id, "herald probability", ev.probability, ns.herald_probability);
        } else {
            const fock::Heralded h =
                fock::couple_and_herald_zero(result.nodes[*pn.left].target, result.nodes[*pn.right].target, ns.theta);
            record(pn.id, "split fidelity", fock::fidelity(h.state, ns.target), ns.local_fidelity);
            record(pn.id, "vacuum-herald probability", h.probability, ns.herald_probability);
        }
    }

    // Forward propagation of the actual leaf outputs.
    std::vector<FockVector> state(plan.nodes.size());
    v.p_suc_first_layer = 1.0;
    v.p_suc_total = 1.0;
    for (std::size_t i = plan.nodes.size(); i-- > 0;) {
        const PlanNode &pn = plan.nodes[i];
        const NodeSolution &ns = result.nodes[i];
        if (pn.is_leaf()) {
            const gaussian::HeraldedState hs = leaf_state(ns.params, pn.herald, pn.budget + result.guard);
            state[i] = hs.state;
            v.p_suc_first_layer *= hs.probability;
            v.p_suc_total *= hs.probability;
            v.max_leaf_tail = std::max(v.max_leaf_tail, hs.tail_mass);
        } else {
            const fock::Heralded h = fock::couple_and_herald_zero(state[*pn.left], state[*pn.right], ns.theta);
            state[i] = h.state;
            v.p_suc_total *= h.probability;
        }
    }
    v.output = state[0];
    v.fidelity = fock::fidelity(v.output, target);
    return v;
}

namespace {

// exp(-i h) for a Hermitian generator h.
Eigen::MatrixXcd expm_i(const Eigen::MatrixXcd &h) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(h);
    const Eigen::VectorXcd ph = (-cplx(0, 1) * es.eigenvalues().cast<cplx>()).array().exp();
    return es.eigenvectors() * ph.asDiagonal() * es.eigenvectors().adjoint();
}

} // namespace

PostCorrection post_correct(const FockVector &output, const FockVector &target,
                            const optimize::OptimizerConfig &opt) {
    const auto dim = static_cast<Eigen::Index>(std::max(output.size(), target.size()) + 48);
    Eigen::MatrixXcd a = Eigen::MatrixXcd::Zero(dim, dim);
    for (Eigen::Index n = 1; n < dim; ++n) {
        a(n - 1, n) = std::sqrt(static_cast<double>(n));
    }
    const Eigen::MatrixXcd ad = a.adjoint();
    const Eigen::MatrixXcd a2 = a * a, ad2 = ad * ad;
    Eigen::VectorXcd psi = Eigen::VectorXcd::Zero(dim), tgt = Eigen::VectorXcd::Zero(dim);
    for (std::size_t n = 0; n < output.size(); ++n) {
        psi(static_cast<Eigen::Index>(n)) = output[n];
    }
    for (std::size_t n = 0; n < target.size(); ++n) {
        tgt(static_cast<Eigen::Index>(n)) = target[n];
    }
    psi.normalize();
    tgt.normalize();
    const cplx i1(0, 1);
    const auto apply = [&](std::span<const double> x) {
        const cplx z = std::polar(x[0], x[1]);
        const cplx al(x[3], x[4]);
        // S = exp((conj(z) a^2 - z a^dag^2)/2) = exp(-i h), h = i (conj(z) a^2 - z a^dag^2)/2
        Eigen::VectorXcd v = expm_i(i1 * 0.5 * (std::conj(z) * a2 - z * ad2)) * psi;
        for (Eigen::Index n = 0; n < dim; ++n) {
            v(n) *= std::polar(1.0, x[2] * static_cast<double>(n));
        }
        return Eigen::VectorXcd(expm_i(i1 * (al * ad - std::conj(al) * a)) * v);
    };
    optimize::OptimizerConfig oc = opt;
    oc.bounds = {{0.0, 1.0, false}, {0.0, kTwoPi, true}, {0.0, kTwoPi, true}, {-2.0, 2.0, false}, {-2.0, 2.0, false}};
    oc.initial = {0.0, 0.0, 0.0, 0.0, 0.0};
    const optimize::OptResult r = optimize::maximize(
        [&](std::span<const double> x) { return std::norm(tgt.dot(apply(x))); }, oc);
    const auto &x = r.best_params;
    return {r.best_value, x[0], x[1], x[2], cplx(x[3], x[4])};
}

} // namespace oqss::backcast

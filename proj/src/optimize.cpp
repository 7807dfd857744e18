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

#include "oqss/optimize.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <numeric>
#include <random>
#include <sstream>
#include <thread>

#include "oqss/error.hpp"

namespace oqss::optimize {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30U)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27U)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31U);
}

std::string to_string(Method m) {
    switch (m) {
    case Method::nelder_mead: return "nelder-mead";
    case Method::bfgs: return "bfgs";
    case Method::hybrid: return "hybrid";
    }
    return "?";
}

Method method_from_string(const std::string &s) {
    if (s == "nelder-mead") {
        return Method::nelder_mead;
    }
    if (s == "bfgs") {
        return Method::bfgs;
    }
    if (s == "hybrid") {
        return Method::hybrid;
    }
    throw ContractError("unknown optimizer method '" + s + "' (expected nelder-mead, bfgs or hybrid)");
}

namespace {

using Vec = std::vector<double>;

// Minimizes -f inside the box, counting evaluations and tracking the best point.
class Problem {
  public:
    Problem(const Objective &f, const std::vector<Bound> &b, std::size_t budget) : f_(f), b_(b), budget_(budget) {}

    std::size_t dim() const { return b_.size(); }
    bool exhausted() const { return evals_ >= budget_; }
    std::size_t evals() const { return evals_; }
    double best() const { return best_; }
    const Vec &best_x() const { return best_x_; }
    double range(std::size_t i) const { return b_[i].hi - b_[i].lo; }
    const Bound &bound(std::size_t i) const { return b_[i]; }

    void project(Vec &x) const {
        for (std::size_t i = 0; i < x.size(); ++i) {
            const Bound &bd = b_[i];
            if (bd.periodic) {
                const double r = bd.hi - bd.lo;
                double t = std::fmod(x[i] - bd.lo, r);
                if (t < 0.0) {
                    t += r;
                }
                x[i] = bd.lo + t;
            } else {
                x[i] = std::clamp(x[i], bd.lo, bd.hi);
            }
        }
    }

    /// -f at the projected point (x is projected in place).
    double operator()(Vec &x) {
        project(x);
        const double v = f_(x);
        ++evals_;
        if (!std::isfinite(v)) {
            std::ostringstream os;
            os.precision(17);
            os << "objective returned " << v << " at [";
            for (std::size_t i = 0; i < x.size(); ++i) {
                os << (i ? ", " : "") << x[i];
            }
            os << "]";
            throw SolverError(os.str());
        }
        if (v > best_) {
            best_ = v;
            best_x_ = x;
        }
        return -v;
    }

  private:
    const Objective &f_;
    const std::vector<Bound> &b_;
    std::size_t budget_;
    std::size_t evals_ = 0;
    double best_ = -std::numeric_limits<double>::infinity();
    Vec best_x_;
};

// One simplex descent from x0 with the given relative initial step; returns
// true when the simplex collapsed in value before the budget ran out.
bool nelder_mead_once(Problem &p, const Vec &x0, double step, double tol) {
    const std::size_t n = p.dim();
    const double nd = static_cast<double>(std::max<std::size_t>(n, 1));
    // dimension-adapted coefficients (Gao & Han)
    const double alpha = 1.0, beta = 1.0 + 2.0 / nd, gamma = 0.75 - 0.5 / nd, delta = 1.0 - 1.0 / nd;

    std::vector<Vec> xs(n + 1, x0);
    Vec fs(n + 1);
    for (std::size_t i = 0; i < n; ++i) {
        Vec &x = xs[i + 1];
        x[i] += step * p.range(i);
    }
    for (std::size_t i = 0; i <= n; ++i) {
        fs[i] = p(xs[i]);
        if (p.exhausted()) {
            return false;
        }
    }
    std::vector<std::size_t> order(n + 1);
    Vec centroid(n), xr(n), xe(n), xc(n);
    while (!p.exhausted()) {
        std::iota(order.begin(), order.end(), 0);
        std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return fs[a] < fs[b]; });
        const std::size_t lo = order.front(), hi = order.back(), second = order[n > 0 ? n - 1 : 0];
        if (fs[hi] - fs[lo] <= tol * (1.0 + std::abs(fs[lo]))) {
            return true;
        }
        std::fill(centroid.begin(), centroid.end(), 0.0);
        for (std::size_t k = 0; k <= n; ++k) {
            if (k != hi) {
                for (std::size_t i = 0; i < n; ++i) {
                    centroid[i] += xs[k][i] / nd;
                }
            }
        }
        for (std::size_t i = 0; i < n; ++i) {
            xr[i] = centroid[i] + alpha * (centroid[i] - xs[hi][i]);
        }
        const double fr = p(xr);
        if (fr < fs[lo]) {
            for (std::size_t i = 0; i < n; ++i) {
                xe[i] = centroid[i] + beta * (xr[i] - centroid[i]);
            }
            const double fe = p(xe);
            if (fe < fr) {
                xs[hi] = xe;
                fs[hi] = fe;
            } else {
                xs[hi] = xr;
                fs[hi] = fr;
            }
            continue;
        }
        if (fr < fs[second]) {
            xs[hi] = xr;
            fs[hi] = fr;
            continue;
        }
        const bool outside = fr < fs[hi];
        for (std::size_t i = 0; i < n; ++i) {
            xc[i] = outside ? centroid[i] + gamma * (xr[i] - centroid[i])
                            : centroid[i] - gamma * (centroid[i] - xs[hi][i]);
        }
        const double fc = p(xc);
        if (fc < (outside ? fr : fs[hi])) {
            xs[hi] = xc;
            fs[hi] = fc;
            continue;
        }
        // shrink toward the best vertex
        for (std::size_t k = 0; k <= n && !p.exhausted(); ++k) {
            if (k == lo) {
                continue;
            }
            for (std::size_t i = 0; i < n; ++i) {
                xs[k][i] = xs[lo][i] + delta * (xs[k][i] - xs[lo][i]);
            }
            fs[k] = p(xs[k]);
        }
    }
    return false;
}

bool nelder_mead(Problem &p, const Vec &x0, double tol) {
    Vec start = x0;
    double step = 0.1;
    double prev = -std::numeric_limits<double>::infinity();
    // Re-seed the simplex at the best point until a fresh run stops improving.
    while (!p.exhausted()) {
        const bool collapsed = nelder_mead_once(p, start, step, tol);
        if (!collapsed) {
            return false;
        }
        if (p.best() - prev <= tol * (1.0 + std::abs(p.best()))) {
            return true;
        }
        prev = p.best();
        start = p.best_x();
        step = std::max(step * 0.5, 1e-4);
    }
    return false;
}

bool bfgs(Problem &p, const Vec &x0, double tol) {
    const std::size_t n = p.dim();
    Vec x = x0;
    double fx = p(x);
    const auto gradient = [&](const Vec &at, Vec &g) {
        Vec xp = at, xm = at;
        for (std::size_t i = 0; i < n; ++i) {
            const double h = 1e-6 * std::max(p.range(i), 1e-3);
            xp[i] = at[i] + h;
            xm[i] = at[i] - h;
            const double dp = xp[i], dm = xm[i];
            Vec a = xp, b = xm;
            const double fa = p(a);
            const double fb = p(b);
            // projection may have clamped the probe; divide by the step actually taken
            const double span = (a[i] - b[i]) != 0.0 ? (a[i] - b[i]) : (dp - dm);
            g[i] = (fa - fb) / span;
            xp[i] = at[i];
            xm[i] = at[i];
        }
    };
    Vec g(n), gn(n), d(n), s(n), y(n), xn(n);
    std::vector<double> h(n * n, 0.0);
    const auto reset = [&] {
        std::fill(h.begin(), h.end(), 0.0);
        for (std::size_t i = 0; i < n; ++i) {
            h[i * n + i] = 1e-2 * p.range(i) * p.range(i);
        }
    };
    reset();
    gradient(x, g);
    int quiet = 0;
    int resets = 0;
    while (!p.exhausted()) {
        for (std::size_t i = 0; i < n; ++i) {
            d[i] = 0.0;
            for (std::size_t j = 0; j < n; ++j) {
                d[i] -= h[i * n + j] * g[j];
            }
        }
        // coordinates pinned at a bound and pushing outward stay fixed
        for (std::size_t i = 0; i < n; ++i) {
            const Bound &bd = p.bound(i);
            if (!bd.periodic && ((x[i] <= bd.lo && d[i] < 0.0) || (x[i] >= bd.hi && d[i] > 0.0))) {
                d[i] = 0.0;
            }
        }
        double slope = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            slope += d[i] * g[i];
        }
        if (!(slope < 0.0)) {
            if (std::all_of(g.begin(), g.end(), [](double v) { return v == 0.0; }) || ++resets > 2) {
                return true;
            }
            reset();
            continue;
        }
        resets = 0;
        double t = 1.0;
        double fn = fx;
        bool accepted = false;
        for (int k = 0; k < 40 && !p.exhausted(); ++k, t *= 0.5) {
            for (std::size_t i = 0; i < n; ++i) {
                xn[i] = x[i] + t * d[i];
            }
            Vec probe = xn;
            fn = p(probe);
            if (fn <= fx + 1e-4 * t * slope) {
                // unwrapped step so the curvature pair stays consistent across periodic seams
                for (std::size_t i = 0; i < n; ++i) {
                    s[i] = p.bound(i).periodic ? t * d[i] : probe[i] - x[i];
                }
                xn = probe;
                accepted = true;
                break;
            }
        }
        if (!accepted) {
            return !p.exhausted();
        }
        gradient(xn, gn);
        double sy = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            y[i] = gn[i] - g[i];
            sy += s[i] * y[i];
        }
        if (sy > 1e-300) {
            // H <- (I - rho s y^T) H (I - rho y s^T) + rho s s^T
            const double rho = 1.0 / sy;
            Vec hy(n, 0.0);
            for (std::size_t i = 0; i < n; ++i) {
                for (std::size_t j = 0; j < n; ++j) {
                    hy[i] += h[i * n + j] * y[j];
                }
            }
            const double yhy = std::inner_product(y.begin(), y.end(), hy.begin(), 0.0);
            for (std::size_t i = 0; i < n; ++i) {
                for (std::size_t j = 0; j < n; ++j) {
                    h[i * n + j] += -rho * (hy[i] * s[j] + s[i] * hy[j]) + (rho * rho * yhy + rho) * s[i] * s[j];
                }
            }
        }
        const double change = fx - fn;
        x = xn;
        fx = fn;
        g = gn;
        quiet = change <= tol * (1.0 + std::abs(fx)) ? quiet + 1 : 0;
        if (quiet >= 2) {
            return true;
        }
    }
    return false;
}

struct Outcome {
    Vec x;
    double value = 0.0;
    RestartTrace trace;
    std::exception_ptr error;
};

Outcome run_restart(const Objective &f, const OptimizerConfig &c, std::size_t index) {
    const std::size_t n = c.bounds.size();
    Vec x0(n);
    if (index == 0 && !c.initial.empty()) {
        x0 = c.initial;
    } else if (index == 0) {
        for (std::size_t i = 0; i < n; ++i) {
            x0[i] = 0.5 * (c.bounds[i].lo + c.bounds[i].hi);
        }
    } else {
        std::mt19937_64 rng(splitmix64(c.seed + index));
        std::uniform_real_distribution<double> uni(0.0, 1.0);
        for (std::size_t i = 0; i < n; ++i) {
            x0[i] = c.bounds[i].lo + uni(rng) * (c.bounds[i].hi - c.bounds[i].lo);
        }
    }
    Problem p(f, c.bounds, c.max_evals);
    bool converged = false;
    switch (c.method) {
    case Method::nelder_mead: converged = nelder_mead(p, x0, c.tolerance); break;
    case Method::bfgs: converged = bfgs(p, x0, c.tolerance); break;
    case Method::hybrid: {
        Problem first(f, c.bounds, c.max_evals / 2);
        nelder_mead(first, x0, c.tolerance);
        Problem second(f, c.bounds, c.max_evals - first.evals());
        converged = bfgs(second, first.best_x(), c.tolerance);
        Outcome o;
        const bool second_better = second.best() > first.best();
        o.x = second_better ? second.best_x() : first.best_x();
        o.value = std::max(first.best(), second.best());
        o.trace = {o.value, first.evals() + second.evals(), converged};
        return o;
    }
    }
    Outcome o;
    o.x = p.best_x();
    o.value = p.best();
    o.trace = {o.value, p.evals(), converged};
    return o;
}

} // namespace

OptResult maximize(const Objective &f, const OptimizerConfig &c) {
    if (c.restarts < 1) {
        throw ContractError("maximize: restarts must be >= 1");
    }
    if (!(c.tolerance > 0.0)) {
        throw ContractError("maximize: tolerance must be positive");
    }
    if (c.max_evals < c.bounds.size() + 2) {
        throw ContractError("maximize: max_evals too small for the dimension");
    }
    if (!c.initial.empty() && c.initial.size() != c.bounds.size()) {
        throw ContractError("maximize: initial point and bounds differ in length");
    }
    for (const Bound &b : c.bounds) {
        if (!(b.hi > b.lo) || !std::isfinite(b.lo) || !std::isfinite(b.hi)) {
            throw ContractError("maximize: every bound needs finite lo < hi");
        }
    }

    std::vector<Outcome> out(c.restarts);
    std::atomic<std::size_t> next{0};
    std::atomic<std::size_t> stop{c.restarts};
    const auto lower_stop = [&stop](std::size_t idx) {
        std::size_t cur = stop.load();
        while (idx < cur && !stop.compare_exchange_weak(cur, idx)) {
        }
    };
    const auto worker = [&] {
        for (;;) {
            const std::size_t idx = next.fetch_add(1);
            if (idx >= c.restarts || idx > stop.load()) {
                return;
            }
            try {
                out[idx] = run_restart(f, c, idx);
                if (out[idx].value >= c.target) {
                    lower_stop(idx);
                }
            } catch (...) {
                out[idx].error = std::current_exception();
                lower_stop(idx);
            }
        }
    };
    std::size_t threads = c.threads == 0 ? std::max(1U, std::thread::hardware_concurrency()) : c.threads;
    threads = std::min(threads, c.restarts);
    if (threads <= 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        pool.reserve(threads);
        for (std::size_t t = 0; t < threads; ++t) {
            pool.emplace_back(worker);
        }
    }

    const std::size_t last = std::min(stop.load(), c.restarts - 1);
    OptResult r;
    for (std::size_t i = 0; i <= last; ++i) {
        if (out[i].error) {
            std::rethrow_exception(out[i].error);
        }
        r.trace.restarts.push_back(out[i].trace);
        if (out[i].value > r.best_value) {
            r.best_value = out[i].value;
            r.best_params = out[i].x;
        }
    }
    return r;
}

} // namespace oqss::optimize

// Acceptance suite: one PASS/FAIL line per criterion.
//
//   acceptance                  run every criterion
//   acceptance 1 4 7            run a subset
//   acceptance --expect-fail 7  run all; a failure of 7 is still printed as FAIL
//                               but does not change the exit status
//
// Exit status is 0 when every selected criterion passes or is expected to fail.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <numeric>
#include <optional>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <unistd.h>
#include <vector>

#include "rtsec/cli.hpp"
#include "rtsec/experiment.hpp"
#include "rtsec/gp.hpp"
#include "rtsec/optimizer.hpp"
#include "rtsec/oracle.hpp"
#include "rtsec/rta.hpp"
#include "rtsec/simulator.hpp"
#include "rtsec/workload.hpp"
#include "support/oracles.hpp"

using namespace rtsec;

namespace {

struct Outcome {
    bool pass = false;
    std::string detail;
};

std::string fmt(const char* f, double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, f, v);
    return buf;
}

double median(std::vector<double> v) {
    if (v.empty()) return 0.0;
    std::sort(v.begin(), v.end());
    const std::size_t h = v.size() / 2;
    return v.size() % 2 ? v[h] : 0.5 * (v[h - 1] + v[h]);
}

unsigned workers() { return experiment::thread_count(); }

// ---------------------------------------------------------------------------
// 1. Response-time fixed points against the simulator.

Outcome rta_exactness() {
    const int sets = 1000;
    std::vector<double> worst(sets, 0.0);
    std::vector<int> tasks(sets, 0);
    experiment::parallel_for(sets, workers(), [&](std::size_t k) {
        workload::GenSpec spec;
        spec.rt_util = workload::utilization_group(static_cast<int>(k % 9));
        spec.seed = workload::derive_seed(101, k);
        const auto g = workload::generate(spec);
        const auto res = rta::analyze(g.ts.rt_tasks);
        sim::SimConfig cfg;
        cfg.record_events = false;
        Millis longest = 0;
        for (const auto& t : g.ts.rt_tasks) longest = std::max(longest, t.period);
        cfg.horizon = longest + 1.0;
        const auto tr = sim::simulate(TaskSet{g.ts.rt_tasks, {}}, cfg);
        for (std::size_t i = 0; i < res.response_times.size(); ++i)
            worst[k] = std::max(worst[k], std::abs(res.response_times[i] - tr.worst_rt_response[i]));
        tasks[k] = static_cast<int>(res.response_times.size());
    });
    const double err = *std::max_element(worst.begin(), worst.end());
    return {err <= 1e-9, std::to_string(sets) + " sets, " + std::to_string(std::accumulate(tasks.begin(), tasks.end(), 0)) +
                             " tasks, max |w - simulated| = " + fmt("%.3g", err) + " ms (tol 1e-9)"};
}

// ---------------------------------------------------------------------------
// 2. Server bound at full capacity.

Outcome liu_layland() {
    double err = 0;
    for (std::size_t n = 1; n <= 10; ++n) {
        const double ll = static_cast<double>(n) * (std::pow(2.0, 1.0 / static_cast<double>(n)) - 1.0);
        for (double p : {1.0, 7.5, 1000.0}) err = std::max(err, std::abs(rta::server_ub(n, {p, p}) - ll));
    }
    return {err <= 1e-12, "n = 1..10, max |UB - n(2^(1/n) - 1)| = " + fmt("%.3g", err) + " (tol 1e-12)"};
}

// ---------------------------------------------------------------------------
// 3. Condensation: tangency and global under-estimation.

Outcome condensation() {
    std::mt19937_64 rng(303);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    auto logu = [&](double lo, double hi) { return std::exp(std::log(lo) + u(rng) * (std::log(hi) - std::log(lo))); };
    const std::vector<std::string> names{"a", "b", "c", "d"};
    double tangency = 0;
    std::size_t violations = 0, samples = 0;
    for (int k = 0; k < 1000; ++k) {
        const int nv = 1 + static_cast<int>(rng() % 4);
        const int nt = 1 + static_cast<int>(rng() % 6);
        std::vector<gp::Monomial> terms;
        for (int t = 0; t < nt; ++t) {
            std::map<std::string, double> e;
            for (int v = 0; v < nv; ++v)
                if (u(rng) < 0.8) e[names[static_cast<std::size_t>(v)]] = -3.0 + 6.0 * u(rng);
            terms.emplace_back(logu(1e-3, 1e3), e);
        }
        const gp::Posynomial g(terms);
        gp::Point at;
        for (int v = 0; v < nv; ++v) at[names[static_cast<std::size_t>(v)]] = logu(1e-2, 1e2);
        const auto ghat = gp::condense(g, at);
        tangency = std::max(tangency, std::abs(ghat.eval(at) - g.eval(at)) / g.eval(at));
        for (int s = 0; s < 50; ++s) {
            gp::Point x;
            for (int v = 0; v < nv; ++v) x[names[static_cast<std::size_t>(v)]] = logu(1e-3, 1e3);
            ++samples;
            if (ghat.eval(x) > g.eval(x) * (1 + 1e-12)) ++violations;
        }
    }
    return {tangency <= 1e-12 && violations == 0,
            "1000 pairs, max tangency error " + fmt("%.3g", tangency) + " (tol 1e-12), " + std::to_string(violations) + " of " +
                std::to_string(samples) + " samples above g"};
}

// ---------------------------------------------------------------------------
// 4. GP solver against a zooming log-grid search.

struct FlatPosy {
    std::vector<double> logc;
    std::vector<std::vector<double>> a;
    double operator()(const std::vector<double>& z) const {
        double s = 0;
        for (std::size_t t = 0; t < logc.size(); ++t) {
            double e = logc[t];
            for (std::size_t d = 0; d < z.size(); ++d) e += a[t][d] * z[d];
            s += std::exp(e);
        }
        return s;
    }
};

// Grid over the log box, then repeatedly re-grid around the best feasible point.
double zoom_grid(const FlatPosy& obj, const std::vector<FlatPosy>& cons, std::vector<double> lo, std::vector<double> hi) {
    const std::size_t n = lo.size();
    const std::vector<double> lo0 = lo, hi0 = hi;
    const int g = n <= 2 ? 41 : (n == 3 ? 21 : 13);
    double best = std::numeric_limits<double>::infinity();
    std::vector<double> arg;
    for (int level = 0; level < 48; ++level) {
        std::vector<double> z(n);
        std::vector<int> idx(n, 0);
        std::optional<std::vector<double>> level_arg;
        while (true) {
            for (std::size_t d = 0; d < n; ++d) z[d] = lo[d] + (hi[d] - lo[d]) * idx[d] / (g - 1);
            bool ok = true;
            for (const auto& c : cons)
                if (c(z) > 1.0) {
                    ok = false;
                    break;
                }
            if (ok) {
                const double v = obj(z);
                if (v < best) best = v, level_arg = z;
            }
            std::size_t d = 0;
            while (d < n && ++idx[d] == g) idx[d++] = 0;
            if (d == n) break;
        }
        if (level_arg) arg = *level_arg;
        if (arg.empty()) return best;
        for (std::size_t d = 0; d < n; ++d) {
            const double cell = (hi[d] - lo[d]) / (g - 1);
            // Halve the window each level so a point picked on a coarse grid near a
            // curved boundary cannot lock the search out of the optimum.
            const double half = cell * (g - 1) / 4.0;
            lo[d] = std::max(lo0[d], arg[d] - half);
            hi[d] = std::min(hi0[d], arg[d] + half);
        }
    }
    return best;
}

// Central-cut ellipsoid method in log space, started from the ball around the box.
// Unlike a lattice walk it cannot stall where a constraint meets a bound.
double ellipsoid(const FlatPosy& obj, const std::vector<FlatPosy>& cons, const std::vector<double>& lo, const std::vector<double>& hi) {
    const std::size_t n = lo.size();
    const double nd = static_cast<double>(n);
    std::vector<double> c(n), g(n), pg(n);
    std::vector<std::vector<double>> P(n, std::vector<double>(n, 0.0));
    for (std::size_t d = 0; d < n; ++d) {
        c[d] = 0.5 * (lo[d] + hi[d]);
        P[d][d] = nd * std::pow(0.5 * (hi[d] - lo[d]), 2);
    }
    auto grad = [&](const FlatPosy& f, const std::vector<double>& z) {
        std::fill(g.begin(), g.end(), 0.0);
        for (std::size_t t = 0; t < f.logc.size(); ++t) {
            double e = f.logc[t];
            for (std::size_t d = 0; d < n; ++d) e += f.a[t][d] * z[d];
            for (std::size_t d = 0; d < n; ++d) g[d] += std::exp(e) * f.a[t][d];
        }
    };
    double best = std::numeric_limits<double>::infinity();
    for (int it = 0; it < 4000; ++it) {
        bool cut = false;
        for (std::size_t d = 0; d < n && !cut; ++d)
            if (c[d] < lo[d] || c[d] > hi[d]) {
                std::fill(g.begin(), g.end(), 0.0);
                g[d] = c[d] < lo[d] ? -1.0 : 1.0;
                cut = true;
            }
        for (std::size_t k = 0; k < cons.size() && !cut; ++k)
            if (cons[k](c) > 1.0) grad(cons[k], c), cut = true;
        if (!cut) {
            best = std::min(best, obj(c));
            grad(obj, c);
        }
        double gpg = 0;
        for (std::size_t i = 0; i < n; ++i) {
            pg[i] = 0;
            for (std::size_t j = 0; j < n; ++j) pg[i] += P[i][j] * g[j];
            gpg += g[i] * pg[i];
        }
        if (!(gpg > 1e-300)) break;
        const double root = std::sqrt(gpg);
        for (std::size_t i = 0; i < n; ++i) c[i] -= pg[i] / root / (nd + 1);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j)
                P[i][j] = nd * nd / (nd * nd - 1) * (P[i][j] - 2.0 / (nd + 1) * pg[i] * pg[j] / gpg);
    }
    return best;
}

Outcome gp_vs_grid() {
    std::mt19937_64 rng(404);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    const int problems = 200;
    double worst = 0;
    int solved = 0, infeasible_both = 0, mismatched = 0;
    for (int k = 0; k < problems; ++k) {
        const std::size_t n = 2 + rng() % 3;
        gp::GpProblem p;
        std::vector<double> lo(n), hi(n), z0(n);
        for (std::size_t d = 0; d < n; ++d) {
            lo[d] = std::log(0.01) + u(rng) * std::log(100.0);
            hi[d] = lo[d] + 1.0 + 3.0 * u(rng);
            z0[d] = lo[d] + (0.2 + 0.6 * u(rng)) * (hi[d] - lo[d]);
            p.variables.push_back({"x" + std::to_string(d), std::exp(lo[d]), std::exp(hi[d]), std::nullopt});
        }
        auto random_posy = [&](int terms, double scale_to) {
            FlatPosy f;
            for (int t = 0; t < terms; ++t) {
                std::vector<double> a(n);
                for (auto& e : a) e = -2.0 + 4.0 * u(rng);
                f.a.push_back(a);
                f.logc.push_back(std::log(0.1) + u(rng) * std::log(100.0));
            }
            if (scale_to > 0) {
                const double shift = std::log(scale_to / f(z0));
                for (auto& c : f.logc) c += shift;
            }
            return f;
        };
        auto to_posy = [&](const FlatPosy& f) {
            std::vector<gp::Monomial> terms;
            for (std::size_t t = 0; t < f.logc.size(); ++t) {
                std::map<std::string, double> e;
                for (std::size_t d = 0; d < n; ++d) e["x" + std::to_string(d)] = f.a[t][d];
                terms.emplace_back(std::exp(f.logc[t]), e);
            }
            return gp::Posynomial(terms);
        };
        const FlatPosy obj = random_posy(1 + static_cast<int>(rng() % 4), 0);
        std::vector<FlatPosy> cons;
        const int nc = 1 + static_cast<int>(rng() % 3);
        for (int c = 0; c < nc; ++c) cons.push_back(random_posy(1 + static_cast<int>(rng() % 3), 0.3 + 0.5 * u(rng)));
        p.objective = to_posy(obj);
        for (const auto& c : cons) p.constraints.push_back(to_posy(c));

        const auto sol = gp::solve(p);
        const double grid = std::min(zoom_grid(obj, cons, lo, hi), ellipsoid(obj, cons, lo, hi));
        if (sol.status != gp::Status::optimal || !std::isfinite(grid)) {
            if (sol.status == gp::Status::infeasible && !std::isfinite(grid))
                ++infeasible_both;
            else
                ++mismatched;
            continue;
        }
        ++solved;
        worst = std::max(worst, std::abs(sol.objective_value - grid) / grid);
    }
    return {mismatched == 0 && worst <= 0.005,
            std::to_string(problems) + " problems (" + std::to_string(solved) + " solved, " + std::to_string(mismatched) +
                " status mismatches), max gap to min(zoomed grid, ellipsoid) " + fmt("%.3g", worst) + " (tol 0.005)"};
}

// ---------------------------------------------------------------------------
// 5. Back-substitution of the minimal capacity.

Outcome qmin_backsub() {
    std::mt19937_64 rng(505);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    double worst = 0;
    for (int k = 0; k < 1000; ++k) {
        const double p = 0.1 + 2500 * u(rng), d = 1 + 5000 * u(rng), delta = 200 * u(rng), work = 100 * u(rng);
        const double q = oracle::qmin_for_task(d, p, delta, work);
        worst = std::max(worst, std::abs(q / p * (d - (p - q) - delta) - work) / std::max(1.0, work));
    }
    return {worst <= 1e-9, "1000 inputs, max |lsbf(D) - I| = " + fmt("%.3g", worst) + " (tol 1e-9)"};
}

// ---------------------------------------------------------------------------
// 6. Joint optimization against a 0.1 ms grid over (T, Q, P).

Outcome joint_vs_grid() {
    std::mt19937_64 rng(606);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    const int instances = 50;
    double worst = 0;
    int both = 0, neither = 0, disagree = 0;
    for (int k = 0; k < instances; ++k) {
        const double tr = 5 + 10 * u(rng), cr = tr * (0.05 + 0.35 * u(rng));
        const std::size_t n = 1 + rng() % 2;
        std::vector<oracle_support::GridSec> gs;
        TaskSet ts;
        ts.rt_tasks.push_back({"r", cr, tr});
        for (std::size_t i = 0; i < n; ++i) {
            const double t_des = 5 + 25 * u(rng), t_max = t_des + 5 + 20 * u(rng);
            const double c = 0.2 + 1.3 * u(rng), w = 1.0 - u(rng);
            gs.push_back({c, t_des, t_max, w});
            ts.sec_tasks.push_back({"s" + std::to_string(i), c, t_des, t_max, w, std::nullopt});
        }
        validate(ts);
        const auto sol = opt::co_optimize(ts);
        const auto grid = oracle_support::joint_grid_search({{cr, tr}}, gs, 0.1);
        if (!sol.schedulable || grid.eta < 0) {
            if (!sol.schedulable && grid.eta < 0)
                ++neither;
            else
                ++disagree;
            continue;
        }
        ++both;
        worst = std::max(worst, std::abs(sol.eta - grid.eta) / grid.eta);
    }
    return {disagree == 0 && worst <= 0.02,
            std::to_string(instances) + " instances (" + std::to_string(both) + " feasible, " + std::to_string(neither) +
                " infeasible for both, " + std::to_string(disagree) + " verdict mismatches), max |eta - grid| / grid = " +
                fmt("%.4f", worst) + " (tol 0.02)"};
}

// ---------------------------------------------------------------------------
// Shared batch runs.

const experiment::ExperimentOutput& sched_run() {
    static std::optional<experiment::ExperimentOutput> cache;
    if (!cache) {
        experiment::ExperimentConfig c;
        c.figure = experiment::Figure::sched;
        c.sets_per_group = 50;
        c.seed = 7;
        c.search = {2500, 0.5};
        cache = experiment::run(c);
    }
    return *cache;
}

const experiment::ExperimentOutput& tightness_run() {
    static std::optional<experiment::ExperimentOutput> cache;
    if (!cache) {
        experiment::ExperimentConfig c;
        c.figure = experiment::Figure::tightness;
        c.sets_per_group = 50;
        c.seed = 9;
        cache = experiment::run(c);
    }
    return *cache;
}

// 7. Schedulability trend.
Outcome sched_trend() {
    const auto& out = sched_run();
    bool dominated = true;
    std::string rows;
    double low = 0, high = 0;
    int nlow = 0, nhigh = 0;
    for (const auto& g : out.groups) {
        const double fg = static_cast<double>(g.sched_gp) / g.sets_total, fo = static_cast<double>(g.sched_oracle) / g.sets_total;
        dominated = dominated && fg <= fo;
        rows += (rows.empty() ? "" : " ") + std::to_string(g.group) + ":" + fmt("%.2f", fg) + "/" + fmt("%.2f", fo);
        if (g.group <= 2) low += fo - fg, ++nlow;
        if (g.group >= 6) high += fo - fg, ++nhigh;
    }
    low /= std::max(1, nlow);
    high /= std::max(1, nhigh);
    return {dominated && high > low, "gp/oracle fractions " + rows + "; GP <= oracle in every group: " +
                                         (dominated ? "yes" : "no") + "; mean gap groups>=6 " + fmt("%.3f", high) +
                                         " vs groups<=2 " + fmt("%.3f", low) + " (need >)"};
}

// 8. Server quality.
Outcome quality() {
    const auto& out = sched_run();
    std::vector<double> diffs;
    int negatives = 0, unexplained = 0;
    for (const auto& s : out.sets) {
        if (!s.gp_schedulable || !s.oracle_schedulable) continue;
        const double d = s.oracle_util - s.gp_util;
        if (d < 0) {
            ++negatives;
            if (!(s.gp_period > 2500)) ++unexplained;
        }
        if (s.rt_util + s.sec_util <= 0.5) diffs.push_back(std::abs(d));
    }
    const double med = median(diffs);
    return {!diffs.empty() && med <= 0.05 && unexplained == 0,
            std::to_string(diffs.size()) + " sets with total util <= 0.5, median |oracle - gp| = " + fmt("%.4f", med) +
                " (tol 0.05); " + std::to_string(negatives) + " negative differences, " + std::to_string(unexplained) +
                " with P* <= P_max"};
}

// 9. Period tightness.
Outcome tightness() {
    const auto& out = tightness_run();
    int sched = 0, tight = 0;
    for (const auto& s : out.sets)
        if (s.gp_schedulable) {
            ++sched;
            if (s.xi <= 0.2) ++tight;
        }
    const double frac = sched ? static_cast<double>(tight) / sched : 0.0;
    return {sched > 0 && frac >= 0.6, std::to_string(tight) + " of " + std::to_string(sched) + " schedulable sets with xi <= 0.2 (" +
                                          fmt("%.3f", frac) + ", need >= 0.6)"};
}

// 10. Convergence.
Outcome convergence() {
    std::vector<double> iters;
    int within = 0;
    long solves = 0, settled = 0;
    for (const auto* run : {&sched_run(), &tightness_run()})
        for (const auto& s : run->sets) {
            solves += s.server_solves;
            settled += s.server_solves_converged;
            if (!s.gp_schedulable) continue;
            iters.push_back(s.iterations);
            if (s.iterations <= 10) ++within;
        }
    const double frac = iters.empty() ? 0.0 : static_cast<double>(within) / static_cast<double>(iters.size());
    const double med = median(iters);
    const double inner = solves ? static_cast<double>(settled) / static_cast<double>(solves) : 0.0;
    return {frac >= 0.95 && med <= 5 && inner >= 0.95,
            fmt("%.3f", frac) + " of " + std::to_string(iters.size()) + " sets within 10 outer iterations (need >= 0.95), median " +
                fmt("%.1f", med) + " (need <= 5); condensation settled in " + fmt("%.3f", inner) + " of " + std::to_string(solves) +
                " server solves (need >= 0.95)"};
}

// ---------------------------------------------------------------------------
// 11. Optimize then simulate through the command-line front end.

Outcome end_to_end() {
    namespace fs = std::filesystem;
    const fs::path dir = fs::temp_directory_path() / ("rtsec_accept_" + std::to_string(::getpid()));
    fs::create_directories(dir);
    const int sets = 500;
    std::vector<int> status(sets, 0);  // 0 replayed clean, 1 unschedulable, 2 misses, 3 tool error
    std::vector<std::string> notes(sets);
    experiment::parallel_for(sets, workers(), [&](std::size_t k) {
        workload::GenSpec spec;
        spec.rt_util = workload::utilization_group(static_cast<int>(k % 9));
        spec.seed = workload::derive_seed(1111, k);
        const auto g = workload::generate(spec);
        const auto set_path = (dir / ("set_" + std::to_string(k) + ".json")).string();
        const auto sol_path = (dir / ("sol_" + std::to_string(k) + ".json")).string();
        std::ofstream(set_path) << workload::to_json(g);
        std::ostringstream out, err;
        const int code = cli::run({"optimize", set_path, "--out", sol_path}, out, err);
        if (code == 3) {
            status[k] = 1;
            return;
        }
        if (code != 0) {
            status[k] = 3;
            notes[k] = err.str();
            return;
        }
        std::ostringstream sout, serr;
        if (cli::run({"simulate", set_path, sol_path}, sout, serr) != 0) {
            status[k] = 3;
            notes[k] = serr.str();
            return;
        }
        const std::string text = sout.str();
        const bool clean = text.find("rt_deadline_misses: 0\n") != std::string::npos &&
                           text.find("sec_deadline_misses: 0\n") != std::string::npos;
        status[k] = clean ? 0 : 2;
        if (!clean) notes[k] = text.substr(0, 200);
    });
    fs::remove_all(dir);
    const auto count = [&](int v) { return std::count(status.begin(), status.end(), v); };
    std::string first_note;
    for (const auto& n : notes)
        if (!n.empty()) {
            first_note = " first problem: " + n.substr(0, n.find('\n'));
            break;
        }
    return {count(2) == 0 && count(3) == 0,
            std::to_string(sets) + " sets: " + std::to_string(count(0)) + " replayed without misses, " + std::to_string(count(1)) +
                " unschedulable, " + std::to_string(count(2)) + " with misses, " + std::to_string(count(3)) + " tool errors" +
                first_note};
}

// ---------------------------------------------------------------------------
// 12. Detection latency, adapted periods against t_max.

Outcome detection() {
    int injections = 0, sets = 0, reversals = 0;
    double adapted = 0, baseline = 0;
    std::size_t compared = 0;
    for (std::uint64_t k = 0; sets < 10 && k < 100; ++k) {
        workload::GenSpec spec;
        spec.seed = workload::derive_seed(1212, k);
        const auto g = workload::generate(spec);
        const auto sol = opt::co_optimize(g.ts);
        const auto at_max = opt::solve_server_params(g.ts, g.ts.max_periods());
        if (!sol.schedulable || !at_max.ok()) continue;
        ++sets;
        const auto runs = experiment::attack_experiment(g.ts, {sol.periods, sol.server}, {g.ts.max_periods(), *at_max.server}, 10,
                                                        workload::derive_seed(1213, k));
        const auto s = experiment::summarize(runs);
        injections += static_cast<int>(s.runs);
        compared += s.compared;
        reversals += static_cast<int>(s.reversals);
        adapted += s.mean_adapted * static_cast<double>(s.compared);
        baseline += s.mean_baseline * static_cast<double>(s.compared);
    }
    if (compared) adapted /= static_cast<double>(compared), baseline /= static_cast<double>(compared);
    return {injections == 100 && compared > 0 && adapted <= baseline,
            std::to_string(injections) + " injections over " + std::to_string(sets) + " sets (" + std::to_string(compared) +
                " uncensored): mean latency adapted " + fmt("%.1f", adapted) + " ms vs t_max " + fmt("%.1f", baseline) +
                " ms, " + std::to_string(reversals) + " reversals"};
}

}  // namespace

int main(int argc, char** argv) {
    const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
        {"rta exactness vs simulation", rta_exactness},
        {"server bound reduces to Liu-Layland", liu_layland},
        {"condensation soundness", condensation},
        {"GP solver vs log-grid", gp_vs_grid},
        {"qmin back-substitution", qmin_backsub},
        {"joint optimum vs 3-D grid", joint_vs_grid},
        {"schedulability trend", sched_trend},
        {"server quality vs oracle", quality},
        {"period tightness", tightness},
        {"convergence", convergence},
        {"optimize/simulate end to end", end_to_end},
        {"detection latency", detection},
    };
    std::set<int> pick, expected;
    for (int i = 1; i < argc; ++i) {
        if (std::string(argv[i]) == "--expect-fail" && i + 1 < argc)
            expected.insert(std::atoi(argv[++i]));
        else
            pick.insert(std::atoi(argv[i]));
    }

    bool all = true;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        const int id = static_cast<int>(i + 1);
        if (!pick.empty() && !pick.count(id)) continue;
        const auto t0 = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = criteria[i].second();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        const bool waived = !o.pass && expected.count(id);
        all = all && (o.pass || waived);
        std::printf("%s %2d %-38s %s [%.1fs]%s\n", o.pass ? "PASS" : "FAIL", id, criteria[i].first.c_str(), o.detail.c_str(), secs,
                    waived ? " (expected failure)" : "");
        std::fflush(stdout);
    }
    return all ? 0 : 1;
}

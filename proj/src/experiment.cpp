#include "rtsec/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <cstdlib>
#include <sstream>
#include <stdexcept>
#include <thread>

namespace rtsec::experiment {

Figure parse_figure(const std::string& s) {
    if (s == "sched") return Figure::sched;
    if (s == "quality") return Figure::quality;
    if (s == "tightness") return Figure::tightness;
    throw std::invalid_argument("unknown figure '" + s + "' (expected sched, quality or tightness)");
}

const char* to_string(Figure f) {
    switch (f) {
        case Figure::sched: return "sched";
        case Figure::quality: return "quality";
        case Figure::tightness: return "tightness";
    }
    return "?";
}

OraclePeriods parse_oracle_periods(const std::string& s) {
    if (s == "gp") return OraclePeriods::gp;
    if (s == "max") return OraclePeriods::max;
    if (s == "desired") return OraclePeriods::desired;
    throw std::invalid_argument("unknown oracle periods '" + s + "' (expected gp, max or desired)");
}

unsigned thread_count() {
    if (const char* env = std::getenv("RTSS_THREADS")) {
        char* end = nullptr;
        const long v = std::strtol(env, &end, 10);
        if (end != env && *end == '\0' && v > 0) return static_cast<unsigned>(v);
    }
    return std::max(1u, std::thread::hardware_concurrency());
}

void parallel_for(std::size_t count, unsigned threads, const std::function<void(std::size_t)>& fn) {
    threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(std::max<std::size_t>(1, count))));
    if (threads == 1) {
        for (std::size_t i = 0; i < count; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr error;
    std::atomic<bool> failed{false};
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < threads; ++w)
        pool.emplace_back([&] {
            for (std::size_t i = next++; i < count && !failed; i = next++) {
                try {
                    fn(i);
                } catch (...) {
                    if (!failed.exchange(true)) error = std::current_exception();
                }
            }
        });
    for (auto& t : pool) t.join();
    if (error) std::rethrow_exception(error);
}

std::vector<int> default_groups(Figure f) {
    if (f == Figure::tightness) return {0, 1, 2, 3};
    return {0, 1, 2, 3, 4, 5, 6, 7, 8};
}

SetResult evaluate(const TaskSet& ts, bool run_oracle, const oracle::SearchConfig& search,
                   const opt::CoOptimizeOptions& co, OraclePeriods oracle_periods) {
    SetResult r;
    r.m = ts.rt_tasks.size();
    r.n = ts.sec_tasks.size();
    const auto sol = opt::co_optimize(ts, co);
    r.gp_schedulable = sol.schedulable;
    r.iterations = sol.iterations;
    r.max_condensations = sol.max_condensation_iterations;
    r.condensation_converged = sol.condensation_converged;
    r.server_solves = sol.server_solves;
    r.server_solves_converged = sol.server_solves_converged;
    if (sol.schedulable) {
        r.gp_util = sol.server.utilization();
        r.gp_period = sol.server.period;
        r.xi = sol.xi;
        r.eta = sol.eta;
    }
    if (run_oracle) {
        r.oracle_run = true;
        auto periods = sol.schedulable ? sol.periods : ts.max_periods();
        if (oracle_periods == OraclePeriods::max) periods = ts.max_periods();
        if (oracle_periods == OraclePeriods::desired) periods = ts.desired_periods();
        const auto ex = oracle::exhaustive_search(ts, periods, search);
        r.oracle_schedulable = ex.server.has_value();
        if (ex.server) r.oracle_util = ex.server->utilization();
    }
    return r;
}

ExperimentOutput run(const ExperimentConfig& cfg) {
    if (cfg.sets_per_group < 1) throw std::invalid_argument("sets per group must be positive");
    const auto groups = cfg.groups.empty() ? default_groups(cfg.figure) : cfg.groups;
    for (int g : groups)
        if (g < 0 || g > 9) throw std::invalid_argument("utilization group out of range: " + std::to_string(g));
    const auto per = static_cast<std::size_t>(cfg.sets_per_group);
    const std::size_t total = groups.size() * per;

    ExperimentOutput out;
    out.sets.resize(total);
    const bool oracle = cfg.figure != Figure::tightness;
    parallel_for(total, cfg.threads ? cfg.threads : thread_count(), [&](std::size_t k) {
        const int group = groups[k / per];
        workload::GenSpec spec = cfg.base;
        if (cfg.figure == Figure::tightness)
            spec.sec_util = workload::utilization_group(group);
        else
            spec.rt_util = workload::utilization_group(group);
        spec.seed = workload::derive_seed(cfg.seed, k);
        const auto gen = workload::generate(spec);
        SetResult r = evaluate(gen.ts, oracle, cfg.search, cfg.co, cfg.oracle_periods);
        r.set_id = k;
        r.group = group;
        r.seed = spec.seed;
        r.rt_util = gen.rt_util;
        r.sec_util = gen.sec_util;
        out.sets[k] = r;
    });

    for (std::size_t gi = 0; gi < groups.size(); ++gi) {
        GroupRow row;
        row.group = groups[gi];
        row.range = workload::utilization_group(groups[gi]);
        std::size_t both = 0;
        double diff = 0.0, xi = 0.0, iters = 0.0;
        for (std::size_t k = gi * per; k < (gi + 1) * per; ++k) {
            const auto& s = out.sets[k];
            ++row.sets_total;
            if (s.gp_schedulable) {
                ++row.sched_gp;
                xi += s.xi;
                iters += s.iterations;
            }
            if (s.oracle_schedulable) ++row.sched_oracle;
            if (s.gp_schedulable && s.oracle_schedulable) {
                ++both;
                diff += s.oracle_util - s.gp_util;
            }
        }
        row.mean_util_diff = both ? diff / static_cast<double>(both) : 0.0;
        row.mean_xi = row.sched_gp ? xi / static_cast<double>(row.sched_gp) : 0.0;
        row.mean_iterations = row.sched_gp ? iters / static_cast<double>(row.sched_gp) : 0.0;
        out.groups.push_back(row);
    }
    return out;
}

std::string groups_csv(const std::vector<GroupRow>& rows) {
    std::ostringstream os;
    os << "util_group,sets_total,sched_gp,sched_oracle,mean_util_diff,mean_xi,mean_iterations\n";
    char buf[160];
    for (const auto& r : rows) {
        std::snprintf(buf, sizeof buf, "%.2f-%.2f,%zu,%zu,%zu,%.6f,%.6f,%.6f\n", r.range.lo, r.range.hi, r.sets_total, r.sched_gp,
                      r.sched_oracle, r.mean_util_diff, r.mean_xi, r.mean_iterations);
        os << buf;
    }
    return os.str();
}

std::string sets_csv(const std::vector<SetResult>& rows) {
    std::ostringstream os;
    os << "set_id,group,seed,rt_util,sec_util,m,n,gp_schedulable,oracle_schedulable,gp_util,oracle_util,util_diff,gp_P,xi,"
          "iterations\n";
    char buf[320];
    for (const auto& r : rows) {
        const bool both = r.gp_schedulable && r.oracle_schedulable;
        std::snprintf(buf, sizeof buf, "%zu,%d,%llu,%.6f,%.6f,%zu,%zu,%d,%s,%.6f,%.6f,%s,%.6f,%.6f,%d\n", r.set_id, r.group,
                      static_cast<unsigned long long>(r.seed), r.rt_util, r.sec_util, r.m, r.n, r.gp_schedulable ? 1 : 0,
                      r.oracle_run ? (r.oracle_schedulable ? "1" : "0") : "", r.gp_util, r.oracle_util,
                      both ? std::to_string(r.oracle_util - r.gp_util).c_str() : "", r.gp_period, r.xi, r.iterations);
        os << buf;
    }
    return os.str();
}

std::vector<AttackRun> attack_experiment(const TaskSet& ts, const Assignment& adapted, const Assignment& baseline,
                                         int runs, std::uint64_t seed, std::optional<Millis> horizon) {
    if (runs < 0) throw std::invalid_argument("attack runs must be non-negative");
    if (ts.sec_tasks.empty()) throw std::invalid_argument("attack experiment needs security tasks");
    const std::size_t n = ts.sec_tasks.size();
    if (adapted.periods.size() != n || baseline.periods.size() != n)
        throw std::invalid_argument("attack experiment: one period per security task required");
    Millis longest = 0.0;
    for (const auto* a : {&adapted, &baseline})
        for (Millis p : a->periods) longest = std::max(longest, p);
    const Millis h = horizon.value_or(20.0 * longest);
    const Millis window = h > 2.0 * longest ? h - longest : h / 2.0;

    workload::SplitMix64 rng(seed);
    std::vector<AttackRun> out(static_cast<std::size_t>(runs));
    std::vector<std::vector<Millis>> times(n);
    std::vector<std::vector<std::size_t>> slots(n);
    for (std::size_t r = 0; r < out.size(); ++r) {
        const auto k = static_cast<std::size_t>(rng() % n);
        out[r].run = r;
        out[r].task = ts.sec_tasks[k].name;
        out[r].attack_time = window * rng.uniform();
        times[k].push_back(out[r].attack_time);
        slots[k].push_back(r);
    }

    auto replay = [&](const Assignment& a, std::optional<Millis> AttackRun::*field) {
        sim::SimConfig cfg;
        cfg.horizon = h;
        cfg.server = a.server;
        cfg.assigned_periods = a.periods;
        cfg.record_events = false;
        const auto trace = sim::simulate(ts, cfg);
        for (std::size_t k = 0; k < n; ++k) {
            if (times[k].empty()) continue;
            const auto lat = sim::detection_latency(ts, trace, times[k], ts.sec_tasks[k].name);
            for (std::size_t i = 0; i < lat.size(); ++i) out[slots[k][i]].*field = lat[i];
        }
    };
    replay(adapted, &AttackRun::adapted);
    replay(baseline, &AttackRun::baseline);
    return out;
}

AttackSummary summarize(const std::vector<AttackRun>& runs) {
    AttackSummary s;
    s.runs = runs.size();
    for (const auto& r : runs) {
        if (!r.adapted || !r.baseline) continue;
        ++s.compared;
        s.mean_adapted += *r.adapted;
        s.mean_baseline += *r.baseline;
        if (*r.baseline < *r.adapted) ++s.reversals;
    }
    if (s.compared) {
        s.mean_adapted /= static_cast<double>(s.compared);
        s.mean_baseline /= static_cast<double>(s.compared);
    }
    return s;
}

std::string attack_csv(const std::vector<AttackRun>& runs) {
    std::ostringstream os;
    os << "run,task,attack_time,latency_adapted,latency_baseline\n";
    char buf[64];
    auto cell = [&](const std::optional<Millis>& v) {
        if (!v) return std::string();
        std::snprintf(buf, sizeof buf, "%.6f", *v);
        return std::string(buf);
    };
    for (const auto& r : runs) {
        std::snprintf(buf, sizeof buf, "%.6f", r.attack_time);
        os << r.run << ',' << r.task << ',' << buf << ',' << cell(r.adapted) << ',' << cell(r.baseline) << '\n';
    }
    return os.str();
}

}  // namespace rtsec::experiment

#include "rtsec/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <deque>
#include <limits>
#include <numeric>
#include <random>
#include <sstream>
#include <stdexcept>

namespace rtsec::sim {

namespace {

constexpr double kEps = 1e-9;
constexpr Millis kHorizonCap = 1e6;

std::string fmt6(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6f", v);
    return buf;
}

enum class ServerState { inactive, active, exhausted };

struct Job : JobRecord {
    Millis remaining = 0.0;
};

}  // namespace

const char* to_string(EventKind kind) {
    switch (kind) {
        case EventKind::release: return "release";
        case EventKind::start: return "start";
        case EventKind::preempt: return "preempt";
        case EventKind::resume: return "resume";
        case EventKind::complete: return "complete";
        case EventKind::deadline_miss: return "deadline_miss";
        case EventKind::replenish: return "replenish";
        case EventKind::capacity_exhausted: return "capacity_exhausted";
        case EventKind::server_activate: return "server_activate";
        case EventKind::server_suspend: return "server_suspend";
    }
    return "?";
}

namespace {

Millis lcm_horizon(const std::vector<Millis>& periods) {
    if (periods.empty()) return kHorizonCap;
    // Whole microseconds, with the lcm kept below the cap.
    const long long cap_us = static_cast<long long>(kHorizonCap * 1000.0 / 2.0);
    long long l = 1;
    for (double p : periods) {
        const double us = p * 1000.0;
        const double r = std::round(us);
        if (r < 1 || std::abs(us - r) > 1e-6 * std::max(1.0, us)) return kHorizonCap;
        l = std::lcm(l, static_cast<long long>(r));
        if (l > cap_us) return kHorizonCap;
    }
    return std::min(kHorizonCap, 2.0 * static_cast<double>(l) / 1000.0);
}

}  // namespace

Millis default_horizon(const TaskSet& ts, const std::vector<Millis>& sec_periods) {
    std::vector<Millis> periods;
    for (const auto& t : ts.rt_tasks) periods.push_back(t.period);
    if (periods.empty()) periods = sec_periods;
    Millis h = lcm_horizon(periods);
    for (Millis p : sec_periods) h = std::max(h, 2.0 * p);
    return std::min(h, kHorizonCap);
}

SimTrace simulate(const TaskSet& ts, const SimConfig& cfg) {
    const std::size_t m = ts.rt_tasks.size();
    const bool with_server = cfg.server.has_value() && !ts.sec_tasks.empty();
    const std::size_t n = with_server ? ts.sec_tasks.size() : 0;
    if (with_server) {
        validate(*cfg.server);
        if (cfg.assigned_periods.size() != ts.sec_tasks.size())
            throw std::invalid_argument("simulate: one assigned period per security task required");
        for (double p : cfg.assigned_periods)
            if (!(p > 0)) throw std::invalid_argument("simulate: assigned periods must be positive");
    }

    SimTrace trace;
    trace.horizon = cfg.horizon.value_or(default_horizon(ts, cfg.assigned_periods));
    if (!(trace.horizon > 0)) throw std::invalid_argument("simulate: horizon must be positive");
    trace.worst_rt_response.assign(m, 0.0);
    trace.worst_sec_response.assign(ts.sec_tasks.size(), 0.0);

    // Unified task index: [0, m) real-time, [m, m + n) security.
    const std::size_t total = m + n;
    auto period_of = [&](std::size_t k) { return k < m ? ts.rt_tasks[k].period : cfg.assigned_periods[k - m]; };
    auto wcet_of = [&](std::size_t k) { return k < m ? ts.rt_tasks[k].wcet : ts.sec_tasks[k - m].wcet; };
    auto name_of = [&](std::size_t k) -> const std::string& { return k < m ? ts.rt_tasks[k].name : ts.sec_tasks[k - m].name; };

    std::mt19937_64 rng(cfg.seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::vector<Millis> next_release(total, 0.0);
    std::vector<long long> released(total, 0);
    if (cfg.release == ReleasePattern::sporadic)
        for (std::size_t k = 0; k < total; ++k) next_release[k] = period_of(k) * unit(rng);

    std::vector<Job> jobs;
    std::vector<std::deque<std::size_t>> queue(total);

    auto emit = [&](Millis t, const std::string& entity, EventKind kind, std::string detail) {
        if (cfg.record_events) trace.events.push_back({t, entity, kind, std::move(detail)});
    };
    const std::string server_name = "server";

    ServerState state = ServerState::inactive;
    Millis capacity = 0.0, replenish_at = 0.0, period_start = -std::numeric_limits<double>::infinity();
    bool budget_open = false;
    Millis budget_start = 0.0, budget_used = 0.0;
    auto close_budget = [&] {
        if (budget_open) trace.budget_usage.emplace_back(budget_start, budget_used);
        budget_open = false;
    };
    auto open_budget = [&](Millis t) {
        close_budget();
        budget_open = true;
        budget_start = t;
        budget_used = 0.0;
    };
    auto sec_pending = [&] {
        for (std::size_t k = m; k < total; ++k)
            if (!queue[k].empty()) return true;
        return false;
    };

    std::optional<std::size_t> running;  // job index
    Millis t = 0.0;
    int stalled = 0;
    while (true) {
        // Deadline misses of unfinished jobs.
        for (std::size_t k = 0; k < total; ++k)
            for (std::size_t j : queue[k]) {
                Job& job = jobs[j];
                if (!job.missed && job.deadline <= t + kEps && job.deadline <= trace.horizon + kEps) {
                    job.missed = true;
                    ++(job.security ? trace.sec_misses : trace.rt_misses);
                    if (cfg.record_events) emit(job.deadline, name_of(k), EventKind::deadline_miss, "job=" + std::to_string(job.index));
                }
            }
        if (t >= trace.horizon - kEps) break;

        // Releases in priority order.
        for (std::size_t k = 0; k < total; ++k) {
            while (next_release[k] <= t + kEps && next_release[k] < trace.horizon - kEps) {
                Job job;
                job.security = k >= m;
                job.task = job.security ? k - m : k;
                job.index = released[k]++;
                job.release = next_release[k];
                job.deadline = job.release + period_of(k);
                job.remaining = wcet_of(k);
                jobs.push_back(job);
                queue[k].push_back(jobs.size() - 1);
                if (cfg.record_events) emit(job.release, name_of(k), EventKind::release, "job=" + std::to_string(job.index));
                if (cfg.release == ReleasePattern::synchronous)
                    next_release[k] = static_cast<double>(released[k]) * period_of(k);
                else
                    next_release[k] += period_of(k) * (1.0 + cfg.sporadic_slack * unit(rng));
                if (job.security && state == ServerState::inactive) {
                    const auto& s = *cfg.server;
                    if (cfg.replenish_guard && t < period_start + s.period - kEps) {
                        // Keep the leftover budget until the current period ends.
                        replenish_at = period_start + s.period;
                        state = capacity > kEps ? ServerState::active : ServerState::exhausted;
                        emit(t, server_name, EventKind::server_activate, "capacity=" + fmt6(capacity));
                        if (!budget_open) open_budget(t);
                    } else {
                        capacity = s.capacity;
                        replenish_at = t + s.period;
                        period_start = t;
                        state = ServerState::active;
                        emit(t, server_name, EventKind::server_activate, "capacity=" + fmt6(capacity));
                        open_budget(t);
                    }
                }
            }
        }

        // Replenishment.
        if (with_server && state != ServerState::inactive && replenish_at <= t + kEps) {
            const auto& s = *cfg.server;
            capacity = s.capacity;
            period_start = replenish_at;
            replenish_at += s.period;
            state = ServerState::active;
            emit(t, server_name, EventKind::replenish, "capacity=" + fmt6(capacity));
            open_budget(t);
        }

        // Dispatch.
        std::optional<std::size_t> pick;
        for (std::size_t k = 0; k < m && !pick; ++k)
            if (!queue[k].empty()) pick = queue[k].front();
        if (!pick && state == ServerState::active && capacity > kEps)
            for (std::size_t k = m; k < total && !pick; ++k)
                if (!queue[k].empty()) pick = queue[k].front();
        if (pick != running) {
            if (running && jobs[*running].remaining > kEps) {
                const std::size_t k = jobs[*running].security ? m + jobs[*running].task : jobs[*running].task;
                emit(t, name_of(k), EventKind::preempt, "job=" + std::to_string(jobs[*running].index));
            }
            if (pick) {
                Job& job = jobs[*pick];
                const std::size_t k = job.security ? m + job.task : job.task;
                if (!job.start) {
                    job.start = t;
                    emit(t, name_of(k), EventKind::start, "job=" + std::to_string(job.index));
                } else {
                    emit(t, name_of(k), EventKind::resume, "job=" + std::to_string(job.index));
                }
            }
            running = pick;
        }

        // Next decision point.
        Millis next = trace.horizon;
        for (std::size_t k = 0; k < total; ++k) {
            if (next_release[k] < trace.horizon) next = std::min(next, next_release[k]);
            for (std::size_t j : queue[k])
                if (!jobs[j].missed) {
                    next = std::min(next, jobs[j].deadline);
                    break;
                }
        }
        if (with_server && state != ServerState::inactive) next = std::min(next, replenish_at);
        if (running) {
            next = std::min(next, t + jobs[*running].remaining);
            if (jobs[*running].security) next = std::min(next, t + capacity);
        }
        next = std::max(next, t);

        // Advance.
        const Millis dt = next - t;
        // Every pass either moves time or changes state; this only trips on a bug.
        if (dt > 0) stalled = 0;
        else if (++stalled > 1000) throw std::logic_error("simulate: no progress at t=" + fmt6(t));
        t = next;
        if (running) {
            Job& job = jobs[*running];
            const std::size_t k = job.security ? m + job.task : job.task;
            job.remaining -= dt;
            job.executed += dt;
            if (job.security) {
                capacity -= dt;
                budget_used += dt;
            }
            if (job.remaining <= kEps) {
                job.executed += job.remaining;
                if (job.security) budget_used += job.remaining, capacity -= job.remaining;
                job.remaining = 0.0;
                job.completion = t;
                queue[k].pop_front();
                const Millis response = t - job.release;
                auto& worst = job.security ? trace.worst_sec_response[job.task] : trace.worst_rt_response[job.task];
                worst = std::max(worst, response);
                if (cfg.record_events)
                    emit(t, name_of(k), EventKind::complete, "job=" + std::to_string(job.index) + " response=" + fmt6(response));
                running.reset();
            }
            if (job.security) {
                if (capacity <= kEps) {
                    capacity = 0.0;
                    if (sec_pending()) {
                        state = ServerState::exhausted;
                        emit(t, server_name, EventKind::capacity_exhausted, "");
                        emit(t, server_name, EventKind::server_suspend, "until=" + fmt6(replenish_at));
                    } else {
                        state = ServerState::inactive;
                        emit(t, server_name, EventKind::server_suspend, "idle");
                        close_budget();
                    }
                } else if (!sec_pending()) {
                    state = ServerState::inactive;
                    emit(t, server_name, EventKind::server_suspend, "idle");
                    close_budget();
                }
            }
        }
    }
    close_budget();

    trace.jobs.reserve(jobs.size());
    for (auto& j : jobs) trace.jobs.push_back(static_cast<JobRecord&>(j));
    return trace;
}

std::string to_csv(const SimTrace& trace) {
    std::ostringstream os;
    os << "time,entity,kind,detail\n";
    for (const auto& e : trace.events) os << fmt6(e.time) << ',' << e.entity << ',' << to_string(e.kind) << ',' << e.detail << '\n';
    return os.str();
}

std::vector<std::optional<Millis>> detection_latency(const TaskSet& ts, const SimTrace& trace,
                                                     const std::vector<Millis>& attack_times, const std::string& monitored) {
    std::size_t idx = ts.sec_tasks.size();
    for (std::size_t i = 0; i < ts.sec_tasks.size(); ++i)
        if (ts.sec_tasks[i].name == monitored) idx = i;
    if (idx == ts.sec_tasks.size()) throw std::invalid_argument("unknown security task: " + monitored);

    std::vector<const JobRecord*> started;
    for (const auto& j : trace.jobs)
        if (j.security && j.task == idx && j.start) started.push_back(&j);
    // One task never overlaps itself in the server, so start times are increasing.
    std::vector<std::optional<Millis>> out;
    out.reserve(attack_times.size());
    for (Millis a : attack_times) {
        auto it = std::lower_bound(started.begin(), started.end(), a,
                                   [](const JobRecord* j, Millis v) { return *j->start < v - 1e-12; });
        if (it == started.end() || !(*it)->completion)
            out.push_back(std::nullopt);
        else
            out.push_back(*(*it)->completion - a);
    }
    return out;
}

std::vector<std::optional<Millis>> detection_latency(const TaskSet& ts, const SimConfig& cfg,
                                                     const std::vector<Millis>& attack_times, const std::string& monitored) {
    SimConfig c = cfg;
    c.record_events = false;
    return detection_latency(ts, simulate(ts, c), attack_times, monitored);
}

}  // namespace rtsec::sim

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "rtsec/taskmodel.hpp"

namespace rtsec::sim {

enum class ReleasePattern { synchronous, sporadic };

struct SimConfig {
    std::optional<Millis> horizon;  // default_horizon() when unset
    ReleasePattern release = ReleasePattern::synchronous;
    std::uint64_t seed = 1;
    double sporadic_slack = 0.5;    // sporadic gaps are T (1 + U(0, slack))
    std::optional<ServerParams> server;
    std::vector<Millis> assigned_periods;  // one per security task
    // Refuse to recharge an idle server before the previous period has elapsed.
    bool replenish_guard = false;
    bool record_events = true;
};

enum class EventKind {
    release,
    start,
    preempt,
    resume,
    complete,
    deadline_miss,
    replenish,
    capacity_exhausted,
    server_activate,
    server_suspend,
};

const char* to_string(EventKind kind);

struct Event {
    Millis time = 0.0;
    std::string entity;
    EventKind kind = EventKind::release;
    std::string detail;
};

struct JobRecord {
    bool security = false;
    std::size_t task = 0;
    long long index = 0;
    Millis release = 0.0;
    Millis deadline = 0.0;
    std::optional<Millis> start;
    std::optional<Millis> completion;
    bool missed = false;
    Millis executed = 0.0;
};

struct SimTrace {
    Millis horizon = 0.0;
    std::vector<Event> events;
    std::vector<JobRecord> jobs;
    std::size_t rt_misses = 0;
    std::size_t sec_misses = 0;
    std::vector<Millis> worst_rt_response;   // per RT task over completed jobs
    std::vector<Millis> worst_sec_response;  // per security task over completed jobs
    // Security execution per continuous server budget interval: (interval start, executed).
    std::vector<std::pair<Millis, Millis>> budget_usage;
};

/// 2 x lcm of the real-time periods when they are representable in whole
/// microseconds, and never shorter than two of the given security periods.
/// Capped at 1e6 ms. The lcm falls back to the security periods when there
/// are no real-time tasks.
Millis default_horizon(const TaskSet& ts, const std::vector<Millis>& sec_periods = {});

/// Event-driven preemptive fixed-priority schedule: real-time tasks by rate
/// monotonic priority, then the server, which runs security tasks in list order.
SimTrace simulate(const TaskSet& ts, const SimConfig& cfg);

/// `time,entity,kind,detail` with six decimals.
std::string to_csv(const SimTrace& trace);

/// For each attack time a: completion of the first job of `monitored` that
/// starts at or after a, minus a. nullopt when no such job finishes in the horizon.
std::vector<std::optional<Millis>> detection_latency(const TaskSet& ts, const SimConfig& cfg,
                                                     const std::vector<Millis>& attack_times, const std::string& monitored);

/// Same, on an already simulated trace.
std::vector<std::optional<Millis>> detection_latency(const TaskSet& ts, const SimTrace& trace,
                                                     const std::vector<Millis>& attack_times, const std::string& monitored);

}  // namespace rtsec::sim

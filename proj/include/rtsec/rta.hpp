#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "rtsec/taskmodel.hpp"

namespace rtsec::rta {

// Absolute guard on fixed-point convergence and deadline comparisons.
inline constexpr double kTimeEps = 1e-9;

/// ceil(x / period), forgiving round-off that lands a hair above an integer.
long long ceil_div(Millis x, Millis period);

struct ResponseTime {
    Millis value = 0.0;
    bool schedulable = false;
    int iterations = 0;
};

/// Fixed point of w = C + sum_hp ceil(w/T_h) C_h, started at w = C. Stops early
/// (unschedulable) once an iterate passes the deadline.
ResponseTime response_time(const RtTask& task, std::span<const RtTask> hp);

struct RtaResult {
    std::vector<Millis> response_times;
    bool schedulable = true;
    int iterations = 0;
};

/// Runs response_time for every task of a priority-sorted list (index 0 highest).
RtaResult analyze(std::span<const RtTask> rt_sorted);

/// Liu-Layland bound for m + n tasks minus the real-time utilization. Negative
/// means there is no room for the security tasks.
double rm_slack_bound(std::size_t m, std::size_t n, double rt_util);

/// Utilization bound for n fixed-priority tasks inside a server S(Q, P).
double server_ub(std::size_t n, const ServerParams& server);

/// Worst-case server busy period: w = Q + sum ceil(w/T_h) C_h from w = Q.
/// nullopt when an iterate exceeds P.
std::optional<Millis> busy_period_exact(const ServerParams& server, std::span<const RtTask> rt);

/// Interference delay sum ceil(w_S/T_h) C_h at the exact busy period.
std::optional<Millis> delay_exact(const ServerParams& server, std::span<const RtTask> rt);

/// Ceiling-free delay sum (P/T_h + 1) C_h; linear in P and never below delay_exact.
Millis delay_approx(Millis server_period, std::span<const RtTask> rt);

enum class DelayMode { exact, approx };

struct SupplyModel {
    ServerParams server;
    Millis delay = 0.0;
    DelayMode mode = DelayMode::approx;

    /// nullopt only in exact mode when the busy period diverges.
    static std::optional<SupplyModel> build(const ServerParams& server, std::span<const RtTask> rt, DelayMode mode);
};

/// Linear lower-bound supply (Q/P) [t - (P - Q) - delay]. Not clamped at zero.
double lsbf(const SupplyModel& supply, Millis t);

/// I = C + sum_hp ceil(D / T_h) C_h, with hp given as (wcet, period) pairs.
Millis workload(Millis wcet, Millis deadline, std::span<const std::pair<Millis, Millis>> hp);

/// Workload of every security task at D_i = periods[i]; hp(i) is sec_tasks[0..i).
std::vector<Millis> sec_workloads(std::span<const SecTask> sec, std::span<const Millis> periods);

/// Per-task verdict of lsbf(D_i) >= I_i. Sufficient only: false does not imply
/// a deadline miss.
std::vector<bool> sec_schedulable_sufficient(std::span<const SecTask> sec, std::span<const Millis> periods,
                                             const SupplyModel& supply);

}  // namespace rtsec::rta

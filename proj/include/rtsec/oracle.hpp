#pragma once

#include <optional>
#include <span>
#include <vector>

#include "rtsec/taskmodel.hpp"

namespace rtsec::oracle {

struct SearchConfig {
    Millis p_max = 2500.0;
    Millis granularity = 0.5;
};

/// Smallest Q with (Q/P)(D - (P - Q) - delta) >= I, the positive root of
/// Q^2 + (D - P - delta) Q - I P = 0.
Millis qmin_for_task(Millis deadline, Millis period, Millis delta, Millis workload);

/// Largest qmin_for_task over the security tasks (D_i = periods[i]). Throws
/// std::invalid_argument on an empty list.
Millis qmin_over_tasks(std::span<const SecTask> sec, std::span<const Millis> periods, Millis server_period, Millis delta);

struct SearchResult {
    std::optional<ServerParams> server;
    Millis delay = 0.0;            // exact delay at the returned pair
    std::size_t feasible_periods = 0;  // grid points with at least one feasible Q
};

/// Sweeps P over {d, 2d, ..., p_max} and, for each P, finds the largest Q that
/// passes the supply check with the exact (busy-period) delay. Returns the pair
/// with the largest Q/P; ties go to smaller P, then smaller Q.
SearchResult exhaustive_search(const TaskSet& ts, std::span<const Millis> periods, const SearchConfig& cfg = {});

}  // namespace rtsec::oracle

#include "rtsec/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "rtsec/rta.hpp"

namespace rtsec::oracle {

Millis qmin_for_task(Millis deadline, Millis period, Millis delta, Millis workload) {
    const double b = deadline - period - delta;
    return (-b + std::sqrt(b * b + 4.0 * workload * period)) / 2.0;
}

Millis qmin_over_tasks(std::span<const SecTask> sec, std::span<const Millis> periods, Millis server_period, Millis delta) {
    if (sec.empty()) throw std::invalid_argument("qmin_over_tasks: no security tasks");
    const auto demand = rta::sec_workloads(sec, periods);
    Millis q = 0.0;
    for (std::size_t i = 0; i < sec.size(); ++i)
        q = std::max(q, qmin_for_task(periods[i], server_period, delta, demand[i]));
    return q;
}

namespace {

Millis interference(Millis t, std::span<const RtTask> rt) {
    Millis s = 0.0;
    for (const auto& h : rt) s += static_cast<double>(rta::ceil_div(t, h.period)) * h.wcet;
    return s;
}

}  // namespace

SearchResult exhaustive_search(const TaskSet& ts, std::span<const Millis> periods, const SearchConfig& cfg) {
    if (!(cfg.granularity > 0) || !(cfg.p_max >= cfg.granularity)) throw std::invalid_argument("bad search grid");
    if (ts.sec_tasks.empty()) throw std::invalid_argument("no security tasks");
    const auto& rt = ts.rt_tasks;
    const auto demand = rta::sec_workloads(ts.sec_tasks, periods);

    // Scheduling points k T_h up to p_max. The largest Q whose busy period fits
    // in P is max over points t <= P (and t = P) of t - I(t).
    std::vector<Millis> points;
    for (const auto& h : rt)
        for (long long k = 1; static_cast<double>(k) * h.period <= cfg.p_max + rta::kTimeEps; ++k)
            points.push_back(static_cast<double>(k) * h.period);
    std::sort(points.begin(), points.end());
    double min_delay = 0.0;
    for (const auto& h : rt) min_delay += h.wcet;

    auto feasible = [&](const ServerParams& s, Millis delay) {
        if (s.capacity + delay > s.period + rta::kTimeEps * std::max(1.0, s.period)) return false;
        const rta::SupplyModel supply{s, delay, rta::DelayMode::exact};
        for (std::size_t i = 0; i < demand.size(); ++i)
            if (rta::lsbf(supply, periods[i]) < demand[i] - rta::kTimeEps * std::max(1.0, demand[i])) return false;
        return true;
    };
    auto exact_delay = [&](Millis q, Millis p) { return rta::delay_exact({q, p}, rt); };

    SearchResult out;
    double best_ratio = -1.0;
    std::size_t next_point = 0;
    double envelope = -std::numeric_limits<double>::infinity();
    const auto steps = static_cast<long long>(std::floor(cfg.p_max / cfg.granularity + 1e-9));
    for (long long k = 1; k <= steps; ++k) {
        const Millis p = static_cast<double>(k) * cfg.granularity;
        while (next_point < points.size() && points[next_point] <= p + rta::kTimeEps) {
            envelope = std::max(envelope, points[next_point] - interference(points[next_point], rt));
            ++next_point;
        }
        double q = std::min(p, std::max(envelope, p - interference(p, rt)));
        if (!(q > 0)) continue;
        const double floor_q = qmin_over_tasks(ts.sec_tasks, periods, p, rt.empty() ? 0.0 : min_delay);
        if (q < floor_q) continue;

        std::optional<std::pair<Millis, Millis>> found;  // (Q, delay)
        for (int piece = 0; piece < 256 && q >= floor_q; ++piece) {
            const auto d = exact_delay(q, p);
            if (!d) break;
            if (feasible({q, p}, *d)) {
                found = {q, *d};
                break;
            }
            if (*d <= min_delay + rta::kTimeEps) break;
            // Largest Q on a strictly lower delay piece.
            double lo = 0.0, hi = q;
            for (int it = 0; it < 60; ++it) {
                const double mid = 0.5 * (lo + hi);
                const auto dm = exact_delay(mid, p);
                if (dm && *dm < *d - rta::kTimeEps)
                    lo = mid;
                else
                    hi = mid;
            }
            q = lo;
        }
        if (!found) continue;
        ++out.feasible_periods;
        const double ratio = found->first / p;
        // Strictly better ratio wins; equal ratios keep the earlier (smaller) P.
        if (ratio > best_ratio * (1 + 1e-12) + 1e-15) {
            best_ratio = ratio;
            out.server = ServerParams{found->first, p};
            out.delay = found->second;
        }
    }
    return out;
}

}  // namespace rtsec::oracle

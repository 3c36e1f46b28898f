#include "rtsec/rta.hpp"

#include <cmath>

namespace rtsec::rta {

namespace {

// Hard stop for pathological inputs; every iterate grows by at least min C.
constexpr int kMaxFixedPointIterations = 1'000'000;

Millis interference(Millis window, std::span<const RtTask> hp) {
    Millis sum = 0.0;
    for (const auto& h : hp) sum += static_cast<double>(ceil_div(window, h.period)) * h.wcet;
    return sum;
}

}  // namespace

long long ceil_div(Millis x, Millis period) {
    const double q = x / period;
    return static_cast<long long>(std::ceil(q - 1e-9 * std::max(1.0, std::abs(q))));
}

ResponseTime response_time(const RtTask& task, std::span<const RtTask> hp) {
    ResponseTime r;
    Millis w = task.wcet;
    const Millis deadline = task.deadline();
    for (int k = 0; k < kMaxFixedPointIterations; ++k) {
        ++r.iterations;
        const Millis next = task.wcet + interference(w, hp);
        if (std::abs(next - w) <= kTimeEps) {
            r.value = next;
            r.schedulable = next <= deadline + kTimeEps;
            return r;
        }
        w = next;
        if (w > deadline + kTimeEps) break;
    }
    r.value = w;
    r.schedulable = false;
    return r;
}

RtaResult analyze(std::span<const RtTask> rt_sorted) {
    RtaResult out;
    out.response_times.reserve(rt_sorted.size());
    for (std::size_t i = 0; i < rt_sorted.size(); ++i) {
        const auto r = response_time(rt_sorted[i], rt_sorted.first(i));
        out.response_times.push_back(r.value);
        out.schedulable = out.schedulable && r.schedulable;
        out.iterations += r.iterations;
    }
    return out;
}

double rm_slack_bound(std::size_t m, std::size_t n, double rt_util) {
    const double k = static_cast<double>(m + n);
    return k * (std::pow(2.0, 1.0 / k) - 1.0) - rt_util;
}

double server_ub(std::size_t n, const ServerParams& server) {
    const double ratio = server.capacity / server.period;
    const double k = static_cast<double>(n);
    return k * (std::pow((3.0 - ratio) / (3.0 - 2.0 * ratio), 1.0 / k) - 1.0);
}

std::optional<Millis> busy_period_exact(const ServerParams& server, std::span<const RtTask> rt) {
    Millis w = server.capacity;
    for (int k = 0; k < kMaxFixedPointIterations; ++k) {
        if (w > server.period + kTimeEps) return std::nullopt;
        const Millis next = server.capacity + interference(w, rt);
        if (std::abs(next - w) <= kTimeEps) return next;
        w = next;
    }
    return std::nullopt;
}

std::optional<Millis> delay_exact(const ServerParams& server, std::span<const RtTask> rt) {
    const auto w = busy_period_exact(server, rt);
    if (!w) return std::nullopt;
    return interference(*w, rt);
}

Millis delay_approx(Millis server_period, std::span<const RtTask> rt) {
    Millis sum = 0.0;
    for (const auto& h : rt) sum += (server_period / h.period + 1.0) * h.wcet;
    return sum;
}

std::optional<SupplyModel> SupplyModel::build(const ServerParams& server, std::span<const RtTask> rt,
                                              DelayMode mode) {
    if (mode == DelayMode::approx) return SupplyModel{server, delay_approx(server.period, rt), mode};
    const auto d = delay_exact(server, rt);
    if (!d) return std::nullopt;
    return SupplyModel{server, *d, mode};
}

double lsbf(const SupplyModel& supply, Millis t) {
    const auto& s = supply.server;
    return (s.capacity / s.period) * (t - (s.period - s.capacity) - supply.delay);
}

Millis workload(Millis wcet, Millis deadline, std::span<const std::pair<Millis, Millis>> hp) {
    Millis sum = wcet;
    for (const auto& [c, t] : hp) sum += static_cast<double>(ceil_div(deadline, t)) * c;
    return sum;
}

std::vector<Millis> sec_workloads(std::span<const SecTask> sec, std::span<const Millis> periods) {
    std::vector<Millis> out(sec.size());
    std::vector<std::pair<Millis, Millis>> hp;
    hp.reserve(sec.size());
    for (std::size_t i = 0; i < sec.size(); ++i) {
        out[i] = workload(sec[i].wcet, periods[i], hp);
        hp.emplace_back(sec[i].wcet, periods[i]);
    }
    return out;
}

std::vector<bool> sec_schedulable_sufficient(std::span<const SecTask> sec, std::span<const Millis> periods,
                                             const SupplyModel& supply) {
    const auto demand = sec_workloads(sec, periods);
    std::vector<bool> out(sec.size());
    for (std::size_t i = 0; i < sec.size(); ++i)
        out[i] = lsbf(supply, periods[i]) >= demand[i] - kTimeEps * std::max(1.0, demand[i]);
    return out;
}

}  // namespace rtsec::rta

#pragma once

#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace rtsec {

// All times are milliseconds held as doubles.
using Millis = double;

/// Legacy hard real-time task with implicit deadline (D = T).
struct RtTask {
    std::string name;
    Millis wcet = 0.0;
    Millis period = 0.0;

    Millis deadline() const { return period; }
    double utilization() const { return wcet / period; }
};

/// Security monitoring task whose period may be chosen anywhere in [t_des, t_max].
struct SecTask {
    std::string name;
    Millis wcet = 0.0;
    Millis t_des = 0.0;
    Millis t_max = 0.0;
    double weight = 1.0;
    std::optional<std::string> criticality;
};

/// Validated analysis input.
///
/// `rt_tasks` is sorted rate-monotonically (stable, so equal periods keep
/// input order). `sec_tasks` order is the fixed priority order inside the
/// server, highest first.
struct TaskSet {
    std::vector<RtTask> rt_tasks;
    std::vector<SecTask> sec_tasks;

    std::vector<Millis> desired_periods() const;
    std::vector<Millis> max_periods() const;
    double rt_utilization() const;
};

struct ServerParams {
    Millis capacity = 0.0;
    Millis period = 0.0;

    double utilization() const { return capacity / period; }
};

/// Raised for malformed or invalid input. `path()` names the offending field,
/// e.g. "sec_tasks[2].t_des".
class InputError : public std::runtime_error {
public:
    InputError(std::string path, const std::string& message)
        : std::runtime_error(path.empty() ? message : path + ": " + message), path_(std::move(path)) {}

    const std::string& path() const { return path_; }

private:
    std::string path_;
};

struct ParseOptions {
    // Re-order security tasks by ascending t_des instead of keeping input order.
    bool rm_order_security = false;
};

TaskSet parse_taskset(std::string_view json_text, const ParseOptions& options = {});
TaskSet load_taskset(const std::string& path, const ParseOptions& options = {});
std::string serialize_taskset(const TaskSet& ts, int indent = 2);

/// Checks every invariant and applies the priority ordering. Throws InputError.
void validate(TaskSet& ts, const ParseOptions& options = {});

/// Throws InputError unless 0 < capacity <= period.
void validate(const ServerParams& server);

double total_utilization(std::span<const std::pair<Millis, Millis>> wcet_period);
double total_utilization(std::span<const RtTask> tasks);

}  // namespace rtsec

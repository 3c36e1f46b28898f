#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "rtsec/optimizer.hpp"
#include "rtsec/oracle.hpp"
#include "rtsec/simulator.hpp"
#include "rtsec/workload.hpp"

namespace rtsec::experiment {

enum class Figure { sched, quality, tightness };

Figure parse_figure(const std::string& s);  // throws std::invalid_argument
const char* to_string(Figure f);

/// Worker count: RTSS_THREADS when set to a positive integer, else the hardware concurrency.
unsigned thread_count();

/// Runs fn(i) for i in [0, count) on `threads` workers. fn must only write its own slot.
void parallel_for(std::size_t count, unsigned threads, const std::function<void(std::size_t)>& fn);

/// Periods handed to the exhaustive search.
enum class OraclePeriods { gp, max, desired };
OraclePeriods parse_oracle_periods(const std::string& s);  // throws std::invalid_argument

struct ExperimentConfig {
    Figure figure = Figure::sched;
    std::vector<int> groups;  // empty: 0..8 for sched/quality, 0..3 for tightness
    int sets_per_group = 100;
    std::uint64_t seed = 1;
    oracle::SearchConfig search;
    opt::CoOptimizeOptions co;
    OraclePeriods oracle_periods = OraclePeriods::gp;
    workload::GenSpec base;  // ranges other than the utilization being swept
    unsigned threads = 0;    // 0: thread_count()
};

std::vector<int> default_groups(Figure f);

struct SetResult {
    std::size_t set_id = 0;
    int group = 0;
    std::uint64_t seed = 0;
    double rt_util = 0.0;
    double sec_util = 0.0;
    std::size_t m = 0;
    std::size_t n = 0;
    bool gp_schedulable = false;
    bool oracle_run = false;
    bool oracle_schedulable = false;
    double gp_util = 0.0;
    double oracle_util = 0.0;
    Millis gp_period = 0.0;
    double xi = 0.0;
    double eta = 0.0;
    int iterations = 0;
    int max_condensations = 0;
    bool condensation_converged = false;
    int server_solves = 0;
    int server_solves_converged = 0;
};

struct GroupRow {
    int group = 0;
    workload::Range range;
    std::size_t sets_total = 0;
    std::size_t sched_gp = 0;
    std::size_t sched_oracle = 0;
    double mean_util_diff = 0.0;  // over sets both schemes schedule
    double mean_xi = 0.0;         // over GP-schedulable sets
    double mean_iterations = 0.0; // over GP-schedulable sets
};

struct ExperimentOutput {
    std::vector<SetResult> sets;
    std::vector<GroupRow> groups;
};

/// Evaluates one generated set. In `gp` mode the oracle sizes the server for
/// the GP periods when GP succeeds and for t_max otherwise.
SetResult evaluate(const TaskSet& ts, bool run_oracle, const oracle::SearchConfig& search,
                   const opt::CoOptimizeOptions& co, OraclePeriods oracle_periods = OraclePeriods::gp);

ExperimentOutput run(const ExperimentConfig& cfg);

/// Period and server assignment replayed by the attack experiment.
struct Assignment {
    std::vector<Millis> periods;
    ServerParams server;
};

struct AttackRun {
    std::size_t run = 0;
    std::string task;
    Millis attack_time = 0.0;
    std::optional<Millis> adapted;   // nullopt: no detecting job before the horizon
    std::optional<Millis> baseline;
};

struct AttackSummary {
    std::size_t runs = 0;
    std::size_t compared = 0;   // runs where both latencies are known
    std::size_t reversals = 0;  // baseline strictly faster
    double mean_adapted = 0.0;  // over compared runs
    double mean_baseline = 0.0;
};

/// Injects `runs` attacks at seeded uniform times against seeded uniform
/// security tasks and measures detection latency under both assignments with
/// synchronous releases. Attack times stay one longest period short of the
/// horizon, which defaults to 20 times the longest security period.
std::vector<AttackRun> attack_experiment(const TaskSet& ts, const Assignment& adapted, const Assignment& baseline,
                                         int runs, std::uint64_t seed, std::optional<Millis> horizon = std::nullopt);
AttackSummary summarize(const std::vector<AttackRun>& runs);

/// run,task,attack_time,latency_adapted,latency_baseline (empty when censored)
std::string attack_csv(const std::vector<AttackRun>& runs);

/// util_group,sets_total,sched_gp,sched_oracle,mean_util_diff,mean_xi,mean_iterations
std::string groups_csv(const std::vector<GroupRow>& rows);
std::string sets_csv(const std::vector<SetResult>& rows);

}  // namespace rtsec::experiment

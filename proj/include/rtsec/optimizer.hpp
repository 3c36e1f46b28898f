#pragma once

#include <optional>
#include <string>
#include <vector>

#include "rtsec/gp.hpp"
#include "rtsec/rta.hpp"
#include "rtsec/taskmodel.hpp"

namespace rtsec::opt {

/// eta = sum w_i t_des_i / T_i
double eta(const TaskSet& ts, const std::vector<Millis>& periods);

/// ||T - t_des||_2 / ||t_max - t_des||_2. Throws std::invalid_argument when t_max == t_des.
double xi_metric(const std::vector<Millis>& periods, const std::vector<Millis>& t_des, const std::vector<Millis>& t_max);

/// GP variable name of the i-th security period.
std::string period_var(std::size_t i);

struct PeriodProblemOptions {
    // Raise every lower bound to 3P - 2Q (server mode only).
    bool enforce_min_period = true;
};

struct BuiltProblem {
    gp::GpProblem problem;
    bool infeasible = false;  // decided before solving
    std::string reason;
};

/// With a server: minimize sum T_i / (w_i t_des_i) s.t. sum C_i / T_i <= UB(Q, P).
/// Without one: the same objective under the RM slack bound, with T_i no
/// smaller than the largest real-time period.
BuiltProblem build_period_problem(const TaskSet& ts, const std::optional<ServerParams>& server,
                                  const PeriodProblemOptions& options = {});

struct PeriodSolution {
    std::vector<Millis> periods;
    double eta = 0.0;
    double surrogate_value = 0.0;
    gp::Status status = gp::Status::infeasible;
    std::string reason;

    bool ok() const { return status == gp::Status::optimal; }
};

PeriodSolution solve_periods(const TaskSet& ts, const std::optional<ServerParams>& server,
                             const PeriodProblemOptions& options = {}, const gp::SolverSettings& settings = {});

/// Server sizing for fixed periods: minimize P/Q subject to the server fitting
/// below the real-time tasks and, per security task, the condensed supply
/// constraint anchored at Q = y0[i].
gp::GpProblem build_server_problem(const TaskSet& ts, const std::vector<Millis>& periods, const std::vector<double>& y0);

struct ServerSolution {
    std::optional<ServerParams> server;
    gp::Status status = gp::Status::infeasible;
    int condensation_iterations = 0;
    bool condensation_converged = false;
    bool loop_started = false;  // the first condensed GP was solved
    std::string reason;

    bool ok() const { return server.has_value(); }
};

struct ServerSolveOptions {
    double initial_anchor = 1.0;
    int max_condensations = 10;
    double tolerance = 1e-9;  // relative change of the objective
};

/// Repeats build_server_problem with y0 := Q until the objective settles; the
/// result is checked against the un-condensed constraints.
ServerSolution solve_server_params(const TaskSet& ts, const std::vector<Millis>& periods,
                                   const ServerSolveOptions& options = {}, const gp::SolverSettings& settings = {});

/// Independent post-hoc checks of a candidate answer.
struct SolutionCheck {
    bool periods_in_bounds = false;
    bool server_valid = false;           // 0 < Q <= P
    bool server_fits = false;            // Q + approximate delay <= P
    std::vector<bool> supply_ok;         // lsbf(T_i) >= I_i, approximate delay
    bool supply_all = false;
    bool utilization_bound_ok = false;   // sum C/T <= UB(Q, P)
    bool min_period_bound_ok = false;    // min T >= 3P - 2Q

    bool sound() const { return periods_in_bounds && server_valid && server_fits && supply_all; }
};

SolutionCheck check_solution(const TaskSet& ts, const std::vector<Millis>& periods, const ServerParams& server);

struct TraceEntry {
    int iteration = 0;
    double eta = 0.0;
    ServerParams server;
    std::vector<Millis> periods;
};

struct CoOptimizeOptions {
    double epsilon = 1e-9;
    int j_max = 20;
    // Add min T >= 3P - 2Q to the period problem and demand both bound checks
    // on the final answer.
    bool strict_bounds = false;
    // Joint successive refinement over (T, Q, P) after the alternating loop.
    bool refine = true;
    int refine_max = 30;
    gp::SolverSettings solver;
};

struct JointSolution {
    bool schedulable = false;
    bool solver_failure = false;  // the initial server solve hit the iteration cap
    std::string reason;
    std::vector<Millis> periods;
    ServerParams server;
    double eta = 0.0;
    double xi = 0.0;
    int iterations = 0;  // outer iterations of the alternating loop, including the initial one
    std::vector<TraceEntry> trace;
    int refine_iterations = 0;
    std::vector<TraceEntry> refine_trace;
    int max_condensation_iterations = 0;
    bool condensation_converged = true;
    int server_solves = 0;            // calls of solve_server_params that reached the condensation loop
    int server_solves_converged = 0;  // of which the condensation loop settled
    SolutionCheck check;
};

/// Alternates period adaptation and server sizing starting from t_max, then
/// optionally refines jointly. Never returns an answer that fails check_solution().sound().
JointSolution co_optimize(const TaskSet& ts, const CoOptimizeOptions& options = {});

}  // namespace rtsec::opt

#include "rtsec/optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace rtsec::opt {

using gp::Monomial;
using gp::Posynomial;

namespace {

constexpr double kCheckEps = 1e-9;

Monomial var(const std::string& name, double e = 1.0) { return Monomial::variable(name, e); }
Monomial constant(double c) { return Monomial::constant(c); }

double rt_wcet_sum(const TaskSet& ts) {
    double s = 0.0;
    for (const auto& t : ts.rt_tasks) s += t.wcet;
    return s;
}

std::vector<Millis> read_periods(const gp::Point& values, std::size_t n) {
    std::vector<Millis> out(n);
    for (std::size_t i = 0; i < n; ++i) out[i] = values.at(period_var(i));
    return out;
}

// Bounds for Q and P. Both are below 2 max(T) whenever the supply constraint holds.
std::pair<double, double> server_box(const std::vector<Millis>& periods) {
    const double t_min = *std::min_element(periods.begin(), periods.end());
    const double t_max = *std::max_element(periods.begin(), periods.end());
    return {1e-6 * t_min, 2.0 * t_max};
}

// (1 + U_R) P Q + I P + (sum C_R) Q, the left side of Q (Q + T) >= ... after expansion.
Posynomial supply_demand(double rt_util, double rt_wcet, double workload_i) {
    Posynomial lhs = (1.0 + rt_util) * var("P") * var("Q");
    lhs += workload_i * var("P");
    if (rt_wcet > 0) lhs += rt_wcet * var("Q");
    return lhs;
}

// (Q + sum C_R) / ((1 - U_R) P) <= 1
Posynomial server_fit(double rt_util, double rt_wcet) {
    const double room = 1.0 - rt_util;
    Posynomial c = (1.0 / room) * var("Q") * var("P", -1);
    if (rt_wcet > 0) c += (rt_wcet / room) * var("P", -1);
    return c;
}

}  // namespace

double eta(const TaskSet& ts, const std::vector<Millis>& periods) {
    double s = 0.0;
    for (std::size_t i = 0; i < ts.sec_tasks.size(); ++i) s += ts.sec_tasks[i].weight * ts.sec_tasks[i].t_des / periods[i];
    return s;
}

double xi_metric(const std::vector<Millis>& periods, const std::vector<Millis>& t_des, const std::vector<Millis>& t_max) {
    if (periods.size() != t_des.size() || t_des.size() != t_max.size())
        throw std::invalid_argument("xi_metric: vectors differ in length");
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < periods.size(); ++i) {
        num += (periods[i] - t_des[i]) * (periods[i] - t_des[i]);
        den += (t_max[i] - t_des[i]) * (t_max[i] - t_des[i]);
    }
    if (den == 0.0) throw std::invalid_argument("xi_metric: t_max equals t_des for every task");
    return std::sqrt(num / den);
}

std::string period_var(std::size_t i) { return "T" + std::to_string(i); }

BuiltProblem build_period_problem(const TaskSet& ts, const std::optional<ServerParams>& server,
                                  const PeriodProblemOptions& options) {
    BuiltProblem out;
    const std::size_t n = ts.sec_tasks.size();
    if (n == 0) throw std::invalid_argument("no security tasks");

    double bound = 0.0;
    double floor_period = 0.0;
    if (server) {
        validate(*server);
        bound = rta::server_ub(n, *server);
        if (options.enforce_min_period) floor_period = 3.0 * server->period - 2.0 * server->capacity;
    } else {
        bound = rta::rm_slack_bound(ts.rt_tasks.size(), n, ts.rt_utilization());
        for (const auto& t : ts.rt_tasks) floor_period = std::max(floor_period, t.period);
    }

    Posynomial load;
    for (std::size_t i = 0; i < n; ++i) {
        const auto& s = ts.sec_tasks[i];
        const std::string v = period_var(i);
        const double lo = std::max(s.t_des, floor_period);
        out.problem.variables.push_back({v, std::min(lo, s.t_max), s.t_max, {}});
        if (lo > s.t_max) {
            out.infeasible = true;
            out.reason = "lower period bound exceeds t_max for " + s.name;
        }
        out.problem.objective += (1.0 / (s.weight * s.t_des)) * var(v);
        load += s.wcet * var(v, -1);
    }
    if (bound <= 0) {
        out.infeasible = true;
        out.reason = server ? "server utilization bound is not positive" : "no RM utilization left for security tasks";
        return out;
    }
    Posynomial c;
    for (const auto& m : load.terms()) c += (1.0 / bound) * m;
    out.problem.constraints.push_back(c);
    out.problem.labels.push_back(server ? "utilization bound" : "rm slack");
    return out;
}

PeriodSolution solve_periods(const TaskSet& ts, const std::optional<ServerParams>& server,
                             const PeriodProblemOptions& options, const gp::SolverSettings& settings) {
    PeriodSolution out;
    auto built = build_period_problem(ts, server, options);
    if (built.infeasible) {
        out.reason = built.reason;
        return out;
    }
    const auto sol = gp::solve(built.problem, settings);
    out.status = sol.status;
    if (sol.status != gp::Status::optimal) {
        out.reason = std::string("period problem ") + gp::to_string(sol.status);
        return out;
    }
    out.periods = read_periods(sol.values, ts.sec_tasks.size());
    for (std::size_t i = 0; i < out.periods.size(); ++i)
        out.periods[i] = std::clamp(out.periods[i], ts.sec_tasks[i].t_des, ts.sec_tasks[i].t_max);
    out.eta = eta(ts, out.periods);
    out.surrogate_value = sol.objective_value;
    return out;
}

gp::GpProblem build_server_problem(const TaskSet& ts, const std::vector<Millis>& periods, const std::vector<double>& y0) {
    const std::size_t n = ts.sec_tasks.size();
    if (n == 0) throw std::invalid_argument("no security tasks");
    if (periods.size() != n || y0.size() != n) throw std::invalid_argument("one period and anchor per security task");
    const double u = ts.rt_utilization();
    const double c_rt = rt_wcet_sum(ts);

    gp::GpProblem p;
    const auto [lo, hi] = server_box(periods);
    p.variables = {{"Q", lo, hi, {}}, {"P", lo, hi, {}}};
    p.objective = var("P") * var("Q", -1);
    if (u >= 1.0) {
        // No room at all: encode as a constant violated constraint.
        p.constraints.push_back(constant(2.0));
        p.labels.push_back("server fit");
        return p;
    }
    p.constraints.push_back(server_fit(u, c_rt));
    p.labels.push_back("server fit");

    const auto demand = rta::sec_workloads(ts.sec_tasks, periods);
    for (std::size_t i = 0; i < n; ++i) {
        const Monomial g = gp::condense(var("Q") + constant(periods[i]), {{"Q", y0[i]}});
        p.constraints.push_back(supply_demand(u, c_rt, demand[i]) / (var("Q") * g));
        p.labels.push_back("supply " + ts.sec_tasks[i].name);
    }
    return p;
}

SolutionCheck check_solution(const TaskSet& ts, const std::vector<Millis>& periods, const ServerParams& server) {
    SolutionCheck c;
    const std::size_t n = ts.sec_tasks.size();
    c.periods_in_bounds = periods.size() == n;
    for (std::size_t i = 0; c.periods_in_bounds && i < n; ++i) {
        const auto& s = ts.sec_tasks[i];
        c.periods_in_bounds = periods[i] >= s.t_des * (1 - 1e-12) && periods[i] <= s.t_max * (1 + 1e-12);
    }
    c.server_valid = server.capacity > 0 && server.capacity <= server.period * (1 + 1e-12);
    if (!c.periods_in_bounds || !c.server_valid) return c;

    const double delay = rta::delay_approx(server.period, ts.rt_tasks);
    c.server_fits = server.capacity + delay <= server.period + kCheckEps * std::max(1.0, server.period);
    c.supply_ok = rta::sec_schedulable_sufficient(ts.sec_tasks, periods, {server, delay, rta::DelayMode::approx});
    c.supply_all = std::all_of(c.supply_ok.begin(), c.supply_ok.end(), [](bool b) { return b; });

    double load = 0.0;
    for (std::size_t i = 0; i < n; ++i) load += ts.sec_tasks[i].wcet / periods[i];
    c.utilization_bound_ok = load <= rta::server_ub(n, server) + kCheckEps;
    c.min_period_bound_ok =
        *std::min_element(periods.begin(), periods.end()) >= 3 * server.period - 2 * server.capacity - kCheckEps;
    return c;
}

ServerSolution solve_server_params(const TaskSet& ts, const std::vector<Millis>& periods,
                                   const ServerSolveOptions& options, const gp::SolverSettings& settings) {
    ServerSolution out;
    std::vector<double> y0(ts.sec_tasks.size(), options.initial_anchor);
    double last_objective = std::numeric_limits<double>::infinity();
    for (int k = 0; k < options.max_condensations; ++k) {
        const auto problem = build_server_problem(ts, periods, y0);
        const auto sol = gp::solve(problem, settings);
        out.condensation_iterations = k + 1;
        if (sol.status != gp::Status::optimal) {
            if (!out.server) {
                out.status = sol.status;
                out.reason = std::string("server problem ") + gp::to_string(sol.status);
            }
            break;
        }
        out.loop_started = true;
        ServerParams s{sol.values.at("Q"), sol.values.at("P")};
        s.capacity = std::min(s.capacity, s.period);
        if (check_solution(ts, periods, s).sound()) {
            out.server = s;
            out.status = gp::Status::optimal;
        }
        const double change = std::abs(sol.objective_value - last_objective) / std::max(1.0, std::abs(sol.objective_value));
        last_objective = sol.objective_value;
        std::fill(y0.begin(), y0.end(), s.capacity);
        if (change < options.tolerance) {
            out.condensation_converged = true;
            break;
        }
    }
    if (!out.server && out.reason.empty()) out.reason = "server solution failed validation";
    return out;
}

namespace {

struct Candidate {
    std::vector<Millis> periods;
    ServerParams server;
    double eta = 0.0;
};

// One step of the joint refinement: condense everything at `at` and solve for
// (T, Q, P). `bump` raises the frozen ceiling counts by one where flagged.
std::optional<Candidate> refine_step(const TaskSet& ts, const Candidate& at, const std::vector<std::vector<bool>>& bump,
                                     bool& trust_active, const gp::SolverSettings& settings) {
    const std::size_t n = ts.sec_tasks.size();
    const double u = ts.rt_utilization();
    const double c_rt = rt_wcet_sum(ts);

    gp::GpProblem p;
    gp::Point anchor{{"Q", at.server.capacity}, {"P", at.server.period}};
    Posynomial tight;
    for (std::size_t i = 0; i < n; ++i) {
        const auto& s = ts.sec_tasks[i];
        p.variables.push_back({period_var(i), s.t_des, s.t_max, {at.periods[i]}});
        anchor[period_var(i)] = at.periods[i];
        tight += (s.weight * s.t_des) * var(period_var(i), -1);
    }
    const auto [lo, hi] = server_box(ts.max_periods());
    p.variables.push_back({"Q", lo, hi, {at.server.capacity}});
    p.variables.push_back({"P", lo, hi, {at.server.period}});
    p.objective = gp::condense(tight, anchor).pow(-1.0);
    p.constraints.push_back(server_fit(u, c_rt));

    // Frozen ceilings k_ih = ceil(T_i / T_h), valid while T_i <= k_ih T_h.
    std::vector<std::vector<long long>> k(n);
    for (std::size_t i = 0; i < n; ++i) {
        double workload_i = ts.sec_tasks[i].wcet;
        for (std::size_t h = 0; h < i; ++h) {
            long long kh = rta::ceil_div(at.periods[i], at.periods[h]) + (bump[i][h] ? 1 : 0);
            k[i].push_back(kh);
            workload_i += static_cast<double>(kh) * ts.sec_tasks[h].wcet;
            p.constraints.push_back((1.0 / static_cast<double>(kh)) * var(period_var(i)) * var(period_var(h), -1));
        }
        const Posynomial capacity_side = var("Q", 2.0) + var("Q") * var(period_var(i));
        const Monomial g = gp::condense(capacity_side, anchor);
        p.constraints.push_back(supply_demand(u, c_rt, workload_i) / g);
    }

    const auto sol = gp::solve(p, settings);
    if (sol.status != gp::Status::optimal) return std::nullopt;
    Candidate c;
    c.periods = read_periods(sol.values, n);
    for (std::size_t i = 0; i < n; ++i) c.periods[i] = std::clamp(c.periods[i], ts.sec_tasks[i].t_des, ts.sec_tasks[i].t_max);
    c.server = {std::min(sol.values.at("Q"), sol.values.at("P")), sol.values.at("P")};
    c.eta = eta(ts, c.periods);

    trust_active = false;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t h = 0; h < i; ++h)
            if (c.periods[i] >= static_cast<double>(k[i][h]) * c.periods[h] * (1 - 1e-6)) trust_active = true;
    if (!check_solution(ts, c.periods, c.server).sound()) return std::nullopt;
    return c;
}

std::vector<std::vector<bool>> active_trust(const TaskSet& ts, const Candidate& c) {
    const std::size_t n = ts.sec_tasks.size();
    std::vector<std::vector<bool>> out(n, std::vector<bool>(n, false));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t h = 0; h < i; ++h) {
            const double k = static_cast<double>(rta::ceil_div(c.periods[i], c.periods[h]));
            out[i][h] = c.periods[i] >= k * c.periods[h] * (1 - 1e-6);
        }
    return out;
}

}  // namespace

JointSolution co_optimize(const TaskSet& ts, const CoOptimizeOptions& options) {
    if (ts.sec_tasks.empty()) throw std::invalid_argument("no security tasks");
    if (options.j_max < 1) throw std::invalid_argument("j_max must be at least 1");
    JointSolution out;
    const PeriodProblemOptions period_opts{options.strict_bounds};

    auto track = [&](const ServerSolution& s) {
        out.max_condensation_iterations = std::max(out.max_condensation_iterations, s.condensation_iterations);
        out.condensation_converged = out.condensation_converged && s.condensation_converged;
        // A solve whose first GP is already infeasible never starts the condensation loop.
        if (!s.loop_started) return;
        ++out.server_solves;
        if (s.condensation_converged) ++out.server_solves_converged;
    };

    Candidate best;
    best.periods = ts.max_periods();
    const auto first = solve_server_params(ts, best.periods, {}, options.solver);
    track(first);
    if (!first.ok()) {
        out.reason = first.reason.empty() ? "no feasible server at maximum periods" : first.reason;
        out.solver_failure = first.status == gp::Status::max_iter;
        out.iterations = 1;
        return out;
    }
    best.server = *first.server;
    best.eta = eta(ts, best.periods);
    out.trace.push_back({1, best.eta, best.server, best.periods});

    int j = 1;
    double eta_prev = best.eta;
    while (j < options.j_max) {
        ++j;
        const auto ps = solve_periods(ts, best.server, period_opts, options.solver);
        if (!ps.ok()) break;
        const auto ss = solve_server_params(ts, ps.periods, {}, options.solver);
        track(ss);
        if (!ss.ok()) break;
        best = {ps.periods, *ss.server, ps.eta};
        out.trace.push_back({j, best.eta, best.server, best.periods});
        if (std::abs(best.eta - eta_prev) <= options.epsilon) break;
        eta_prev = best.eta;
    }
    out.iterations = static_cast<int>(out.trace.size());

    if (options.refine) {
        const std::vector<std::vector<bool>> none(ts.sec_tasks.size(), std::vector<bool>(ts.sec_tasks.size(), false));
        for (int r = 0; r < options.refine_max; ++r) {
            bool trust_active = false;
            auto step = refine_step(ts, best, none, trust_active, options.solver);
            if (step && trust_active) {
                // A frozen ceiling is binding; try the neighbouring cell too.
                bool unused = false;
                auto alt = refine_step(ts, *step, active_trust(ts, *step), unused, options.solver);
                if (alt && alt->eta > step->eta) step = alt;
            }
            ++out.refine_iterations;
            if (!step || step->eta <= best.eta * (1 + 1e-9)) break;
            best = *step;
            out.refine_trace.push_back({r + 1, best.eta, best.server, best.periods});
        }
        // The refinement only cares about eta; size the server properly for the final periods.
        ServerSolveOptions anchored;
        anchored.initial_anchor = best.server.capacity;
        const auto final_server = solve_server_params(ts, best.periods, anchored, options.solver);
        track(final_server);
        if (final_server.ok() && final_server.server->utilization() >= best.server.utilization()) best.server = *final_server.server;
    }

    out.periods = best.periods;
    out.server = best.server;
    out.eta = eta(ts, out.periods);
    try {
        out.xi = xi_metric(out.periods, ts.desired_periods(), ts.max_periods());
    } catch (const std::invalid_argument&) {
        out.xi = 0.0;
    }
    out.check = check_solution(ts, out.periods, out.server);
    out.schedulable = out.check.sound();
    if (!out.schedulable) {
        out.reason = "final answer failed validation";
    } else if (options.strict_bounds && !(out.check.utilization_bound_ok && out.check.min_period_bound_ok)) {
        out.schedulable = false;
        out.reason = !out.check.min_period_bound_ok ? "smallest period below 3P - 2Q" : "utilization bound exceeded";
    }
    return out;
}

}  // namespace rtsec::opt

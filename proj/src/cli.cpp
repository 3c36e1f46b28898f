#include "rtsec/cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <stdexcept>

#include <CLI11.hpp>
#include <json.hpp>

#include "rtsec/experiment.hpp"
#include "rtsec/oracle.hpp"
#include "rtsec/rta.hpp"
#include "rtsec/simulator.hpp"
#include "rtsec/workload.hpp"

namespace rtsec::cli {

using ojson = nlohmann::ordered_json;

namespace {

ojson server_json(const ServerParams& s) {
    return {{"capacity", s.capacity}, {"period", s.period}, {"utilization", s.utilization()}};
}

ojson periods_json(const TaskSet& ts, const std::vector<Millis>& periods) {
    ojson o = ojson::object();
    for (std::size_t i = 0; i < periods.size() && i < ts.sec_tasks.size(); ++i) o[ts.sec_tasks[i].name] = periods[i];
    return o;
}

ojson trace_json(const std::vector<opt::TraceEntry>& trace) {
    ojson arr = ojson::array();
    for (const auto& e : trace)
        arr.push_back({{"iteration", e.iteration}, {"eta", e.eta}, {"server", server_json(e.server)}, {"periods", e.periods}});
    return arr;
}

std::string fmt(double v, const char* spec = "%.6f") {
    char buf[64];
    std::snprintf(buf, sizeof buf, spec, v);
    return buf;
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw InputError("", "cannot write '" + path + "'");
    f << content;
    if (!f) throw InputError("", "failed writing '" + path + "'");
}

std::string read_file(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw InputError("", "cannot open '" + path + "'");
    std::stringstream buf;
    buf << f.rdbuf();
    return buf.str();
}

workload::Range parse_range(const std::string& text, const char* what) {
    std::string s = text;
    std::replace(s.begin(), s.end(), ':', ',');
    const auto comma = s.find(',');
    try {
        if (comma == std::string::npos) throw std::invalid_argument("");
        std::size_t used = 0;
        workload::Range r{std::stod(s.substr(0, comma), &used), 0.0};
        const std::string hi = s.substr(comma + 1);
        r.hi = std::stod(hi, &used);
        if (used != hi.size()) throw std::invalid_argument("");
        return r;
    } catch (const std::exception&) {
        throw InputError(what, "expected LO,HI but got '" + text + "'");
    }
}

// "0-8", "0,2,5" or a mix such as "0-2,6".
std::vector<int> parse_groups(const std::string& text) {
    std::vector<int> out;
    std::stringstream ss(text);
    std::string item;
    auto to_int = [&](const std::string& s) {
        std::size_t used = 0;
        int v = 0;
        try {
            v = std::stoi(s, &used);
        } catch (const std::exception&) {
            used = 0;
        }
        if (used == 0 || used != s.size()) throw InputError("--groups", "bad group list '" + text + "'");
        return v;
    };
    while (std::getline(ss, item, ',')) {
        const auto dash = item.find('-', 1);
        if (dash == std::string::npos) {
            out.push_back(to_int(item));
        } else {
            const int lo = to_int(item.substr(0, dash)), hi = to_int(item.substr(dash + 1));
            if (lo > hi) throw InputError("--groups", "empty range '" + item + "'");
            for (int g = lo; g <= hi; ++g) out.push_back(g);
        }
    }
    if (out.empty()) throw InputError("--groups", "no groups given");
    for (int g : out)
        if (g < 0 || g > 9) throw InputError("--groups", "group " + std::to_string(g) + " outside 0..9");
    return out;
}

ParseOptions parse_options(const std::string& sec_order) {
    ParseOptions p;
    p.rm_order_security = sec_order == "rm";
    return p;
}

// Security tasks become ordinary lowest-priority periodic tasks.
TaskSet without_server(const TaskSet& ts, const std::vector<Millis>& periods) {
    TaskSet flat;
    flat.rt_tasks = ts.rt_tasks;
    for (std::size_t i = 0; i < ts.sec_tasks.size(); ++i)
        flat.rt_tasks.push_back({ts.sec_tasks[i].name, ts.sec_tasks[i].wcet, periods[i]});
    validate(flat);
    return flat;
}

struct Common {
    std::string taskset;
    std::string sec_order = "input";

    void add(CLI::App* sub) {
        sub->add_option("taskset", taskset, "Task-set JSON file")->required();
        sub->add_option("--sec-order", sec_order, "Priority order of the security tasks")
            ->check(CLI::IsMember({"input", "rm"}))
            ->capture_default_str();
    }
    TaskSet load() const { return load_taskset(taskset, parse_options(sec_order)); }
};

int cmd_analyze(const Common& c, std::ostream& out) {
    const TaskSet ts = c.load();
    const auto res = rta::analyze(ts.rt_tasks);
    out << "task,wcet,period,response_time,meets_deadline\n";
    for (std::size_t i = 0; i < ts.rt_tasks.size(); ++i) {
        const auto& t = ts.rt_tasks[i];
        const bool ok = res.response_times[i] <= t.deadline() + rta::kTimeEps;
        out << t.name << ',' << fmt(t.wcet) << ',' << fmt(t.period) << ',' << (ok ? fmt(res.response_times[i]) : "")
            << ',' << (ok ? "yes" : "no") << '\n';
    }
    out << "verdict: " << (res.schedulable ? "schedulable" : "unschedulable") << '\n';
    out << "rt_utilization: " << fmt(ts.rt_utilization()) << '\n';
    out << "rm_slack: " << fmt(rta::rm_slack_bound(ts.rt_tasks.size(), ts.sec_tasks.size(), ts.rt_utilization())) << '\n';
    return kOk;
}

struct OptimizeArgs {
    double epsilon = 1e-9;
    int j_max = 20;
    std::string mode = "server";
    std::string out;
    bool strict = false;
    bool no_refine = false;
};

int cmd_optimize(const Common& c, const OptimizeArgs& a, std::ostream& out, std::ostream& err) {
    const TaskSet ts = c.load();
    if (ts.sec_tasks.empty()) throw InputError("sec_tasks", "nothing to optimize without security tasks");
    if (a.j_max < 1) throw InputError("--jmax", "must be at least 1");
    if (!(a.epsilon >= 0)) throw InputError("--epsilon", "must be non-negative");
    std::string doc;
    int code = kOk;
    if (a.mode == "noserver") {
        const auto sol = opt::solve_periods(ts, std::nullopt);
        doc = solution_json(ts, sol);
        if (!sol.ok()) code = sol.status == gp::Status::max_iter ? kSolverFailure : kUnschedulable;
        if (!sol.ok()) err << "unschedulable: " << sol.reason << '\n';
    } else {
        opt::CoOptimizeOptions o;
        o.epsilon = a.epsilon;
        o.j_max = a.j_max;
        o.strict_bounds = a.strict;
        o.refine = !a.no_refine;
        const auto sol = opt::co_optimize(ts, o);
        doc = solution_json(ts, sol);
        if (!sol.schedulable) {
            code = sol.solver_failure ? kSolverFailure : kUnschedulable;
            err << (sol.solver_failure ? "solver failure: " : "unschedulable: ") << sol.reason << '\n';
        }
    }
    if (a.out.empty())
        out << doc << '\n';
    else
        write_file(a.out, doc + "\n");
    return code;
}

struct SearchArgs {
    std::string solution;
    double p_max = 2500.0;
    double delta = 0.5;
    std::string out;
};

int cmd_search(const Common& c, const SearchArgs& a, std::ostream& out) {
    const TaskSet ts = c.load();
    if (ts.sec_tasks.empty()) throw InputError("sec_tasks", "no security tasks to host");
    if (!(a.p_max > 0) || !(a.delta > 0)) throw InputError("--pmax/--delta", "must be positive");
    std::vector<Millis> periods = ts.max_periods();
    if (!a.solution.empty()) periods = parse_solution(ts, read_file(a.solution)).periods;
    const auto res = oracle::exhaustive_search(ts, periods, {a.p_max, a.delta});
    ojson doc;
    doc["schedulable"] = res.server.has_value();
    doc["periods"] = periods_json(ts, periods);
    doc["server"] = res.server ? server_json(*res.server) : ojson(nullptr);
    doc["delay"] = res.delay;
    doc["feasible_periods"] = res.feasible_periods;
    doc["p_max"] = a.p_max;
    doc["granularity"] = a.delta;
    if (a.out.empty())
        out << doc.dump(2) << '\n';
    else
        write_file(a.out, doc.dump(2) + "\n");
    return res.server ? kOk : kUnschedulable;
}

struct SimulateArgs {
    std::string solution;
    std::optional<double> horizon;
    std::string release = "synchronous";
    std::uint64_t seed = 1;
    bool guard = false;
    std::string trace_out;
    int attacks = 0;
    std::string attack_out;
};

int cmd_simulate(const Common& c, const SimulateArgs& a, std::ostream& out) {
    const TaskSet ts = c.load();
    const auto sol = parse_solution(ts, read_file(a.solution));
    if (a.horizon && !(*a.horizon > 0)) throw InputError("--horizon", "must be positive");

    sim::SimConfig cfg;
    cfg.horizon = a.horizon;
    cfg.release = a.release == "sporadic" ? sim::ReleasePattern::sporadic : sim::ReleasePattern::synchronous;
    cfg.seed = a.seed;
    cfg.replenish_guard = a.guard;
    cfg.record_events = !a.trace_out.empty();
    sim::SimTrace trace;
    std::size_t rt_misses = 0, sec_misses = 0;
    std::vector<std::pair<std::string, Millis>> worst;
    if (sol.server) {
        cfg.server = sol.server;
        cfg.assigned_periods = sol.periods;
        trace = sim::simulate(ts, cfg);
        rt_misses = trace.rt_misses;
        sec_misses = trace.sec_misses;
        for (std::size_t i = 0; i < ts.rt_tasks.size(); ++i) worst.emplace_back(ts.rt_tasks[i].name, trace.worst_rt_response[i]);
        for (std::size_t i = 0; i < ts.sec_tasks.size(); ++i) worst.emplace_back(ts.sec_tasks[i].name, trace.worst_sec_response[i]);
    } else {
        const TaskSet flat = without_server(ts, sol.periods);
        if (!cfg.horizon) cfg.horizon = sim::default_horizon(flat);
        trace = sim::simulate(flat, cfg);
        for (std::size_t i = 0; i < flat.rt_tasks.size(); ++i) worst.emplace_back(flat.rt_tasks[i].name, trace.worst_rt_response[i]);
        for (const auto& j : trace.jobs) {
            if (!j.missed) continue;
            const auto& name = flat.rt_tasks[j.task].name;
            const bool sec = std::any_of(ts.sec_tasks.begin(), ts.sec_tasks.end(), [&](const SecTask& s) { return s.name == name; });
            ++(sec ? sec_misses : rt_misses);
        }
    }
    if (!a.trace_out.empty()) write_file(a.trace_out, sim::to_csv(trace));

    out << "mode: " << sol.mode << '\n';
    out << "horizon: " << fmt(trace.horizon) << '\n';
    out << "jobs: " << trace.jobs.size() << '\n';
    out << "rt_deadline_misses: " << rt_misses << '\n';
    out << "sec_deadline_misses: " << sec_misses << '\n';
    for (const auto& [name, w] : worst) out << "worst_response " << name << ": " << fmt(w) << '\n';

    if (a.attacks > 0) {
        if (!sol.server) throw InputError("--attack-experiment", "needs a server-mode solution");
        experiment::Assignment adapted{sol.periods, *sol.server};
        experiment::Assignment baseline{ts.max_periods(), *sol.server};
        const auto at_max = opt::solve_server_params(ts, baseline.periods);
        if (at_max.ok()) baseline.server = *at_max.server;
        const auto runs = experiment::attack_experiment(ts, adapted, baseline, a.attacks, a.seed, a.horizon);
        const auto s = experiment::summarize(runs);
        out << "attack_runs: " << s.runs << '\n';
        out << "attack_compared: " << s.compared << '\n';
        out << "mean_latency_adapted: " << fmt(s.mean_adapted) << '\n';
        out << "mean_latency_tmax: " << fmt(s.mean_baseline) << '\n';
        out << "tmax_faster_runs: " << s.reversals << '\n';
        if (a.attack_out.empty())
            out << experiment::attack_csv(runs);
        else
            write_file(a.attack_out, experiment::attack_csv(runs));
    }
    return kOk;
}

struct GenerateArgs {
    std::uint64_t seed = 1;
    int count = 1;
    std::string rt_util = "0.31,0.4";
    std::string sec_util = "0.11,0.2";
    std::string out;
};

int cmd_generate(const GenerateArgs& a, std::ostream& out) {
    if (a.count < 1) throw InputError("--count", "must be at least 1");
    if (a.out.empty() && a.count != 1) throw InputError("--out", "required when generating more than one set");
    workload::GenSpec spec;
    spec.rt_util = parse_range(a.rt_util, "--rt-util");
    spec.sec_util = parse_range(a.sec_util, "--sec-util");
    try {
        spec.validate();
    } catch (const std::invalid_argument& e) {
        throw InputError("", e.what());
    }
    if (a.out.empty()) {
        spec.seed = workload::derive_seed(a.seed, 0);
        out << workload::to_json(workload::generate(spec)) << '\n';
        return kOk;
    }
    std::filesystem::create_directories(a.out);
    std::vector<workload::ManifestRow> rows;
    for (int k = 0; k < a.count; ++k) {
        spec.seed = workload::derive_seed(a.seed, static_cast<std::uint64_t>(k));
        const auto g = workload::generate(spec);
        char name[32];
        std::snprintf(name, sizeof name, "set_%04d.json", k);
        write_file((std::filesystem::path(a.out) / name).string(), workload::to_json(g) + "\n");
        rows.push_back({static_cast<std::size_t>(k), g.seed, g.rt_util, g.sec_util, g.ts.rt_tasks.size(), g.ts.sec_tasks.size()});
    }
    write_file((std::filesystem::path(a.out) / "manifest.csv").string(), workload::manifest_csv(rows));
    out << "wrote " << a.count << " task sets to " << a.out << '\n';
    return kOk;
}

struct ExperimentArgs {
    std::string figure = "sched";
    std::string groups;
    int sets_per_group = 100;
    std::uint64_t seed = 1;
    double p_max = 2500.0;
    double delta = 0.5;
    std::string oracle_periods = "gp";
    std::string out;
    std::string sets_out;
};

int cmd_experiment(const ExperimentArgs& a, std::ostream& out) {
    experiment::ExperimentConfig cfg;
    cfg.figure = experiment::parse_figure(a.figure);
    if (!a.groups.empty()) cfg.groups = parse_groups(a.groups);
    if (cfg.figure == experiment::Figure::tightness)
        for (int g : cfg.groups)
            if (g > 8) throw InputError("--groups", "security utilization group must stay below 0.9");
    if (a.sets_per_group < 1) throw InputError("--sets-per-group", "must be at least 1");
    if (!(a.p_max > 0) || !(a.delta > 0)) throw InputError("--pmax/--delta", "must be positive");
    cfg.sets_per_group = a.sets_per_group;
    cfg.seed = a.seed;
    cfg.search = {a.p_max, a.delta};
    cfg.oracle_periods = experiment::parse_oracle_periods(a.oracle_periods);
    const auto res = experiment::run(cfg);
    const std::string csv = experiment::groups_csv(res.groups);
    if (a.out.empty())
        out << csv;
    else
        write_file(a.out, csv);
    if (!a.sets_out.empty()) write_file(a.sets_out, experiment::sets_csv(res.sets));
    return kOk;
}

}  // namespace

std::string solution_json(const TaskSet& ts, const opt::JointSolution& sol, int indent) {
    ojson doc;
    doc["mode"] = "server";
    doc["schedulable"] = sol.schedulable;
    if (!sol.reason.empty()) doc["reason"] = sol.reason;
    doc["periods"] = sol.schedulable ? periods_json(ts, sol.periods) : ojson::object();
    doc["server"] = sol.schedulable ? server_json(sol.server) : ojson(nullptr);
    doc["eta"] = sol.schedulable ? ojson(sol.eta) : ojson(nullptr);
    doc["xi"] = sol.schedulable ? ojson(sol.xi) : ojson(nullptr);
    doc["iterations"] = sol.iterations;
    doc["trace"] = trace_json(sol.trace);
    doc["refine_iterations"] = sol.refine_iterations;
    doc["refine_trace"] = trace_json(sol.refine_trace);
    doc["condensation"] = {{"max_iterations", sol.max_condensation_iterations}, {"converged", sol.condensation_converged}};
    if (sol.schedulable) {
        const auto& c = sol.check;
        doc["checks"] = {{"periods_in_bounds", c.periods_in_bounds}, {"server_fits", c.server_fits},
                         {"supply", c.supply_all},        {"utilization_bound", c.utilization_bound_ok},
                         {"min_period_bound", c.min_period_bound_ok}};
    }
    return doc.dump(indent);
}

std::string solution_json(const TaskSet& ts, const opt::PeriodSolution& sol, int indent) {
    ojson doc;
    doc["mode"] = "noserver";
    doc["schedulable"] = sol.ok();
    doc["status"] = gp::to_string(sol.status);
    if (!sol.reason.empty()) doc["reason"] = sol.reason;
    doc["periods"] = sol.ok() ? periods_json(ts, sol.periods) : ojson::object();
    doc["eta"] = sol.ok() ? ojson(sol.eta) : ojson(nullptr);
    ojson xi = nullptr;
    if (sol.ok()) {
        try {
            xi = opt::xi_metric(sol.periods, ts.desired_periods(), ts.max_periods());
        } catch (const std::invalid_argument&) {
            xi = 0.0;
        }
    }
    doc["xi"] = xi;
    doc["trace"] = ojson::array();
    if (sol.ok()) doc["trace"].push_back({{"iteration", 1}, {"eta", sol.eta}, {"periods", sol.periods}});
    return doc.dump(indent);
}

LoadedSolution parse_solution(const TaskSet& ts, std::string_view json_text) {
    ojson doc;
    try {
        doc = ojson::parse(json_text);
    } catch (const ojson::parse_error& e) {
        throw InputError("solution", std::string("malformed JSON: ") + e.what());
    }
    if (!doc.is_object()) throw InputError("solution", "expected an object");
    LoadedSolution out;
    out.mode = doc.value("mode", std::string("server"));
    if (out.mode != "server" && out.mode != "noserver") throw InputError("solution.mode", "expected server or noserver");
    if (doc.contains("schedulable")) {
        if (!doc["schedulable"].is_boolean()) throw InputError("solution.schedulable", "expected a boolean");
        out.schedulable = doc["schedulable"].get<bool>();
    }
    if (!doc.contains("periods") || !doc["periods"].is_object()) throw InputError("solution.periods", "expected an object of periods");
    const auto& periods = doc["periods"];
    if (periods.empty()) throw InputError("solution.periods", "no periods (was the set unschedulable?)");
    for (const auto& [name, value] : periods.items()) {
        const bool known = std::any_of(ts.sec_tasks.begin(), ts.sec_tasks.end(), [&](const SecTask& s) { return s.name == name; });
        if (!known) throw InputError("solution.periods." + name, "not a security task of this task set");
        if (!value.is_number() || !(value.get<double>() > 0)) throw InputError("solution.periods." + name, "expected a positive number");
    }
    for (const auto& s : ts.sec_tasks) {
        if (!periods.contains(s.name)) throw InputError("solution.periods", "missing period for " + s.name);
        out.periods.push_back(periods[s.name].get<double>());
    }
    if (out.mode == "server") {
        if (!doc.contains("server") || !doc["server"].is_object()) throw InputError("solution.server", "expected an object");
        const auto& s = doc["server"];
        for (const char* key : {"capacity", "period"})
            if (!s.contains(key) || !s[key].is_number()) throw InputError(std::string("solution.server.") + key, "expected a number");
        ServerParams p{s["capacity"].get<double>(), s["period"].get<double>()};
        validate(p);
        out.server = p;
    }
    return out;
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Period adaptation and server sizing for security tasks on legacy real-time systems"};
    app.require_subcommand(1);
    app.set_version_flag("--version", "rtsec 0.1.0");

    Common common_analyze, common_optimize, common_search, common_simulate;
    auto* analyze = app.add_subcommand("analyze", "Response-time analysis of the real-time tasks");
    common_analyze.add(analyze);

    OptimizeArgs oa;
    auto* optimize = app.add_subcommand("optimize", "Choose security periods and a server");
    common_optimize.add(optimize);
    optimize->add_option("--epsilon", oa.epsilon, "Convergence threshold on eta")->capture_default_str();
    optimize->add_option("--jmax", oa.j_max, "Outer iteration cap")->capture_default_str();
    optimize->add_option("--mode", oa.mode, "server or noserver")->check(CLI::IsMember({"server", "noserver"}))->capture_default_str();
    optimize->add_option("--out", oa.out, "Write the JSON here instead of stdout");
    optimize->add_flag("--strict-bounds", oa.strict, "Also require the utilization and minimum-period bounds");
    optimize->add_flag("--no-refine", oa.no_refine, "Skip the joint refinement after the alternating loop");

    SearchArgs sa;
    auto* search = app.add_subcommand("search", "Exhaustive (Q, P) grid search for fixed periods");
    common_search.add(search);
    search->add_option("--solution", sa.solution, "Take the periods from this solution (default t_max)");
    search->add_option("--pmax", sa.p_max, "Largest server period")->capture_default_str();
    search->add_option("--delta", sa.delta, "Grid step")->capture_default_str();
    search->add_option("--out", sa.out, "Write the JSON here instead of stdout");

    SimulateArgs ma;
    auto* simulate = app.add_subcommand("simulate", "Replay a solution in the discrete-event simulator");
    common_simulate.add(simulate);
    simulate->add_option("solution", ma.solution, "Solution JSON from optimize")->required();
    simulate->add_option("--horizon", ma.horizon, "Simulated time in ms");
    simulate->add_option("--release", ma.release, "synchronous or sporadic")
        ->check(CLI::IsMember({"synchronous", "sporadic"}))
        ->capture_default_str();
    simulate->add_option("--seed", ma.seed, "Seed for sporadic releases and attacks")->capture_default_str();
    simulate->add_flag("--replenish-guard", ma.guard, "No recharge before the previous server period ends");
    simulate->add_option("--trace", ma.trace_out, "Write the event trace CSV here");
    simulate->add_option("--attack-experiment", ma.attacks, "Number of injected attacks");
    simulate->add_option("--attack-out", ma.attack_out, "Write the per-attack CSV here instead of stdout");

    GenerateArgs ga;
    auto* generate = app.add_subcommand("generate", "Draw random task sets");
    generate->add_option("--seed", ga.seed, "Master seed")->capture_default_str();
    generate->add_option("--count", ga.count, "Number of sets")->capture_default_str();
    generate->add_option("--rt-util", ga.rt_util, "Real-time base utilization LO,HI")->capture_default_str();
    generate->add_option("--sec-util", ga.sec_util, "Security base utilization LO,HI")->capture_default_str();
    generate->add_option("--out", ga.out, "Directory for set_NNNN.json and manifest.csv");

    ExperimentArgs ea;
    auto* exp = app.add_subcommand("experiment", "Batch comparison against the exhaustive search");
    exp->add_option("--figure", ea.figure, "sched, quality or tightness")
        ->check(CLI::IsMember({"sched", "quality", "tightness"}))
        ->capture_default_str();
    exp->add_option("--groups", ea.groups, "Utilization groups, e.g. 0-8 or 0,2,4");
    exp->add_option("--sets-per-group", ea.sets_per_group, "Task sets per group")->capture_default_str();
    exp->add_option("--seed", ea.seed, "Master seed")->capture_default_str();
    exp->add_option("--pmax", ea.p_max, "Largest server period of the search")->capture_default_str();
    exp->add_option("--delta", ea.delta, "Grid step of the search")->capture_default_str();
    exp->add_option("--oracle-periods", ea.oracle_periods, "Periods given to the search: gp, max or desired")
        ->check(CLI::IsMember({"gp", "max", "desired"}))
        ->capture_default_str();
    exp->add_option("--out", ea.out, "Per-group CSV (default stdout)");
    exp->add_option("--sets-out", ea.sets_out, "Per-set CSV");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kOk : kInputError;
    }

    try {
        if (*analyze) return cmd_analyze(common_analyze, out);
        if (*optimize) return cmd_optimize(common_optimize, oa, out, err);
        if (*search) return cmd_search(common_search, sa, out);
        if (*simulate) return cmd_simulate(common_simulate, ma, out);
        if (*generate) return cmd_generate(ga, out);
        if (*exp) return cmd_experiment(ea, out);
    } catch (const InputError& e) {
        err << "error: " << e.what() << '\n';
        return kInputError;
    } catch (const std::invalid_argument& e) {
        err << "error: " << e.what() << '\n';
        return kInputError;
    } catch (const std::filesystem::filesystem_error& e) {
        err << "error: " << e.what() << '\n';
        return kInputError;
    } catch (const std::exception& e) {
        err << "internal error: " << e.what() << '\n';
        return kSolverFailure;
    }
    return kInputError;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    std::vector<const char*> argv{"rtsec"};
    for (const auto& a : args) argv.push_back(a.c_str());
    return run(static_cast<int>(argv.size()), argv.data(), out, err);
}

}  // namespace rtsec::cli

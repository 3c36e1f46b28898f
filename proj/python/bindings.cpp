#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "rtsec/cli.hpp"
#include "rtsec/optimizer.hpp"
#include "rtsec/oracle.hpp"
#include "rtsec/rta.hpp"
#include "rtsec/simulator.hpp"
#include "rtsec/workload.hpp"

namespace py = pybind11;
using namespace rtsec;

PYBIND11_MODULE(_rtsec, m) {
    m.doc() = "Period adaptation and server sizing for security tasks on legacy real-time systems";

    py::register_exception<InputError>(m, "InputError", PyExc_ValueError);

    py::class_<RtTask>(m, "RtTask")
        .def(py::init<std::string, Millis, Millis>(), py::arg("name"), py::arg("wcet"), py::arg("period"))
        .def_readwrite("name", &RtTask::name)
        .def_readwrite("wcet", &RtTask::wcet)
        .def_readwrite("period", &RtTask::period)
        .def("__repr__", [](const RtTask& t) {
            std::ostringstream s;
            s << "RtTask(" << t.name << ", wcet=" << t.wcet << ", period=" << t.period << ")";
            return s.str();
        });

    py::class_<SecTask>(m, "SecTask")
        .def(py::init([](std::string name, Millis wcet, Millis t_des, Millis t_max, double weight) {
                 return SecTask{std::move(name), wcet, t_des, t_max, weight, std::nullopt};
             }),
             py::arg("name"), py::arg("wcet"), py::arg("t_des"), py::arg("t_max"), py::arg("weight") = 1.0)
        .def_readwrite("name", &SecTask::name)
        .def_readwrite("wcet", &SecTask::wcet)
        .def_readwrite("t_des", &SecTask::t_des)
        .def_readwrite("t_max", &SecTask::t_max)
        .def_readwrite("weight", &SecTask::weight);

    py::class_<ServerParams>(m, "ServerParams")
        .def(py::init<Millis, Millis>(), py::arg("capacity"), py::arg("period"))
        .def_readwrite("capacity", &ServerParams::capacity)
        .def_readwrite("period", &ServerParams::period)
        .def_property_readonly("utilization", &ServerParams::utilization);

    py::class_<TaskSet>(m, "TaskSet")
        .def(py::init([](std::vector<RtTask> rt, std::vector<SecTask> sec) {
                 TaskSet ts{std::move(rt), std::move(sec)};
                 validate(ts);
                 return ts;
             }),
             py::arg("rt_tasks"), py::arg("sec_tasks"))
        .def_readonly("rt_tasks", &TaskSet::rt_tasks)
        .def_readonly("sec_tasks", &TaskSet::sec_tasks)
        .def("rt_utilization", &TaskSet::rt_utilization)
        .def("max_periods", &TaskSet::max_periods)
        .def("desired_periods", &TaskSet::desired_periods)
        .def("to_json", [](const TaskSet& ts) { return serialize_taskset(ts); });

    m.def("parse_taskset", [](const std::string& text) { return parse_taskset(text); }, py::arg("text"));
    m.def("load_taskset", [](const std::string& path) { return load_taskset(path); }, py::arg("path"));

    m.def(
        "response_times",
        [](const TaskSet& ts) {
            const auto r = rta::analyze(ts.rt_tasks);
            return py::make_tuple(r.schedulable, r.response_times);
        },
        py::arg("taskset"), "(schedulable, response times) for the real-time tasks in priority order");

    py::class_<opt::JointSolution>(m, "JointSolution")
        .def_readonly("schedulable", &opt::JointSolution::schedulable)
        .def_readonly("solver_failure", &opt::JointSolution::solver_failure)
        .def_readonly("reason", &opt::JointSolution::reason)
        .def_readonly("periods", &opt::JointSolution::periods)
        .def_readonly("server", &opt::JointSolution::server)
        .def_readonly("eta", &opt::JointSolution::eta)
        .def_readonly("xi", &opt::JointSolution::xi)
        .def_readonly("iterations", &opt::JointSolution::iterations);

    m.def(
        "co_optimize",
        [](const TaskSet& ts, double epsilon, int j_max, bool refine, bool strict_bounds) {
            opt::CoOptimizeOptions o;
            o.epsilon = epsilon;
            o.j_max = j_max;
            o.refine = refine;
            o.strict_bounds = strict_bounds;
            py::gil_scoped_release unlock;
            return opt::co_optimize(ts, o);
        },
        py::arg("taskset"), py::arg("epsilon") = 1e-9, py::arg("j_max") = 20, py::arg("refine") = true,
        py::arg("strict_bounds") = false);

    m.def(
        "solution_json", [](const TaskSet& ts, const opt::JointSolution& s) { return cli::solution_json(ts, s); },
        py::arg("taskset"), py::arg("solution"));

    m.def(
        "exhaustive_search",
        [](const TaskSet& ts, const std::vector<Millis>& periods, Millis p_max, Millis granularity) {
            py::gil_scoped_release unlock;
            return oracle::exhaustive_search(ts, periods, {p_max, granularity}).server;
        },
        py::arg("taskset"), py::arg("periods"), py::arg("p_max") = 2500.0, py::arg("granularity") = 0.5,
        "Largest-bandwidth server found by the grid search, or None");

    m.def(
        "simulate",
        [](const TaskSet& ts, std::optional<ServerParams> server, std::vector<Millis> periods, std::optional<Millis> horizon,
           bool sporadic, std::uint64_t seed) {
            sim::SimConfig c;
            c.server = server;
            c.assigned_periods = std::move(periods);
            c.horizon = horizon;
            c.release = sporadic ? sim::ReleasePattern::sporadic : sim::ReleasePattern::synchronous;
            c.seed = seed;
            c.record_events = false;
            sim::SimTrace t;
            {
                py::gil_scoped_release unlock;
                t = sim::simulate(ts, c);
            }
            py::dict d;
            d["horizon"] = t.horizon;
            d["jobs"] = t.jobs.size();
            d["rt_misses"] = t.rt_misses;
            d["sec_misses"] = t.sec_misses;
            d["worst_rt_response"] = t.worst_rt_response;
            d["worst_sec_response"] = t.worst_sec_response;
            return d;
        },
        py::arg("taskset"), py::arg("server") = std::nullopt, py::arg("periods") = std::vector<Millis>{},
        py::arg("horizon") = std::nullopt, py::arg("sporadic") = false, py::arg("seed") = 1);

    m.def(
        "generate",
        [](std::uint64_t seed, std::pair<double, double> rt_util, std::pair<double, double> sec_util) {
            workload::GenSpec spec;
            spec.seed = seed;
            spec.rt_util = {rt_util.first, rt_util.second};
            spec.sec_util = {sec_util.first, sec_util.second};
            return workload::generate(spec).ts;
        },
        py::arg("seed"), py::arg("rt_util") = std::pair{0.31, 0.4}, py::arg("sec_util") = std::pair{0.11, 0.2});
    m.def("derive_seed", &workload::derive_seed, py::arg("master"), py::arg("index"));

    m.def(
        "run_cli",
        [](const std::vector<std::string>& args) {
            std::ostringstream out, err;
            int code;
            {
                py::gil_scoped_release unlock;
                code = cli::run(args, out, err);
            }
            return py::make_tuple(code, out.str(), err.str());
        },
        py::arg("args"), "Runs the command-line tool in process; returns (exit code, stdout, stderr)");
}

#include "rtsec/taskmodel.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

namespace rtsec {

using nlohmann::json;

namespace {

std::string idx_path(const char* list, std::size_t i) {
    return std::string(list) + "[" + std::to_string(i) + "]";
}

const json& require(const json& obj, const char* key, const std::string& path) {
    auto it = obj.find(key);
    if (it == obj.end()) throw InputError(path + "." + key, "missing required field");
    return *it;
}

double require_number(const json& obj, const char* key, const std::string& path) {
    const json& v = require(obj, key, path);
    if (!v.is_number()) throw InputError(path + "." + key, "expected a number");
    double d = v.get<double>();
    if (!std::isfinite(d)) throw InputError(path + "." + key, "expected a finite number");
    return d;
}

std::string require_string(const json& obj, const char* key, const std::string& path) {
    const json& v = require(obj, key, path);
    if (!v.is_string()) throw InputError(path + "." + key, "expected a string");
    return v.get<std::string>();
}

void reject_unknown(const json& obj, std::initializer_list<const char*> allowed, const std::string& path) {
    for (auto it = obj.begin(); it != obj.end(); ++it) {
        bool ok = std::any_of(allowed.begin(), allowed.end(), [&](const char* a) { return it.key() == a; });
        if (!ok) throw InputError(path + "." + it.key(), "unknown field");
    }
}

}  // namespace

std::vector<Millis> TaskSet::desired_periods() const {
    std::vector<Millis> out;
    out.reserve(sec_tasks.size());
    for (const auto& s : sec_tasks) out.push_back(s.t_des);
    return out;
}

std::vector<Millis> TaskSet::max_periods() const {
    std::vector<Millis> out;
    out.reserve(sec_tasks.size());
    for (const auto& s : sec_tasks) out.push_back(s.t_max);
    return out;
}

double TaskSet::rt_utilization() const { return total_utilization(rt_tasks); }

void validate(TaskSet& ts, const ParseOptions& options) {
    std::set<std::string> names;
    auto check_name = [&](const std::string& name, const std::string& path) {
        if (name.empty()) throw InputError(path + ".name", "name must be non-empty");
        if (!names.insert(name).second) throw InputError(path + ".name", "duplicate task name '" + name + "'");
    };

    for (std::size_t i = 0; i < ts.rt_tasks.size(); ++i) {
        const auto& t = ts.rt_tasks[i];
        const std::string p = idx_path("rt_tasks", i);
        check_name(t.name, p);
        if (!(t.wcet > 0)) throw InputError(p + ".wcet", "wcet must be positive");
        if (!(t.period > 0)) throw InputError(p + ".period", "period must be positive");
        if (t.wcet > t.period) throw InputError(p + ".wcet", "wcet exceeds period");
    }
    for (std::size_t i = 0; i < ts.sec_tasks.size(); ++i) {
        const auto& s = ts.sec_tasks[i];
        const std::string p = idx_path("sec_tasks", i);
        check_name(s.name, p);
        if (!(s.wcet > 0)) throw InputError(p + ".wcet", "wcet must be positive");
        if (!(s.t_des > 0)) throw InputError(p + ".t_des", "t_des must be positive");
        if (!(s.t_max > 0)) throw InputError(p + ".t_max", "t_max must be positive");
        if (s.t_des > s.t_max) throw InputError(p + ".t_des", "t_des exceeds t_max");
        if (!(s.weight > 0)) throw InputError(p + ".weight", "weight must be positive");
    }

    std::stable_sort(ts.rt_tasks.begin(), ts.rt_tasks.end(),
                     [](const RtTask& a, const RtTask& b) { return a.period < b.period; });
    if (options.rm_order_security) {
        std::stable_sort(ts.sec_tasks.begin(), ts.sec_tasks.end(),
                         [](const SecTask& a, const SecTask& b) { return a.t_des < b.t_des; });
    }
}

void validate(const ServerParams& server) {
    if (!(server.capacity > 0)) throw InputError("server.capacity", "capacity must be positive");
    if (!(server.period > 0)) throw InputError("server.period", "period must be positive");
    if (server.capacity > server.period) throw InputError("server.capacity", "capacity exceeds period");
}

TaskSet parse_taskset(std::string_view json_text, const ParseOptions& options) {
    json doc;
    try {
        doc = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw InputError("", std::string("malformed JSON: ") + e.what());
    }
    if (!doc.is_object()) throw InputError("", "top-level value must be an object");
    reject_unknown(doc, {"rt_tasks", "sec_tasks", "meta"}, "");

    TaskSet ts;
    const json& rts = require(doc, "rt_tasks", "");
    if (!rts.is_array()) throw InputError("rt_tasks", "expected an array");
    for (std::size_t i = 0; i < rts.size(); ++i) {
        const std::string p = idx_path("rt_tasks", i);
        const json& t = rts[i];
        if (!t.is_object()) throw InputError(p, "expected an object");
        reject_unknown(t, {"name", "wcet", "period"}, p);
        ts.rt_tasks.push_back(
            {require_string(t, "name", p), require_number(t, "wcet", p), require_number(t, "period", p)});
    }

    if (auto it = doc.find("sec_tasks"); it != doc.end()) {
        if (!it->is_array()) throw InputError("sec_tasks", "expected an array");
        for (std::size_t i = 0; i < it->size(); ++i) {
            const std::string p = idx_path("sec_tasks", i);
            const json& t = (*it)[i];
            if (!t.is_object()) throw InputError(p, "expected an object");
            reject_unknown(t, {"name", "wcet", "t_des", "t_max", "weight", "criticality"}, p);
            SecTask s;
            s.name = require_string(t, "name", p);
            s.wcet = require_number(t, "wcet", p);
            s.t_des = require_number(t, "t_des", p);
            s.t_max = require_number(t, "t_max", p);
            s.weight = require_number(t, "weight", p);
            if (auto c = t.find("criticality"); c != t.end() && !c->is_null()) {
                if (!c->is_string()) throw InputError(p + ".criticality", "expected a string");
                s.criticality = c->get<std::string>();
            }
            ts.sec_tasks.push_back(std::move(s));
        }
    }

    validate(ts, options);
    return ts;
}

TaskSet load_taskset(const std::string& path, const ParseOptions& options) {
    std::ifstream in(path);
    if (!in) throw InputError("", "cannot open '" + path + "'");
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_taskset(buf.str(), options);
}

std::string serialize_taskset(const TaskSet& ts, int indent) {
    json doc;
    doc["rt_tasks"] = json::array();
    for (const auto& t : ts.rt_tasks)
        doc["rt_tasks"].push_back({{"name", t.name}, {"wcet", t.wcet}, {"period", t.period}});
    doc["sec_tasks"] = json::array();
    for (const auto& s : ts.sec_tasks) {
        json j = {{"name", s.name}, {"wcet", s.wcet}, {"t_des", s.t_des}, {"t_max", s.t_max}, {"weight", s.weight}};
        if (s.criticality) j["criticality"] = *s.criticality;
        doc["sec_tasks"].push_back(std::move(j));
    }
    return doc.dump(indent);
}

double total_utilization(std::span<const std::pair<Millis, Millis>> wcet_period) {
    double u = 0.0;
    for (const auto& [c, t] : wcet_period) u += c / t;
    return u;
}

double total_utilization(std::span<const RtTask> tasks) {
    double u = 0.0;
    for (const auto& t : tasks) u += t.wcet / t.period;
    return u;
}

}  // namespace rtsec

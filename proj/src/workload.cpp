#include "rtsec/workload.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "rtsec/rta.hpp"

namespace rtsec::workload {

SplitMix64::result_type SplitMix64::operator()() {
    std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ull);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

double SplitMix64::uniform() { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }

std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index) {
    SplitMix64 a(master ^ (0xD1B54A32D192ED03ull * (index + 1)));
    a();
    return a();
}

std::vector<double> uunifast(int n, double u_total, SplitMix64& rng) {
    if (n < 1) throw std::invalid_argument("uunifast: n must be at least 1");
    if (!(u_total > 0)) throw std::invalid_argument("uunifast: total utilization must be positive");
    std::vector<double> u(static_cast<std::size_t>(n));
    double sum = u_total;
    for (int i = 1; i < n; ++i) {
        const double next = sum * std::pow(rng.uniform(), 1.0 / static_cast<double>(n - i));
        u[static_cast<std::size_t>(i - 1)] = sum - next;
        sum = next;
    }
    u[static_cast<std::size_t>(n - 1)] = sum;
    return u;
}

std::vector<double> uunifast(int n, double u_total, std::uint64_t seed) {
    SplitMix64 rng(seed);
    return uunifast(n, u_total, rng);
}

Range utilization_group(int i) { return {0.01 + 0.1 * i, 0.1 + 0.1 * i}; }

void GenSpec::validate() const {
    auto check = [](bool ok, const char* what) {
        if (!ok) throw std::invalid_argument(std::string("GenSpec: ") + what);
    };
    check(rt_min >= 1 && rt_min <= rt_max, "bad rt_count range");
    check(sec_min >= 1 && sec_min <= sec_max, "bad sec_count range");
    for (const Range* r : {&rt_period, &t_des, &t_max}) check(r->lo > 0 && r->lo <= r->hi, "bad period range");
    check(t_des.hi <= t_max.lo, "t_des range must lie below t_max range");
    for (const Range* r : {&rt_util, &sec_util}) check(r->lo >= 0 && r->lo < r->hi && r->hi < 1, "utilization bounds must lie in (0, 1)");
    check(max_redraws >= 1, "max_redraws must be positive");
}

namespace {

double draw(SplitMix64& rng, const Range& r) { return r.lo + (r.hi - r.lo) * rng.uniform(); }

// Uniform on (lo, hi].
double draw_open_low(SplitMix64& rng, const Range& r) { return r.hi - (r.hi - r.lo) * rng.uniform(); }

int draw_count(SplitMix64& rng, int lo, int hi) {
    return lo + static_cast<int>(rng() % static_cast<std::uint64_t>(hi - lo + 1));
}

}  // namespace

Generated generate(const GenSpec& spec) {
    spec.validate();
    SplitMix64 rng(spec.seed);
    for (int attempt = 0; attempt < spec.max_redraws; ++attempt) {
        Generated g;
        g.seed = spec.seed;
        g.redraws = attempt;
        const int m = draw_count(rng, spec.rt_min, spec.rt_max);
        const int n = draw_count(rng, spec.sec_min, spec.sec_max);
        g.rt_util = draw_open_low(rng, spec.rt_util);
        g.sec_util = draw_open_low(rng, spec.sec_util);
        const auto ur = uunifast(m, g.rt_util, rng);
        const auto us = uunifast(n, g.sec_util, rng);

        bool ok = true;
        for (int i = 0; i < m; ++i) {
            const double period = draw(rng, spec.rt_period);
            const double wcet = ur[static_cast<std::size_t>(i)] * period;
            ok = ok && wcet > 0 && wcet <= period;
            g.ts.rt_tasks.push_back({"rt" + std::to_string(i), wcet, period});
        }
        for (int i = 0; i < n; ++i) {
            SecTask s;
            s.name = "sec" + std::to_string(i);
            s.t_des = draw(rng, spec.t_des);
            s.t_max = std::max(s.t_des, draw(rng, spec.t_max));
            s.wcet = us[static_cast<std::size_t>(i)] * s.t_des;
            s.weight = 1.0 - rng.uniform();  // (0, 1]
            ok = ok && s.wcet > 0 && s.wcet <= s.t_des;
            g.ts.sec_tasks.push_back(s);
        }
        if (!ok) continue;
        try {
            validate(g.ts);
        } catch (const InputError&) {
            continue;
        }
        if (spec.require_rt_schedulable && !rta::analyze(g.ts.rt_tasks).schedulable) continue;
        return g;
    }
    throw std::runtime_error("generate: no valid task set after " + std::to_string(spec.max_redraws) + " draws");
}

std::string to_json(const Generated& g, int indent) {
    auto doc = nlohmann::ordered_json::parse(serialize_taskset(g.ts));
    doc["meta"] = {{"generator", SplitMix64::kAlgorithm},
                   {"seed", g.seed},
                   {"rt_util", g.rt_util},
                   {"sec_util", g.sec_util},
                   {"sec_wcet_basis", "t_des"},
                   {"redraws", g.redraws}};
    return doc.dump(indent);
}

std::string manifest_csv(const std::vector<ManifestRow>& rows) {
    std::ostringstream os;
    os << "set_id,seed,rt_util,sec_util,m,n\n";
    char buf[64];
    for (const auto& r : rows) {
        os << r.set_id << ',' << r.seed << ',';
        std::snprintf(buf, sizeof buf, "%.6f,%.6f", r.rt_util, r.sec_util);
        os << buf << ',' << r.m << ',' << r.n << '\n';
    }
    return os.str();
}

}  // namespace rtsec::workload

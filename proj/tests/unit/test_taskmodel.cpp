#include <doctest.h>

#include <cstdlib>
#include <random>
#include <string>

#include "rtsec/taskmodel.hpp"

using namespace rtsec;

namespace {

std::string data_path(const std::string& file) {
    const char* dir = std::getenv("RTSEC_DATA");
    return std::string(dir ? dir : "data") + "/" + file;
}

}  // namespace

TEST_CASE("minimal task set parses") {
    auto ts = parse_taskset(R"({"rt_tasks":[{"name":"a","wcet":2,"period":10}],"sec_tasks":[]})");
    CHECK(ts.rt_tasks.size() == 1);
    CHECK(ts.sec_tasks.empty());
    CHECK(ts.rt_tasks[0].deadline() == 10.0);
}

TEST_CASE("sec_tasks may be omitted") {
    auto ts = parse_taskset(R"({"rt_tasks":[{"name":"a","wcet":2,"period":10}]})");
    CHECK(ts.sec_tasks.empty());
}

TEST_CASE("real-time tasks are sorted rate-monotonically, stable on ties") {
    auto ts = parse_taskset(R"({"rt_tasks":[
        {"name":"slow","wcet":1,"period":100},
        {"name":"fast","wcet":1,"period":10},
        {"name":"tie1","wcet":1,"period":50},
        {"name":"tie2","wcet":1,"period":50}]})");
    REQUIRE(ts.rt_tasks.size() == 4);
    CHECK(ts.rt_tasks[0].name == "fast");
    CHECK(ts.rt_tasks[1].name == "tie1");
    CHECK(ts.rt_tasks[2].name == "tie2");
    CHECK(ts.rt_tasks[3].name == "slow");
}

TEST_CASE("security order is input order unless RM normalization is requested") {
    const char* doc = R"({"rt_tasks":[],"sec_tasks":[
        {"name":"b","wcet":1,"t_des":300,"t_max":900,"weight":1},
        {"name":"a","wcet":1,"t_des":200,"t_max":900,"weight":1}]})";
    CHECK(parse_taskset(doc).sec_tasks[0].name == "b");
    CHECK(parse_taskset(doc, {.rm_order_security = true}).sec_tasks[0].name == "a");
}

TEST_CASE("invariant violations report the field path") {
    auto expect_error = [](const char* doc, const std::string& path, const std::string& text) {
        try {
            parse_taskset(doc);
            FAIL("expected InputError");
        } catch (const InputError& e) {
            CHECK(e.path() == path);
            CHECK(std::string(e.what()).find(text) != std::string::npos);
        }
    };
    expect_error(R"({"rt_tasks":[],"sec_tasks":[{"name":"s","wcet":1,"t_des":500,"t_max":100,"weight":1}]})",
                 "sec_tasks[0].t_des", "t_des exceeds t_max");
    expect_error(R"({"rt_tasks":[{"name":"a","wcet":11,"period":10}]})", "rt_tasks[0].wcet", "exceeds period");
    expect_error(R"({"rt_tasks":[{"name":"a","wcet":0,"period":10}]})", "rt_tasks[0].wcet", "positive");
    expect_error(R"({"rt_tasks":[{"name":"a","wcet":1,"period":10},{"name":"a","wcet":1,"period":20}]})",
                 "rt_tasks[1].name", "duplicate");
    expect_error(R"({"rt_tasks":[{"name":"a","wcet":"x","period":10}]})", "rt_tasks[0].wcet", "number");
    expect_error(R"({"rt_tasks":[{"name":"a","wcet":1}]})", "rt_tasks[0].period", "missing");
    expect_error(R"({"rt_tasks":[{"name":"a","wcet":1,"period":10,"prio":3}]})", "rt_tasks[0].prio", "unknown");
    expect_error(R"({"rt_tasks":[],"sec_tasks":[{"name":"s","wcet":1,"t_des":5,"t_max":10,"weight":0}]})",
                 "sec_tasks[0].weight", "positive");
}

TEST_CASE("malformed JSON is an input error") {
    CHECK_THROWS_AS(parse_taskset("{\"rt_tasks\": ["), InputError);
    CHECK_THROWS_AS(parse_taskset("[1,2]"), InputError);
}

TEST_CASE("server parameters must satisfy 0 < Q <= P") {
    CHECK_NOTHROW(validate(ServerParams{2, 5}));
    CHECK_NOTHROW(validate(ServerParams{5, 5}));
    CHECK_THROWS_AS(validate(ServerParams{6, 5}), InputError);
    CHECK_THROWS_AS(validate(ServerParams{0, 5}), InputError);
}

TEST_CASE("total utilization") {
    std::vector<std::pair<double, double>> one{{2, 10}}, none{}, two{{1, 4}, {2, 10}};
    CHECK(total_utilization(one) == doctest::Approx(0.2));
    CHECK(total_utilization(none) == 0.0);
    CHECK(total_utilization(two) == doctest::Approx(0.45));
}

TEST_CASE("total utilization is additive over disjoint lists") {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> c(0.1, 5), t(10, 100);
    for (int trial = 0; trial < 100; ++trial) {
        std::vector<std::pair<double, double>> a, b, ab;
        for (int i = 0; i < 4; ++i) a.emplace_back(c(rng), t(rng));
        for (int i = 0; i < 3; ++i) b.emplace_back(c(rng), t(rng));
        ab = a;
        ab.insert(ab.end(), b.begin(), b.end());
        CHECK(total_utilization(ab) == doctest::Approx(total_utilization(a) + total_utilization(b)).epsilon(1e-14));
    }
}

TEST_CASE("parse, serialize, parse is the identity on random task sets") {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int trial = 0; trial < 50; ++trial) {
        TaskSet ts;
        for (int i = 0; i < 5; ++i) {
            const double period = 10 + 90 * u(rng);
            ts.rt_tasks.push_back({"rt" + std::to_string(i), period * (0.01 + 0.1 * u(rng)), period});
        }
        for (int i = 0; i < 3; ++i) {
            const double des = 250 + 250 * u(rng);
            SecTask s{"sec" + std::to_string(i), des * 0.05 * u(rng) + 0.1, des, des * (1 + u(rng)), u(rng) + 0.01, {}};
            if (i == 1) s.criticality = "High";
            ts.sec_tasks.push_back(s);
        }
        validate(ts);
        const auto again = parse_taskset(serialize_taskset(ts));
        REQUIRE(again.rt_tasks.size() == ts.rt_tasks.size());
        for (std::size_t i = 0; i < ts.rt_tasks.size(); ++i) {
            CHECK(again.rt_tasks[i].name == ts.rt_tasks[i].name);
            CHECK(again.rt_tasks[i].wcet == ts.rt_tasks[i].wcet);
            CHECK(again.rt_tasks[i].period == ts.rt_tasks[i].period);
        }
        REQUIRE(again.sec_tasks.size() == ts.sec_tasks.size());
        for (std::size_t i = 0; i < ts.sec_tasks.size(); ++i) {
            CHECK(again.sec_tasks[i].name == ts.sec_tasks[i].name);
            CHECK(again.sec_tasks[i].t_des == ts.sec_tasks[i].t_des);
            CHECK(again.sec_tasks[i].t_max == ts.sec_tasks[i].t_max);
            CHECK(again.sec_tasks[i].weight == ts.sec_tasks[i].weight);
            CHECK(again.sec_tasks[i].criticality == ts.sec_tasks[i].criticality);
        }
    }
}

TEST_CASE("bundled Tripwire fixture loads") {
    auto ts = load_taskset(data_path("tripwire_example.json"));
    CHECK(ts.sec_tasks.size() == 5);
    CHECK(ts.sec_tasks[0].criticality.has_value());
}

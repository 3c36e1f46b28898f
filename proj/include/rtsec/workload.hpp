#pragma once

#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "rtsec/taskmodel.hpp"

namespace rtsec::workload {

/// splitmix64: a counter-based 64-bit generator (state += golden gamma, then mix).
class SplitMix64 {
public:
    using result_type = std::uint64_t;
    static constexpr const char* kAlgorithm = "splitmix64";

    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

    static constexpr result_type min() { return 0; }
    static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }
    result_type operator()();

    /// Uniform in [0, 1) with 53 random bits.
    double uniform();

private:
    std::uint64_t state_;
};

/// Seed of the index-th member of a batch drawn from `master`.
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index);

/// n utilizations summing to u_total, uniform over the simplex.
std::vector<double> uunifast(int n, double u_total, SplitMix64& rng);
std::vector<double> uunifast(int n, double u_total, std::uint64_t seed);

struct Range {
    double lo = 0.0;
    double hi = 0.0;
};

/// [0.01 + 0.1 i, 0.1 + 0.1 i]
Range utilization_group(int i);

struct GenSpec {
    int rt_min = 3, rt_max = 10;
    int sec_min = 2, sec_max = 5;
    Range rt_period{10, 100};
    Range t_des{250, 500};
    Range t_max{5000, 5050};
    Range rt_util{0.31, 0.4};
    Range sec_util{0.11, 0.2};
    std::uint64_t seed = 1;
    bool require_rt_schedulable = true;
    int max_redraws = 100;

    /// Throws std::invalid_argument.
    void validate() const;
};

struct Generated {
    TaskSet ts;
    std::uint64_t seed = 0;
    double rt_util = 0.0;   // drawn base utilization
    double sec_util = 0.0;  // drawn base utilization, on t_des
    int redraws = 0;
};

/// Draws one task set. RT execution times are U_i T_i; security ones are
/// U_i t_des_i. Throws std::runtime_error after max_redraws rejected draws.
Generated generate(const GenSpec& spec);

/// Task-set JSON with a `meta` block naming the generator and seed.
std::string to_json(const Generated& g, int indent = 2);

struct ManifestRow {
    std::size_t set_id = 0;
    std::uint64_t seed = 0;
    double rt_util = 0.0;
    double sec_util = 0.0;
    std::size_t m = 0;
    std::size_t n = 0;
};

/// `set_id,seed,rt_util,sec_util,m,n`
std::string manifest_csv(const std::vector<ManifestRow>& rows);

}  // namespace rtsec::workload

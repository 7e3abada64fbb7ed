#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "acta/codec.hpp"

namespace acta {

/// Axis-aligned box in the raw input space where execution incurs an extra delay.
struct BottleneckCluster {
    struct Interval {
        std::int64_t lo = 0, hi = 0;  // inclusive
    };

    std::vector<Interval> box;  // one interval per input variable
    double delay = 5.0;

    bool contains(const TestPoint& point) const;
    std::uint64_t volume() const;
};

struct SimulatorConfig {
    InputSpace space;
    std::vector<BottleneckCluster> clusters;
    double base_time = 0.05;
    double threshold = 1.0;
    std::uint64_t rng_seed = 0;

    // space valid; boxes in-domain and pairwise disjoint; threshold between
    // base_time and base_time + delay for every cluster
    void validate() const;
};

/// A test with its measured execution time and oracle label.
struct ExecutedTest {
    TestPoint point;
    double t_exe = 0.0;
    ConditionLabel label;
};

ConditionLabel oracle_label(double t_exe, double threshold);

// Computed, never slept: t_exe = base_time plus the containing cluster's delay.
ExecutedTest execute_sim(const SimulatorConfig& config, const TestPoint& point);

// Analytic count of label-1 combinations (sum of disjoint box volumes).
std::uint64_t positive_count(const SimulatorConfig& config);

inline constexpr std::uint64_t kDefaultBenchmarkSeed = 20;

// CID[1,20] RID[1,62] IID[1,50] UID[1,50] with twenty disjoint 10x15x10x10
// delay boxes placed by seeded rejection sampling.
SimulatorConfig default_benchmark(std::uint64_t seed = kDefaultBenchmarkSeed);

SimulatorConfig remove_clusters(const SimulatorConfig& config, std::span<const std::size_t> indices);

}  // namespace acta

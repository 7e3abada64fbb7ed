#include "acta/simulator.hpp"

#include <algorithm>
#include <string>

namespace acta {

bool BottleneckCluster::contains(const TestPoint& point) const {
    if (point.values.size() != box.size()) return false;
    for (std::size_t i = 0; i < box.size(); ++i) {
        if (point.values[i] < box[i].lo || point.values[i] > box[i].hi) return false;
    }
    return true;
}

std::uint64_t BottleneckCluster::volume() const {
    std::uint64_t v = 1;
    for (const Interval& iv : box) v *= static_cast<std::uint64_t>(iv.hi - iv.lo + 1);
    return v;
}

namespace {

bool boxes_overlap(const BottleneckCluster& a, const BottleneckCluster& b) {
    for (std::size_t i = 0; i < a.box.size(); ++i) {
        if (a.box[i].hi < b.box[i].lo || b.box[i].hi < a.box[i].lo) return false;
    }
    return true;
}

void check_disjoint(const std::vector<BottleneckCluster>& clusters) {
    for (std::size_t i = 0; i < clusters.size(); ++i) {
        for (std::size_t j = i + 1; j < clusters.size(); ++j) {
            if (boxes_overlap(clusters[i], clusters[j])) {
                throw ConfigError("bottleneck clusters " + std::to_string(i) + " and " +
                                  std::to_string(j) + " overlap");
            }
        }
    }
}

}  // namespace

void SimulatorConfig::validate() const {
    space.validate();
    if (threshold <= base_time) throw ConfigError("threshold must exceed base_time");
    for (std::size_t c = 0; c < clusters.size(); ++c) {
        const BottleneckCluster& cl = clusters[c];
        if (cl.box.size() != space.dimension()) {
            throw ConfigError("cluster " + std::to_string(c) + " has wrong dimension");
        }
        for (std::size_t i = 0; i < cl.box.size(); ++i) {
            const auto& v = space.variables[i];
            const std::int64_t dom_lo = v.kind == InputVariableSpec::Kind::IntegerRange ? v.lo : 0;
            const std::int64_t dom_hi = dom_lo + v.cardinality() - 1;
            if (cl.box[i].lo > cl.box[i].hi || cl.box[i].lo < dom_lo || cl.box[i].hi > dom_hi) {
                throw ConfigError("cluster " + std::to_string(c) + " interval " + std::to_string(i) +
                                  " outside variable domain");
            }
        }
        if (base_time + cl.delay <= threshold) {
            throw ConfigError("cluster " + std::to_string(c) + " delay never crosses the threshold");
        }
    }
    check_disjoint(clusters);
}

ConditionLabel oracle_label(double t_exe, double threshold) {
    return ConditionLabel{t_exe > threshold ? 1u : 0u};
}

ExecutedTest execute_sim(const SimulatorConfig& config, const TestPoint& point) {
    require_valid(config.space, point);
    double t = config.base_time;
    for (const BottleneckCluster& cl : config.clusters) {
        if (cl.contains(point)) {
            t += cl.delay;
            break;  // clusters are disjoint
        }
    }
    return ExecutedTest{point, t, oracle_label(t, config.threshold)};
}

std::uint64_t positive_count(const SimulatorConfig& config) {
    check_disjoint(config.clusters);
    std::uint64_t total = 0;
    for (const BottleneckCluster& cl : config.clusters) total += cl.volume();
    return total;
}

SimulatorConfig default_benchmark(std::uint64_t seed) {
    SimulatorConfig config;
    config.rng_seed = seed;
    config.space.variables = {
        {"CID", InputVariableSpec::Kind::IntegerRange, 1, 20, {}},
        {"RID", InputVariableSpec::Kind::IntegerRange, 1, 62, {}},
        {"IID", InputVariableSpec::Kind::IntegerRange, 1, 50, {}},
        {"UID", InputVariableSpec::Kind::IntegerRange, 1, 50, {}},
    };
    const std::int64_t box_len[4] = {10, 15, 10, 10};
    Rng rng(seed);
    while (config.clusters.size() < 20) {
        BottleneckCluster candidate;
        candidate.delay = 5.0;
        for (std::size_t i = 0; i < 4; ++i) {
            const auto& v = config.space.variables[i];
            const std::int64_t lo = rng.range(v.lo, v.hi - box_len[i] + 1);
            candidate.box.push_back({lo, lo + box_len[i] - 1});
        }
        const bool clash = std::any_of(config.clusters.begin(), config.clusters.end(),
                                       [&](const BottleneckCluster& c) { return boxes_overlap(c, candidate); });
        if (!clash) config.clusters.push_back(std::move(candidate));
    }
    config.validate();
    return config;
}

SimulatorConfig remove_clusters(const SimulatorConfig& config, std::span<const std::size_t> indices) {
    for (std::size_t idx : indices) {
        if (idx >= config.clusters.size()) {
            throw ConfigError("cluster index " + std::to_string(idx) + " out of range");
        }
    }
    SimulatorConfig result = config;
    result.clusters.clear();
    for (std::size_t i = 0; i < config.clusters.size(); ++i) {
        if (std::find(indices.begin(), indices.end(), i) == indices.end()) {
            result.clusters.push_back(config.clusters[i]);
        }
    }
    return result;
}

}  // namespace acta

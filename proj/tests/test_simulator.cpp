#include <doctest.h>

#include "acta/simulator.hpp"

using namespace acta;

namespace {

// Tiny two-variable setup with one known cluster, for hand-checkable cases.
SimulatorConfig tiny_config() {
    SimulatorConfig config;
    config.space.variables = {
        {"X", InputVariableSpec::Kind::IntegerRange, 1, 10, {}},
        {"Y", InputVariableSpec::Kind::IntegerRange, 1, 10, {}},
    };
    BottleneckCluster cluster;
    cluster.box = {{3, 5}, {4, 6}};
    cluster.delay = 5.0;
    config.clusters = {cluster};
    config.validate();
    return config;
}

std::uint64_t brute_force_positives(const SimulatorConfig& config) {
    std::uint64_t count = 0;
    const std::uint64_t total = config.space.combination_count();
    for (std::uint64_t i = 0; i < total; ++i) {
        const ExecutedTest r = execute_sim(config, point_from_index(config.space, i));
        if (r.label.id == 1) count++;
    }
    return count;
}

}  // namespace

TEST_CASE("execution inside a cluster crosses the threshold") {
    const auto config = tiny_config();
    const ExecutedTest r = execute_sim(config, {{4, 5}});
    CHECK(r.t_exe == doctest::Approx(5.05));
    CHECK(r.label.id == 1);
}

TEST_CASE("execution outside any cluster stays fast") {
    const auto config = tiny_config();
    const ExecutedTest r = execute_sim(config, {{1, 1}});
    CHECK(r.t_exe == doctest::Approx(0.05));
    CHECK(r.label.id == 0);
}

TEST_CASE("cluster boundaries are inclusive") {
    const auto config = tiny_config();
    CHECK(execute_sim(config, {{5, 6}}).label.id == 1);  // upper corner
    CHECK(execute_sim(config, {{3, 4}}).label.id == 1);  // lower corner
    CHECK(execute_sim(config, {{6, 6}}).label.id == 0);  // one step out
}

TEST_CASE("execute_sim rejects invalid points") {
    const auto config = tiny_config();
    CHECK_THROWS_AS(execute_sim(config, {{0, 1}}), DomainError);
    CHECK_THROWS_AS(execute_sim(config, {{1}}), ShapeError);
}

TEST_CASE("positive_count of zero clusters is zero") {
    auto config = tiny_config();
    config.clusters.clear();
    CHECK(positive_count(config) == 0);
}

TEST_CASE("positive_count is the box volume") {
    const auto config = tiny_config();
    CHECK(positive_count(config) == 9);
    CHECK(positive_count(config) == brute_force_positives(config));
}

TEST_CASE("default benchmark matches its published shape") {
    const auto bench = default_benchmark();
    CHECK(bench.space.combination_count() == 3100000);
    CHECK(bench.clusters.size() == 20);
    for (const auto& c : bench.clusters) CHECK(c.volume() == 15000);
    CHECK(positive_count(bench) == 300000);
    CHECK(bench.threshold == doctest::Approx(1.0));
    CHECK(bench.base_time == doctest::Approx(0.05));
}

TEST_CASE("default benchmark is deterministic per seed") {
    const auto a = default_benchmark(123);
    const auto b = default_benchmark(123);
    const auto c = default_benchmark(124);
    REQUIRE(a.clusters.size() == b.clusters.size());
    bool all_equal = true;
    for (std::size_t i = 0; i < a.clusters.size(); ++i) {
        for (std::size_t d = 0; d < 4; ++d) {
            CHECK(a.clusters[i].box[d].lo == b.clusters[i].box[d].lo);
            CHECK(a.clusters[i].box[d].hi == b.clusters[i].box[d].hi);
            if (a.clusters[i].box[d].lo != c.clusters[i].box[d].lo) all_equal = false;
        }
    }
    CHECK_FALSE(all_equal);
}

TEST_CASE("oracle label is consistent with the threshold on samples") {
    const auto bench = default_benchmark();
    Rng rng(99);
    for (int i = 0; i < 20000; ++i) {
        const ExecutedTest r = execute_sim(bench, uniform_point(bench.space, rng));
        CHECK((r.label.id == 1) == (r.t_exe > bench.threshold));
        CHECK(r.t_exe > 0.0);
    }
}

TEST_CASE("remove_clusters arithmetic") {
    const auto bench = default_benchmark();

    SUBCASE("removing none keeps everything") {
        const auto same = remove_clusters(bench, {});
        CHECK(same.clusters.size() == 20);
        CHECK(positive_count(same) == 300000);
    }
    SUBCASE("removing all empties the positives") {
        std::vector<std::size_t> all;
        for (std::size_t i = 0; i < 20; ++i) all.push_back(i);
        const auto none = remove_clusters(bench, all);
        CHECK(none.clusters.empty());
        CHECK(positive_count(none) == 0);
    }
    SUBCASE("removing 2+3+4 in steps leaves 11 clusters") {
        auto step1 = remove_clusters(bench, std::vector<std::size_t>{0, 1});
        auto step2 = remove_clusters(step1, std::vector<std::size_t>{0, 1, 2});
        auto step3 = remove_clusters(step2, std::vector<std::size_t>{0, 1, 2, 3});
        CHECK(step3.clusters.size() == 11);
        CHECK(positive_count(step3) == 165000);
    }
    SUBCASE("out-of-range index is an error") {
        CHECK_THROWS_AS(remove_clusters(bench, std::vector<std::size_t>{20}), ConfigError);
    }
}

TEST_CASE("overlapping clusters are rejected") {
    auto config = tiny_config();
    BottleneckCluster overlapping;
    overlapping.box = {{5, 7}, {6, 8}};  // shares the corner (5,6)
    config.clusters.push_back(overlapping);
    CHECK_THROWS_AS(config.validate(), ConfigError);
    CHECK_THROWS_AS(positive_count(config), ConfigError);
}

TEST_CASE("validate rejects a threshold no cluster can cross") {
    auto config = tiny_config();
    config.clusters[0].delay = 0.5;  // base 0.05 + 0.5 < 1.0
    CHECK_THROWS_AS(config.validate(), ConfigError);
}

#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>

#include "acta/cgan.hpp"
#include "acta/simulator.hpp"

using namespace acta;

namespace {

std::vector<double> snapshot(nn::CondMlp& net) {
    std::vector<double> flat;
    for (auto p : net.parameters()) flat.insert(flat.end(), p.data, p.data + p.size);
    return flat;
}

// real examples drawn from the simulator, fake ones from the generator
void train_steps(CGANModel& model, const SimulatorConfig& sim, int steps) {
    for (int s = 0; s < steps; ++s) {
        std::vector<DiscExample> real, fake;
        for (int i = 0; i < 32; ++i) {
            const ExecutedTest r = execute_sim(sim, uniform_point(sim.space, model.rng));
            real.push_back({encode(sim.space, r.point), r.label, 1.0});
        }
        for (auto& [enc, label] : synthesize(model.gen, model.space, model.num_requirements, 32, model.rng)) {
            fake.push_back({enc, label, 0.0});
        }
        train_disc_batch(model, real, fake);
        train_gen_batch(model, 64);
    }
}

std::filesystem::path temp_file(const char* name) {
    return std::filesystem::temp_directory_path() / name;
}

}  // namespace

TEST_CASE("synthesize count, range and determinism") {
    const auto bench = default_benchmark();
    CGANModel model = make_cgan(bench.space, 2, 51);

    CHECK(synthesize(model.gen, model.space, 2, 0, model.rng).empty());

    Rng rng_a(77), rng_b(77);
    const auto batch_a = synthesize(model.gen, model.space, 2, 100, rng_a);
    const auto batch_b = synthesize(model.gen, model.space, 2, 100, rng_b);
    REQUIRE(batch_a.size() == 100);
    for (std::size_t i = 0; i < batch_a.size(); ++i) {
        CHECK(batch_a[i].second.id < 2);
        for (double f : batch_a[i].first.features) {
            CHECK(f > -1.0);
            CHECK(f < 1.0);
        }
        CHECK(batch_a[i].first == batch_b[i].first);
        CHECK(batch_a[i].second == batch_b[i].second);
    }
}

TEST_CASE("classify is a pure function into (0,1)") {
    const auto bench = default_benchmark();
    CGANModel model = make_cgan(bench.space, 2, 5);
    const EncodedTest enc = encode(bench.space, {{10, 30, 25, 25}});
    const double a = classify(model.disc, enc, ConditionLabel{1});
    const double b = classify(model.disc, enc, ConditionLabel{1});
    CHECK(a == b);
    CHECK(a > 0.0);
    CHECK(a < 1.0);
}

TEST_CASE("train_disc_batch leaves the generator untouched") {
    const auto bench = default_benchmark();
    CGANModel model = make_cgan(bench.space, 2, 5);
    const auto before = snapshot(model.gen.net);
    std::vector<DiscExample> real, fake;
    for (int i = 0; i < 32; ++i) {
        const ExecutedTest r = execute_sim(bench, uniform_point(bench.space, model.rng));
        real.push_back({encode(bench.space, r.point), r.label, 1.0});
    }
    for (auto& [enc, label] : synthesize(model.gen, model.space, 2, 32, model.rng)) {
        fake.push_back({enc, label, 0.0});
    }
    const double loss = train_disc_batch(model, real, fake);
    CHECK(loss >= 0.0);
    const auto after = snapshot(model.gen.net);
    REQUIRE(before.size() == after.size());
    for (std::size_t i = 0; i < before.size(); ++i) CHECK(before[i] == after[i]);
    CHECK(model.disc_opt.step_count == 1);
    CHECK(model.gen_opt.step_count == 0);
}

TEST_CASE("train_disc_batch rejects an empty batch") {
    const auto bench = default_benchmark();
    CGANModel model = make_cgan(bench.space, 2, 5);
    CHECK_THROWS_AS(train_disc_batch(model, {}, {}), UsageError);
}

TEST_CASE("repeated steps on a fixed separable batch drive the loss down") {
    const auto bench = default_benchmark();
    CGANModel model = make_cgan(bench.space, 2, 5);
    model.disc_opt.learning_rate = 1e-3;  // speeds the trend check up
    std::vector<DiscExample> real, fake;
    Rng rng(8);
    for (int i = 0; i < 32; ++i) {
        const TestPoint p = uniform_point(bench.space, rng);
        real.push_back({encode(bench.space, p), ConditionLabel{0}, 1.0});
    }
    for (auto& [enc, label] : synthesize(model.gen, model.space, 2, 32, rng)) {
        fake.push_back({enc, label, 0.0});
    }
    std::vector<double> losses;
    for (int s = 0; s < 50; ++s) losses.push_back(train_disc_batch(model, real, fake));
    CHECK(losses.back() < losses.front());
    // monotone trend over 10-step windows, not per step
    for (int w = 0; w + 20 <= 50; w += 10) {
        double early = 0.0, late = 0.0;
        for (int i = 0; i < 10; ++i) {
            early += losses[w + i];
            late += losses[w + 10 + i];
        }
        CHECK(late < early);
    }
}

TEST_CASE("train_gen_batch leaves the discriminator untouched") {
    const auto bench = default_benchmark();
    CGANModel model = make_cgan(bench.space, 2, 5);
    const auto before = snapshot(model.disc.net);
    const double loss = train_gen_batch(model, 64);
    CHECK(loss >= 0.0);
    const auto after = snapshot(model.disc.net);
    for (std::size_t i = 0; i < before.size(); ++i) CHECK(before[i] == after[i]);
    CHECK(model.gen_opt.step_count == 1);
    CHECK(model.disc_opt.step_count == 0);
}

TEST_CASE("constant-head discriminator gives exactly ln 2 and a frozen generator") {
    const auto bench = default_benchmark();
    CGANModel model = make_cgan(bench.space, 2, 5);
    // zero output layer => sigmoid(0) = 0.5 for every input
    for (double& w : model.disc.net.output.weights.values()) w = 0.0;
    for (double& b : model.disc.net.output.bias) b = 0.0;
    const auto before = snapshot(model.gen.net);
    const double loss = train_gen_batch(model, 32);
    CHECK(loss == doctest::Approx(std::log(2.0)).epsilon(1e-12));
    // the constant ignores its input, so no gradient reaches the generator
    const auto after = snapshot(model.gen.net);
    for (std::size_t i = 0; i < before.size(); ++i) CHECK(before[i] == after[i]);
}

TEST_CASE("a briefly trained discriminator separates real from synthetic") {
    const auto bench = default_benchmark();
    CGANModel model = make_cgan(bench.space, 2, 13);
    train_steps(model, bench, 300);

    Rng rng(1234);
    double real_mean = 0.0, fake_mean = 0.0;
    for (int i = 0; i < 1000; ++i) {
        const ExecutedTest r = execute_sim(bench, uniform_point(bench.space, rng));
        real_mean += classify(model.disc, encode(bench.space, r.point), r.label);
    }
    for (auto& [enc, label] : synthesize(model.gen, model.space, 2, 1000, rng)) {
        fake_mean += classify(model.disc, enc, label);
    }
    real_mean /= 1000.0;
    fake_mean /= 1000.0;
    CHECK(real_mean > fake_mean);
}

TEST_CASE("checkpoint round-trips a fresh model bit-exactly") {
    const auto bench = default_benchmark();
    const CGANModel model = make_cgan(bench.space, 2, 2024);
    const auto path = temp_file("acta_ckpt_fresh.bin");
    save_checkpoint(model, path.string());
    const CGANModel loaded = load_checkpoint(path.string());
    CHECK(models_equal(model, loaded));
    std::filesystem::remove(path);
}

TEST_CASE("checkpoint round-trips a trained model bit-exactly") {
    const auto bench = default_benchmark();
    CGANModel model = make_cgan(bench.space, 2, 2025);
    train_steps(model, bench, 100);
    const auto path = temp_file("acta_ckpt_trained.bin");
    save_checkpoint(model, path.string());
    const CGANModel loaded = load_checkpoint(path.string());
    CHECK(models_equal(model, loaded));
    std::filesystem::remove(path);
}

TEST_CASE("resumed training continues bit-identically") {
    const auto bench = default_benchmark();
    CGANModel uninterrupted = make_cgan(bench.space, 2, 31);
    CGANModel first_half = make_cgan(bench.space, 2, 31);

    train_steps(uninterrupted, bench, 40);

    train_steps(first_half, bench, 20);
    const auto path = temp_file("acta_ckpt_resume.bin");
    save_checkpoint(first_half, path.string());
    CGANModel resumed = load_checkpoint(path.string());
    train_steps(resumed, bench, 20);

    CHECK(models_equal(uninterrupted, resumed));
    std::filesystem::remove(path);
}

TEST_CASE("checkpoint loading fails cleanly on damaged files") {
    const auto bench = default_benchmark();
    const CGANModel model = make_cgan(bench.space, 2, 7);
    const auto path = temp_file("acta_ckpt_damage.bin");
    save_checkpoint(model, path.string());

    auto read_bytes = [&] {
        std::ifstream in(path, std::ios::binary);
        return std::string(std::istreambuf_iterator<char>(in), {});
    };
    auto write_bytes = [&](const std::string& bytes) {
        std::ofstream out(path, std::ios::binary | std::ios::trunc);
        out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    };
    const std::string original = read_bytes();

    SUBCASE("corrupted magic") {
        std::string bad = original;
        bad[0] = 'X';
        write_bytes(bad);
        CHECK_THROWS_AS(load_checkpoint(path.string()), CheckpointFormatError);
    }
    SUBCASE("unsupported version") {
        std::string bad = original;
        bad[4] = 99;
        write_bytes(bad);
        CHECK_THROWS_AS(load_checkpoint(path.string()), CheckpointVersionError);
    }
    SUBCASE("truncated file") {
        write_bytes(original.substr(0, original.size() / 2));
        CHECK_THROWS_AS(load_checkpoint(path.string()), CheckpointTruncatedError);
    }
    SUBCASE("missing file") {
        std::filesystem::remove(path);
        CHECK_THROWS_AS(load_checkpoint(path.string()), CheckpointError);
    }
    std::filesystem::remove(path);
}

TEST_CASE("identical seeds give identical training trajectories") {
    const auto bench = default_benchmark();
    CGANModel a = make_cgan(bench.space, 2, 404);
    CGANModel b = make_cgan(bench.space, 2, 404);
    train_steps(a, bench, 30);
    train_steps(b, bench, 30);
    CHECK(models_equal(a, b));
}

#include "acta/cgan.hpp"

#include <cmath>

namespace acta {

CGANModel make_cgan(const InputSpace& space, std::size_t num_requirements, std::uint64_t seed) {
    space.validate();
    if (num_requirements < 1) throw ConfigError("need at least one requirement label");
    CGANModel model;
    model.space = space;
    model.num_requirements = num_requirements;
    model.rng_seed = seed;
    model.rng = Rng(seed);
    const std::size_t n = space.dimension();
    // generator first, then discriminator, off the single model stream
    model.gen.net = nn::CondMlp(n, num_requirements, kEmbedDim, kHiddenDim, n,
                                nn::Activation::Tanh, model.rng);
    model.disc.net = nn::CondMlp(n, num_requirements, kEmbedDim, kHiddenDim, 1,
                                 nn::Activation::Sigmoid, model.rng);
    model.gen_opt.learning_rate = kLearningRate;
    model.disc_opt.learning_rate = kLearningRate;
    model.gen_opt.init(model.gen.net.parameter_sizes());
    model.disc_opt.init(model.disc.net.parameter_sizes());
    return model;
}

std::vector<std::pair<EncodedTest, ConditionLabel>> synthesize(GeneratorModel& gen,
                                                               const InputSpace& space,
                                                               std::size_t num_requirements,
                                                               std::size_t count, Rng& rng) {
    std::vector<std::pair<EncodedTest, ConditionLabel>> out;
    out.reserve(count);
    for (std::size_t i = 0; i < count; ++i) {
        const ConditionLabel label{static_cast<std::uint32_t>(rng.below(num_requirements))};
        out.emplace_back(generate_one(gen, space, label, rng), label);
    }
    return out;
}

EncodedTest generate_one(GeneratorModel& gen, const InputSpace& space, ConditionLabel label, Rng& rng) {
    const EncodedTest seed_sample = encode(space, uniform_point(space, rng));
    return EncodedTest{gen.net.forward(seed_sample.features, label.id)};
}

double classify(DiscriminatorModel& disc, const EncodedTest& test, ConditionLabel label) {
    return disc.net.forward(test.features, label.id)[0];
}

namespace {

// mean BCE gradient over a batch, accumulated into `grads`
double disc_example_pass(DiscriminatorModel& disc, const DiscExample& ex, nn::Gradients& grads) {
    const double p = classify(disc, ex.test, ex.label);
    const double d = nn::bce_grad(p, ex.target);
    const double dl[1] = {d};
    nn::accumulate(grads, disc.net.backward(dl).grads);
    return nn::bce_loss(p, ex.target);
}

}  // namespace

double train_disc_batch(CGANModel& model, std::span<const DiscExample> real,
                        std::span<const DiscExample> fake) {
    const std::size_t total = real.size() + fake.size();
    if (total == 0) throw UsageError("train_disc_batch: empty batch");
    auto sizes = model.disc.net.parameter_sizes();
    nn::Gradients grads = nn::zero_gradients(sizes);
    double loss = 0.0;
    for (const DiscExample& ex : real) loss += disc_example_pass(model.disc, ex, grads);
    for (const DiscExample& ex : fake) loss += disc_example_pass(model.disc, ex, grads);
    nn::scale(grads, 1.0 / static_cast<double>(total));
    auto params = model.disc.net.parameters();
    nn::adam_step(model.disc_opt, params, grads);
    return loss / static_cast<double>(total);
}

double train_gen_batch(CGANModel& model, std::size_t batch_size) {
    if (batch_size == 0) throw UsageError("train_gen_batch: empty batch");
    auto sizes = model.gen.net.parameter_sizes();
    nn::Gradients grads = nn::zero_gradients(sizes);
    double loss = 0.0;
    for (std::size_t i = 0; i < batch_size; ++i) {
        const ConditionLabel label{static_cast<std::uint32_t>(model.rng.below(model.num_requirements))};
        const EncodedTest candidate = generate_one(model.gen, model.space, label, model.rng);
        const double p = classify(model.disc, candidate, label);
        loss += nn::bce_loss(p, 1.0);  // target-flip: the generator wants "real"
        const double dl[1] = {nn::bce_grad(p, 1.0)};
        const nn::Vec through_disc = model.disc.net.backward(dl).feature_grad;
        nn::accumulate(grads, model.gen.net.backward(through_disc).grads);
    }
    nn::scale(grads, 1.0 / static_cast<double>(batch_size));
    auto params = model.gen.net.parameters();
    nn::adam_step(model.gen_opt, params, grads);
    return loss / static_cast<double>(batch_size);
}

namespace {

bool vec_equal(const nn::Vec& a, const nn::Vec& b) {
    if (a.size() != b.size()) return false;
    for (std::size_t i = 0; i < a.size(); ++i) {
        // bit-level comparison; NaN never occurs in healthy models
        if (a[i] != b[i]) return false;
    }
    return true;
}

bool mlp_equal(const nn::CondMlp& a, const nn::CondMlp& b) {
    return vec_equal(a.embedding.table.values(), b.embedding.table.values()) &&
           vec_equal(a.hidden1.weights.values(), b.hidden1.weights.values()) &&
           vec_equal(a.hidden1.bias, b.hidden1.bias) &&
           vec_equal(a.hidden2.weights.values(), b.hidden2.weights.values()) &&
           vec_equal(a.hidden2.bias, b.hidden2.bias) &&
           vec_equal(a.output.weights.values(), b.output.weights.values()) &&
           vec_equal(a.output.bias, b.output.bias);
}

bool adam_equal(const nn::AdamState& a, const nn::AdamState& b) {
    if (a.learning_rate != b.learning_rate || a.beta1 != b.beta1 || a.beta2 != b.beta2 ||
        a.epsilon != b.epsilon || a.step_count != b.step_count ||
        a.first_moment.size() != b.first_moment.size()) {
        return false;
    }
    for (std::size_t i = 0; i < a.first_moment.size(); ++i) {
        if (!vec_equal(a.first_moment[i], b.first_moment[i]) ||
            !vec_equal(a.second_moment[i], b.second_moment[i])) {
            return false;
        }
    }
    return true;
}

}  // namespace

bool models_equal(const CGANModel& a, const CGANModel& b) {
    return a.num_requirements == b.num_requirements && a.rng_seed == b.rng_seed &&
           a.rng.state() == b.rng.state() && space_to_json(a.space) == space_to_json(b.space) &&
           mlp_equal(a.gen.net, b.gen.net) && mlp_equal(a.disc.net, b.disc.net) &&
           adam_equal(a.gen_opt, b.gen_opt) && adam_equal(a.disc_opt, b.disc_opt);
}

}  // namespace acta

#pragma once

#include <span>
#include <string>
#include <utility>
#include <vector>

#include "acta/codec.hpp"
#include "acta/nn.hpp"

namespace acta {

inline constexpr std::size_t kEmbedDim = 10;
inline constexpr std::size_t kHiddenDim = 128;
inline constexpr double kLearningRate = 1e-4;

/// Maps an encoded sample plus condition label to a candidate test; Tanh output
/// keeps every generated feature inside (-1, 1).
struct GeneratorModel {
    nn::CondMlp net;
};

/// Conditional real-vs-synthetic classifier with a Sigmoid scalar head.
struct DiscriminatorModel {
    nn::CondMlp net;
};

struct CGANModel {
    GeneratorModel gen;
    DiscriminatorModel disc;
    nn::AdamState gen_opt;
    nn::AdamState disc_opt;
    InputSpace space;
    std::size_t num_requirements = 0;
    std::uint64_t rng_seed = 0;
    Rng rng{0};  // live stream; advances with every synthesis/training call
};

CGANModel make_cgan(const InputSpace& space, std::size_t num_requirements, std::uint64_t seed);

/// One discriminator training example: encoded features, condition label, and
/// the BCE target (1 for real tests, 0 for synthetic ones).
struct DiscExample {
    EncodedTest test;
    ConditionLabel label;
    double target = 1.0;
};

// Draws `count` uniform samples from the encoded input space, assigns each a
// uniformly random condition label, and maps them through the generator.
std::vector<std::pair<EncodedTest, ConditionLabel>> synthesize(GeneratorModel& gen,
                                                               const InputSpace& space,
                                                               std::size_t num_requirements,
                                                               std::size_t count, Rng& rng);

// Generator output for one encoded sample under a fixed condition.
EncodedTest generate_one(GeneratorModel& gen, const InputSpace& space, ConditionLabel label, Rng& rng);

// P(real | test, label) in (0, 1).
double classify(DiscriminatorModel& disc, const EncodedTest& test, ConditionLabel label);

// One averaged BCE/Adam step on the discriminator only. Returns the batch loss.
double train_disc_batch(CGANModel& model, std::span<const DiscExample> real,
                        std::span<const DiscExample> fake);

// One combined-model step: synthesize batch_size candidates, score them with
// target 1 through the frozen discriminator, update the generator only.
double train_gen_batch(CGANModel& model, std::size_t batch_size);

bool models_equal(const CGANModel& a, const CGANModel& b);  // bit-exact

inline constexpr std::uint32_t kCheckpointVersion = 1;

// Little-endian binary, magic "ACTA", then a table of named f64 arrays.
// Written atomically (temp file + rename).
void save_checkpoint(const CGANModel& model, const std::string& path);
CGANModel load_checkpoint(const std::string& path);

}  // namespace acta

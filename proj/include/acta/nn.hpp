#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "acta/errors.hpp"
#include "acta/rng.hpp"

namespace acta::nn {

using Vec = std::vector<double>;

/// Dense row-major matrix of 64-bit reals. Every mutating operation in this
/// module keeps entries finite; non-finite results raise Error.
class Matrix {
public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
        : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

    double& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
    double operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    std::size_t size() const { return data_.size(); }

    double* data() { return data_.data(); }
    const double* data() const { return data_.data(); }
    Vec& values() { return data_; }
    const Vec& values() const { return data_; }

    bool same_shape(const Matrix& other) const { return rows_ == other.rows_ && cols_ == other.cols_; }

private:
    std::size_t rows_ = 0, cols_ = 0;
    Vec data_;
};

enum class Activation { Identity, ReLU, Tanh, Sigmoid };

double activate(Activation a, double x);
// derivative of the activation at pre-activation `pre` whose output was `out`
double activate_grad(Activation a, double pre, double out);
const char* activation_name(Activation a);

struct DenseLayer {
    Matrix weights;  // out x in
    Vec bias;        // out
    Activation activation = Activation::Identity;

    // Glorot-uniform weights, zero bias.
    static DenseLayer init_glorot(std::size_t in, std::size_t out, Activation act, Rng& rng);

    std::size_t in_dim() const { return weights.cols(); }
    std::size_t out_dim() const { return weights.rows(); }
};

// weights * input + bias, no activation
Vec affine(const DenseLayer& layer, std::span<const double> input);
// activation(weights * input + bias)
Vec dense_forward(const DenseLayer& layer, std::span<const double> input);

struct EmbeddingLayer {
    Matrix table;  // num_labels x embed_dim

    static EmbeddingLayer init_uniform(std::size_t num_labels, std::size_t dim, Rng& rng);

    std::size_t num_labels() const { return table.rows(); }
    std::size_t dim() const { return table.cols(); }
    std::span<const double> row(std::uint32_t label) const;
};

// Binary cross-entropy; prediction is clamped into [1e-7, 1 - 1e-7] before the logs.
double bce_loss(double prediction, double target);
// d bce_loss / d prediction at the clamped point
double bce_grad(double prediction, double target);

struct ParamRef {
    double* data;
    std::size_t size;
};

using Gradients = std::vector<Vec>;

Gradients zero_gradients(const std::vector<std::size_t>& sizes);
void accumulate(Gradients& into, const Gradients& g);
void scale(Gradients& g, double factor);

struct AdamState {
    double learning_rate = 1e-4;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double epsilon = 1e-8;
    std::vector<Vec> first_moment;
    std::vector<Vec> second_moment;
    std::uint64_t step_count = 0;

    void init(const std::vector<std::size_t>& sizes);
    bool initialized() const { return !first_moment.empty(); }
};

// One Adam update with bias correction, in place. Moments are lazily sized on
// the first call.
void adam_step(AdamState& state, std::span<const ParamRef> params, const Gradients& grads);

/// Conditional MLP shared by the generator and the discriminator:
/// concat(features, embed(label)) -> hidden1 -> hidden2 -> output.
/// forward() caches the activation trace that backward() consumes.
class CondMlp {
public:
    CondMlp() = default;
    CondMlp(std::size_t feature_dim, std::size_t num_labels, std::size_t embed_dim,
            std::size_t hidden_dim, std::size_t output_dim, Activation output_activation, Rng& rng);

    Vec forward(std::span<const double> features, std::uint32_t label);

    struct BackwardResult {
        Gradients grads;   // embedding, W1, b1, W2, b2, W3, b3
        Vec feature_grad;  // d loss / d input features
    };
    // Gradients of the loss whose derivative w.r.t. the output is `output_grad`,
    // evaluated at the last forward() trace. UsageError without a prior forward.
    BackwardResult backward(std::span<const double> output_grad) const;

    std::vector<ParamRef> parameters();
    std::vector<std::size_t> parameter_sizes() const;

    std::size_t feature_dim() const { return feature_dim_; }
    std::size_t num_labels() const { return embedding.num_labels(); }
    std::size_t embed_dim() const { return embedding.dim(); }
    std::size_t hidden_dim() const { return hidden1.out_dim(); }
    std::size_t output_dim() const { return output.out_dim(); }

    EmbeddingLayer embedding;
    DenseLayer hidden1, hidden2, output;

private:
    struct Trace {
        Vec features;
        std::uint32_t label = 0;
        Vec joined;  // features ++ embedding row
        Vec pre1, act1, pre2, act2, pre3, out;
        bool valid = false;
    };

    std::size_t feature_dim_ = 0;
    Trace trace_;
};

}  // namespace acta::nn

#include "acta/nn.hpp"

#include <cmath>
#include <string>

namespace acta::nn {

namespace {

void check_finite(std::span<const double> v, const char* where) {
    for (double x : v) {
        if (!std::isfinite(x)) throw Error(std::string(where) + ": non-finite value produced");
    }
}

}  // namespace

double activate(Activation a, double x) {
    switch (a) {
        case Activation::Identity: return x;
        case Activation::ReLU: return x > 0.0 ? x : 0.0;
        case Activation::Tanh: return std::tanh(x);
        case Activation::Sigmoid: return 1.0 / (1.0 + std::exp(-x));
    }
    throw Error("unknown activation");
}

double activate_grad(Activation a, double pre, double out) {
    switch (a) {
        case Activation::Identity: return 1.0;
        case Activation::ReLU: return pre > 0.0 ? 1.0 : 0.0;
        case Activation::Tanh: return 1.0 - out * out;
        case Activation::Sigmoid: return out * (1.0 - out);
    }
    throw Error("unknown activation");
}

const char* activation_name(Activation a) {
    switch (a) {
        case Activation::Identity: return "identity";
        case Activation::ReLU: return "relu";
        case Activation::Tanh: return "tanh";
        case Activation::Sigmoid: return "sigmoid";
    }
    return "?";
}

DenseLayer DenseLayer::init_glorot(std::size_t in, std::size_t out, Activation act, Rng& rng) {
    DenseLayer layer;
    layer.weights = Matrix(out, in);
    layer.bias.assign(out, 0.0);
    layer.activation = act;
    const double limit = std::sqrt(6.0 / static_cast<double>(in + out));
    for (double& w : layer.weights.values()) w = (rng.uniform() * 2.0 - 1.0) * limit;
    return layer;
}

Vec affine(const DenseLayer& layer, std::span<const double> input) {
    if (input.size() != layer.in_dim()) {
        throw ShapeError(shape_msg("dense input", layer.in_dim(), input.size()));
    }
    if (layer.bias.size() != layer.out_dim()) {
        throw ShapeError(shape_msg("dense bias", layer.out_dim(), layer.bias.size()));
    }
    const std::size_t out = layer.out_dim(), in = layer.in_dim();
    Vec result(out);
    const double* w = layer.weights.data();
    for (std::size_t r = 0; r < out; ++r) {
        double acc = layer.bias[r];
        const double* row = w + r * in;
        for (std::size_t c = 0; c < in; ++c) acc += row[c] * input[c];
        result[r] = acc;
    }
    return result;
}

Vec dense_forward(const DenseLayer& layer, std::span<const double> input) {
    Vec result = affine(layer, input);
    for (double& x : result) x = activate(layer.activation, x);
    check_finite(result, "dense_forward");
    return result;
}

EmbeddingLayer EmbeddingLayer::init_uniform(std::size_t num_labels, std::size_t dim, Rng& rng) {
    // Unit-scale rows so distinct labels are well separated from the start;
    // near-zero init would leave the condition path mute for thousands of steps.
    EmbeddingLayer layer;
    layer.table = Matrix(num_labels, dim);
    for (double& w : layer.table.values()) w = rng.normal();
    return layer;
}

std::span<const double> EmbeddingLayer::row(std::uint32_t label) const {
    if (label >= num_labels()) {
        throw ShapeError(shape_msg("embedding label", num_labels(), label));
    }
    return {table.data() + static_cast<std::size_t>(label) * dim(), dim()};
}

namespace {
constexpr double kBceEps = 1e-7;
double clamp_pred(double p) {
    if (p < kBceEps) return kBceEps;
    if (p > 1.0 - kBceEps) return 1.0 - kBceEps;
    return p;
}
}  // namespace

double bce_loss(double prediction, double target) {
    const double p = clamp_pred(prediction);
    return -(target * std::log(p) + (1.0 - target) * std::log(1.0 - p));
}

double bce_grad(double prediction, double target) {
    const double p = clamp_pred(prediction);
    return (p - target) / (p * (1.0 - p));
}

Gradients zero_gradients(const std::vector<std::size_t>& sizes) {
    Gradients g;
    g.reserve(sizes.size());
    for (std::size_t s : sizes) g.emplace_back(s, 0.0);
    return g;
}

void accumulate(Gradients& into, const Gradients& g) {
    if (into.size() != g.size()) throw ShapeError(shape_msg("gradient arrays", into.size(), g.size()));
    for (std::size_t i = 0; i < g.size(); ++i) {
        if (into[i].size() != g[i].size()) {
            throw ShapeError(shape_msg("gradient array " + std::to_string(i), into[i].size(), g[i].size()));
        }
        for (std::size_t j = 0; j < g[i].size(); ++j) into[i][j] += g[i][j];
    }
}

void scale(Gradients& g, double factor) {
    for (Vec& arr : g)
        for (double& x : arr) x *= factor;
}

void AdamState::init(const std::vector<std::size_t>& sizes) {
    first_moment.clear();
    second_moment.clear();
    for (std::size_t s : sizes) {
        first_moment.emplace_back(s, 0.0);
        second_moment.emplace_back(s, 0.0);
    }
    step_count = 0;
}

void adam_step(AdamState& state, std::span<const ParamRef> params, const Gradients& grads) {
    if (params.size() != grads.size()) {
        throw ShapeError(shape_msg("adam parameter arrays", params.size(), grads.size()));
    }
    if (!state.initialized()) {
        std::vector<std::size_t> sizes;
        for (const ParamRef& p : params) sizes.push_back(p.size);
        state.init(sizes);
    }
    if (state.first_moment.size() != params.size()) {
        throw ShapeError(shape_msg("adam moment arrays", state.first_moment.size(), params.size()));
    }
    state.step_count += 1;
    const double b1 = state.beta1, b2 = state.beta2;
    const double bias1 = 1.0 - std::pow(b1, static_cast<double>(state.step_count));
    const double bias2 = 1.0 - std::pow(b2, static_cast<double>(state.step_count));
    for (std::size_t i = 0; i < params.size(); ++i) {
        if (grads[i].size() != params[i].size || state.first_moment[i].size() != params[i].size) {
            throw ShapeError(shape_msg("adam array " + std::to_string(i), params[i].size, grads[i].size()));
        }
        double* p = params[i].data;
        Vec& m = state.first_moment[i];
        Vec& v = state.second_moment[i];
        for (std::size_t j = 0; j < params[i].size; ++j) {
            const double g = grads[i][j];
            m[j] = b1 * m[j] + (1.0 - b1) * g;
            v[j] = b2 * v[j] + (1.0 - b2) * g * g;
            const double m_hat = m[j] / bias1;
            const double v_hat = v[j] / bias2;
            p[j] -= state.learning_rate * m_hat / (std::sqrt(v_hat) + state.epsilon);
            if (!std::isfinite(p[j])) throw Error("adam_step: non-finite parameter");
        }
    }
}

CondMlp::CondMlp(std::size_t feature_dim, std::size_t num_labels, std::size_t embed_dim,
                 std::size_t hidden_dim, std::size_t output_dim, Activation output_activation, Rng& rng)
    : feature_dim_(feature_dim) {
    embedding = EmbeddingLayer::init_uniform(num_labels, embed_dim, rng);
    hidden1 = DenseLayer::init_glorot(feature_dim + embed_dim, hidden_dim, Activation::ReLU, rng);
    hidden2 = DenseLayer::init_glorot(hidden_dim, hidden_dim, Activation::ReLU, rng);
    output = DenseLayer::init_glorot(hidden_dim, output_dim, output_activation, rng);
}

Vec CondMlp::forward(std::span<const double> features, std::uint32_t label) {
    if (features.size() != feature_dim_) {
        throw ShapeError(shape_msg("CondMlp features", feature_dim_, features.size()));
    }
    Trace t;
    t.features.assign(features.begin(), features.end());
    t.label = label;
    const std::span<const double> emb = embedding.row(label);
    t.joined.reserve(feature_dim_ + emb.size());
    t.joined.assign(features.begin(), features.end());
    t.joined.insert(t.joined.end(), emb.begin(), emb.end());

    t.pre1 = affine(hidden1, t.joined);
    t.act1.resize(t.pre1.size());
    for (std::size_t i = 0; i < t.pre1.size(); ++i) t.act1[i] = activate(hidden1.activation, t.pre1[i]);

    t.pre2 = affine(hidden2, t.act1);
    t.act2.resize(t.pre2.size());
    for (std::size_t i = 0; i < t.pre2.size(); ++i) t.act2[i] = activate(hidden2.activation, t.pre2[i]);

    t.pre3 = affine(output, t.act2);
    t.out.resize(t.pre3.size());
    for (std::size_t i = 0; i < t.pre3.size(); ++i) t.out[i] = activate(output.activation, t.pre3[i]);

    check_finite(t.out, "CondMlp::forward");
    t.valid = true;
    trace_ = std::move(t);
    return trace_.out;
}

CondMlp::BackwardResult CondMlp::backward(std::span<const double> output_grad) const {
    if (!trace_.valid) throw UsageError("CondMlp::backward called before forward");
    if (output_grad.size() != output.out_dim()) {
        throw ShapeError(shape_msg("CondMlp output_grad", output.out_dim(), output_grad.size()));
    }
    const Trace& t = trace_;
    const std::size_t h = hidden1.out_dim();
    const std::size_t joined_dim = t.joined.size();
    const std::size_t out_dim = output.out_dim();

    // delta3 = dL/d pre3
    Vec delta3(out_dim);
    for (std::size_t i = 0; i < out_dim; ++i) {
        delta3[i] = output_grad[i] * activate_grad(output.activation, t.pre3[i], t.out[i]);
    }

    BackwardResult res;
    res.grads = zero_gradients(parameter_sizes());
    Vec& g_emb = res.grads[0];
    Vec& g_w1 = res.grads[1];
    Vec& g_b1 = res.grads[2];
    Vec& g_w2 = res.grads[3];
    Vec& g_b2 = res.grads[4];
    Vec& g_w3 = res.grads[5];
    Vec& g_b3 = res.grads[6];

    // output layer
    for (std::size_t r = 0; r < out_dim; ++r) {
        g_b3[r] = delta3[r];
        for (std::size_t c = 0; c < h; ++c) g_w3[r * h + c] = delta3[r] * t.act2[c];
    }
    // delta2 = (W3^T delta3) * act'(pre2)
    Vec delta2(h, 0.0);
    for (std::size_t r = 0; r < out_dim; ++r) {
        const double d = delta3[r];
        const double* row = output.weights.data() + r * h;
        for (std::size_t c = 0; c < h; ++c) delta2[c] += row[c] * d;
    }
    for (std::size_t c = 0; c < h; ++c) delta2[c] *= activate_grad(hidden2.activation, t.pre2[c], t.act2[c]);

    for (std::size_t r = 0; r < h; ++r) {
        g_b2[r] = delta2[r];
        for (std::size_t c = 0; c < h; ++c) g_w2[r * h + c] = delta2[r] * t.act1[c];
    }
    // delta1 = (W2^T delta2) * act'(pre1)
    Vec delta1(h, 0.0);
    for (std::size_t r = 0; r < h; ++r) {
        const double d = delta2[r];
        const double* row = hidden2.weights.data() + r * h;
        for (std::size_t c = 0; c < h; ++c) delta1[c] += row[c] * d;
    }
    for (std::size_t c = 0; c < h; ++c) delta1[c] *= activate_grad(hidden1.activation, t.pre1[c], t.act1[c]);

    for (std::size_t r = 0; r < h; ++r) {
        g_b1[r] = delta1[r];
        for (std::size_t c = 0; c < joined_dim; ++c) g_w1[r * joined_dim + c] = delta1[r] * t.joined[c];
    }
    // delta0 = W1^T delta1, split into feature part and embedding-row part
    Vec delta0(joined_dim, 0.0);
    for (std::size_t r = 0; r < h; ++r) {
        const double d = delta1[r];
        const double* row = hidden1.weights.data() + r * joined_dim;
        for (std::size_t c = 0; c < joined_dim; ++c) delta0[c] += row[c] * d;
    }
    res.feature_grad.assign(delta0.begin(), delta0.begin() + static_cast<std::ptrdiff_t>(feature_dim_));
    const std::size_t ed = embed_dim();
    double* emb_row = g_emb.data() + static_cast<std::size_t>(t.label) * ed;
    for (std::size_t c = 0; c < ed; ++c) emb_row[c] = delta0[feature_dim_ + c];

    return res;
}

std::vector<ParamRef> CondMlp::parameters() {
    return {
        {embedding.table.data(), embedding.table.size()},
        {hidden1.weights.data(), hidden1.weights.size()},
        {hidden1.bias.data(), hidden1.bias.size()},
        {hidden2.weights.data(), hidden2.weights.size()},
        {hidden2.bias.data(), hidden2.bias.size()},
        {output.weights.data(), output.weights.size()},
        {output.bias.data(), output.bias.size()},
    };
}

std::vector<std::size_t> CondMlp::parameter_sizes() const {
    return {
        embedding.table.size(), hidden1.weights.size(), hidden1.bias.size(),
        hidden2.weights.size(), hidden2.bias.size(),    output.weights.size(),
        output.bias.size(),
    };
}

}  // namespace acta::nn

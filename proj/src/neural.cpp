#include "motrans/neural.hpp"

#include <cmath>
#include <string>

#include <json.hpp>

#include "motrans/errors.hpp"
#include "motrans/io.hpp"

namespace motrans {

namespace {

// Pre-activation clamp. +-36 keeps sigmoid strictly inside (0,1) in double
// precision (1/(1+e^-36) < 1, e^-36/(1+e^-36) > 0) while changing nothing
// in the unsaturated range.
constexpr double kSigmoidClamp = 36.0;

double sigmoid(double z) {
    if (z > kSigmoidClamp) z = kSigmoidClamp;
    if (z < -kSigmoidClamp) z = -kSigmoidClamp;
    return 1.0 / (1.0 + std::exp(-z));
}

void validate_dims(const std::vector<std::size_t>& dims) {
    if (dims.size() < 2) throw InvalidDims("need at least input and output layers");
    for (std::size_t d : dims)
        if (d == 0) throw InvalidDims("layer width must be positive");
}

void validate_structure(const MlpParams& p) {
    validate_dims(p.layer_dims);
    const std::size_t layers = p.layer_dims.size() - 1;
    if (p.weights.size() != layers || p.biases.size() != layers)
        throw InvalidDims("weight/bias layer count does not match layer_dims");
    for (std::size_t k = 0; k < layers; ++k) {
        if (p.weights[k].size() != p.layer_dims[k + 1] * p.layer_dims[k])
            throw InvalidDims("weight matrix shape mismatch at layer " + std::to_string(k));
        if (p.biases[k].size() != p.layer_dims[k + 1])
            throw InvalidDims("bias vector shape mismatch at layer " + std::to_string(k));
    }
    if (p.dropout_rates.size() != layers - 1)
        throw InvalidDims("need one dropout rate per hidden layer");
    for (double r : p.dropout_rates)
        if (!(r >= 0.0 && r < 1.0)) throw InvalidDims("dropout rate must be in [0, 1)");
}

}  // namespace

MlpParams init_mlp(std::vector<std::size_t> layer_dims, std::vector<double> dropout_rates,
                   std::uint64_t seed) {
    validate_dims(layer_dims);
    const std::size_t layers = layer_dims.size() - 1;
    if (dropout_rates.empty()) dropout_rates.assign(layers - 1, 0.0);

    MlpParams p;
    p.layer_dims = std::move(layer_dims);
    p.dropout_rates = std::move(dropout_rates);
    p.weights.resize(layers);
    p.biases.resize(layers);

    SplitMix64 rng = rng_stream(seed, "init");
    for (std::size_t k = 0; k < layers; ++k) {
        const std::size_t fan_in = p.layer_dims[k];
        const std::size_t fan_out = p.layer_dims[k + 1];
        const double bound = std::sqrt(6.0 / static_cast<double>(fan_in + fan_out));
        p.weights[k].resize(fan_out * fan_in);
        for (double& w : p.weights[k]) w = rng.next_range(-bound, bound);
        p.biases[k].assign(fan_out, 0.0);
    }
    validate_structure(p);
    return p;
}

std::vector<double> forward(const MlpParams& params, std::span<const double> input,
                            Mode mode, ForwardCache* cache, SplitMix64* dropout_rng) {
    validate_structure(params);
    if (input.size() != params.input_dim())
        throw ShapeMismatch("input size " + std::to_string(input.size()) +
                            " != network input dim " + std::to_string(params.input_dim()));

    const std::size_t layers = params.num_layers();
    if (cache) {
        cache->input.assign(input.begin(), input.end());
        cache->pre.assign(layers, {});
        cache->act.assign(layers, {});
        cache->drop.assign(layers - 1, {});
        cache->train = mode == Mode::Train;
    }

    std::vector<double> x(input.begin(), input.end());
    for (std::size_t k = 0; k < layers; ++k) {
        const std::size_t rows = params.layer_dims[k + 1];
        const std::size_t cols = params.layer_dims[k];
        const std::vector<double>& w = params.weights[k];
        std::vector<double> z(rows);
        for (std::size_t r = 0; r < rows; ++r) {
            double acc = params.biases[k][r];
            const double* wr = w.data() + r * cols;
            for (std::size_t c = 0; c < cols; ++c) acc += wr[c] * x[c];
            z[r] = acc;
        }
        if (cache) cache->pre[k] = z;

        const bool is_output = k + 1 == layers;
        std::vector<double> a(rows);
        if (is_output) {
            for (std::size_t r = 0; r < rows; ++r) a[r] = sigmoid(z[r]);
        } else {
            for (std::size_t r = 0; r < rows; ++r) a[r] = z[r] > 0.0 ? z[r] : 0.0;
            const double p = params.dropout_rates[k];
            if (mode == Mode::Train && p > 0.0) {
                if (!dropout_rng)
                    throw InvalidParams("train-mode forward with dropout needs an rng");
                std::vector<double> mask(rows);
                const double keep_scale = 1.0 / (1.0 - p);
                for (std::size_t r = 0; r < rows; ++r)
                    mask[r] = dropout_rng->next_unit() < p ? 0.0 : keep_scale;
                for (std::size_t r = 0; r < rows; ++r) a[r] *= mask[r];
                if (cache) cache->drop[k] = std::move(mask);
            }
        }
        if (cache) cache->act[k] = a;
        x = std::move(a);
    }
    return x;
}

MlpGrads backward(const MlpParams& params, const ForwardCache& cache,
                  std::span<const double> output_gradient) {
    validate_structure(params);
    const std::size_t layers = params.num_layers();
    if (cache.pre.size() != layers || cache.act.size() != layers ||
        cache.input.size() != params.input_dim())
        throw StaleCache("cache does not match network shape");
    for (std::size_t k = 0; k < layers; ++k)
        if (cache.pre[k].size() != params.layer_dims[k + 1])
            throw StaleCache("cache layer " + std::to_string(k) + " has wrong width");
    if (output_gradient.size() != params.output_dim())
        throw ShapeMismatch("output gradient size mismatch");

    MlpGrads g = zero_grads_like(params);

    // Output layer: sigmoid'(z) = a (1 - a).
    const std::vector<double>& out_act = cache.act.back();
    std::vector<double> delta(out_act.size());
    for (std::size_t r = 0; r < delta.size(); ++r)
        delta[r] = output_gradient[r] * out_act[r] * (1.0 - out_act[r]);

    for (std::size_t k = layers; k-- > 0;) {
        const std::size_t rows = params.layer_dims[k + 1];
        const std::size_t cols = params.layer_dims[k];
        const std::vector<double>& prev_act = k == 0 ? cache.input : cache.act[k - 1];

        for (std::size_t r = 0; r < rows; ++r) {
            g.biases[k][r] = delta[r];
            double* gr = g.weights[k].data() + r * cols;
            for (std::size_t c = 0; c < cols; ++c) gr[c] = delta[r] * prev_act[c];
        }

        std::vector<double> prev_delta(cols, 0.0);
        const std::vector<double>& w = params.weights[k];
        for (std::size_t r = 0; r < rows; ++r) {
            const double* wr = w.data() + r * cols;
            const double dr = delta[r];
            for (std::size_t c = 0; c < cols; ++c) prev_delta[c] += wr[c] * dr;
        }

        if (k == 0) {
            g.input = std::move(prev_delta);
            break;
        }

        // Through dropout (cached mask) and ReLU of the layer below.
        const std::vector<double>& mask = cache.drop[k - 1];
        if (!mask.empty())
            for (std::size_t c = 0; c < cols; ++c) prev_delta[c] *= mask[c];
        const std::vector<double>& pre = cache.pre[k - 1];
        for (std::size_t c = 0; c < cols; ++c)
            if (pre[c] <= 0.0) prev_delta[c] = 0.0;
        delta = std::move(prev_delta);
    }
    return g;
}

MlpGrads zero_grads_like(const MlpParams& params) {
    MlpGrads g;
    g.weights.resize(params.num_layers());
    g.biases.resize(params.num_layers());
    for (std::size_t k = 0; k < params.num_layers(); ++k) {
        g.weights[k].assign(params.weights[k].size(), 0.0);
        g.biases[k].assign(params.biases[k].size(), 0.0);
    }
    g.input.assign(params.input_dim(), 0.0);
    return g;
}

void accumulate(MlpGrads& acc, const MlpGrads& g, double scale) {
    if (acc.weights.size() != g.weights.size())
        throw ShapeMismatch("gradient accumulator layer count mismatch");
    for (std::size_t k = 0; k < acc.weights.size(); ++k) {
        if (acc.weights[k].size() != g.weights[k].size() ||
            acc.biases[k].size() != g.biases[k].size())
            throw ShapeMismatch("gradient accumulator shape mismatch at layer " +
                                std::to_string(k));
        for (std::size_t i = 0; i < acc.weights[k].size(); ++i)
            acc.weights[k][i] += scale * g.weights[k][i];
        for (std::size_t i = 0; i < acc.biases[k].size(); ++i)
            acc.biases[k][i] += scale * g.biases[k][i];
    }
}

AdamState make_adam(const MlpParams& params, double learning_rate, double beta1,
                    double beta2, double epsilon) {
    AdamState s;
    s.learning_rate = learning_rate;
    s.beta1 = beta1;
    s.beta2 = beta2;
    s.epsilon = epsilon;
    s.m_w.resize(params.num_layers());
    s.v_w.resize(params.num_layers());
    s.m_b.resize(params.num_layers());
    s.v_b.resize(params.num_layers());
    for (std::size_t k = 0; k < params.num_layers(); ++k) {
        s.m_w[k].assign(params.weights[k].size(), 0.0);
        s.v_w[k].assign(params.weights[k].size(), 0.0);
        s.m_b[k].assign(params.biases[k].size(), 0.0);
        s.v_b[k].assign(params.biases[k].size(), 0.0);
    }
    return s;
}

void adam_step(MlpParams& params, const MlpGrads& grads, AdamState& state) {
    if (state.m_w.size() != params.num_layers() ||
        grads.weights.size() != params.num_layers())
        throw ShapeMismatch("adam state/gradient layer count mismatch");

    state.step += 1;
    const double t = static_cast<double>(state.step);
    const double corr1 = 1.0 - std::pow(state.beta1, t);
    const double corr2 = 1.0 - std::pow(state.beta2, t);

    auto update = [&](std::vector<double>& p, const std::vector<double>& g,
                      std::vector<double>& m, std::vector<double>& v) {
        if (p.size() != g.size() || p.size() != m.size())
            throw ShapeMismatch("adam update shape mismatch");
        for (std::size_t i = 0; i < p.size(); ++i) {
            m[i] = state.beta1 * m[i] + (1.0 - state.beta1) * g[i];
            v[i] = state.beta2 * v[i] + (1.0 - state.beta2) * g[i] * g[i];
            const double m_hat = m[i] / corr1;
            const double v_hat = v[i] / corr2;
            p[i] -= state.learning_rate * m_hat / (std::sqrt(v_hat) + state.epsilon);
        }
    };

    for (std::size_t k = 0; k < params.num_layers(); ++k) {
        update(params.weights[k], grads.weights[k], state.m_w[k], state.v_w[k]);
        update(params.biases[k], grads.biases[k], state.m_b[k], state.v_b[k]);
    }
}

void save_checkpoint(const Checkpoint& ckpt, const std::filesystem::path& path) {
    validate_structure(ckpt.generator);

    nlohmann::json j;
    j["layer_dims"] = ckpt.generator.layer_dims;
    j["dropout_rates"] = ckpt.generator.dropout_rates;

    nlohmann::json weights = nlohmann::json::array();
    for (std::size_t k = 0; k < ckpt.generator.num_layers(); ++k) {
        const std::size_t rows = ckpt.generator.layer_dims[k + 1];
        const std::size_t cols = ckpt.generator.layer_dims[k];
        nlohmann::json mat = nlohmann::json::array();
        for (std::size_t r = 0; r < rows; ++r) {
            nlohmann::json row = nlohmann::json::array();
            for (std::size_t c = 0; c < cols; ++c)
                row.push_back(ckpt.generator.weights[k][r * cols + c]);
            mat.push_back(std::move(row));
        }
        weights.push_back(std::move(mat));
    }
    j["weights"] = std::move(weights);
    j["biases"] = ckpt.generator.biases;

    nlohmann::json stats;
    for (std::size_t c = 0; c < kNumChannels; ++c)
        stats[kChannelNames[c]] = {{"min", ckpt.corpus_stats.min[c]},
                                   {"max", ckpt.corpus_stats.max[c]}};
    j["corpus_stats"] = std::move(stats);
    j["window_spec"] = {{"n", ckpt.window_spec.n}, {"d", ckpt.window_spec.d}};
    j["seed"] = ckpt.seed;
    j["train_step"] = ckpt.train_step;

    write_text_file_atomic(path, j.dump(2) + "\n");
}

Checkpoint load_checkpoint(const std::filesystem::path& path) {
    const std::string text = read_text_file(path);
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw CheckpointMismatch("not valid JSON: " + std::string(e.what()));
    }

    Checkpoint ckpt;
    try {
        ckpt.generator.layer_dims = j.at("layer_dims").get<std::vector<std::size_t>>();
        ckpt.generator.dropout_rates = j.at("dropout_rates").get<std::vector<double>>();
        const nlohmann::json& weights = j.at("weights");
        for (const nlohmann::json& mat : weights) {
            std::vector<double> flat;
            for (const nlohmann::json& row : mat)
                for (const nlohmann::json& v : row) flat.push_back(v.get<double>());
            ckpt.generator.weights.push_back(std::move(flat));
        }
        ckpt.generator.biases = j.at("biases").get<std::vector<std::vector<double>>>();
        const nlohmann::json& stats = j.at("corpus_stats");
        for (std::size_t c = 0; c < kNumChannels; ++c) {
            ckpt.corpus_stats.min[c] = stats.at(kChannelNames[c]).at("min").get<double>();
            ckpt.corpus_stats.max[c] = stats.at(kChannelNames[c]).at("max").get<double>();
        }
        ckpt.window_spec.n = j.at("window_spec").at("n").get<std::size_t>();
        ckpt.window_spec.d = j.at("window_spec").at("d").get<std::size_t>();
        ckpt.seed = j.at("seed").get<std::uint64_t>();
        ckpt.train_step = j.at("train_step").get<std::size_t>();
    } catch (const nlohmann::json::exception& e) {
        throw CheckpointMismatch("bad checkpoint schema: " + std::string(e.what()));
    }

    try {
        validate_structure(ckpt.generator);
        validate(ckpt.window_spec);
    } catch (const DataError& e) {
        throw CheckpointMismatch(e.what());
    }
    for (std::size_t c = 0; c < kNumChannels; ++c)
        if (ckpt.corpus_stats.max[c] < ckpt.corpus_stats.min[c])
            throw CheckpointMismatch(std::string("stats max < min for channel ") +
                                     kChannelNames[c]);
    return ckpt;
}

}  // namespace motrans

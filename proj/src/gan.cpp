#include "motrans/gan.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>
#include <string_view>

#include "motrans/errors.hpp"
#include "motrans/io.hpp"

namespace motrans {

namespace {

constexpr double kPredictionClamp = 1e-7;

double clamp_prediction(double p) {
    return std::clamp(p, kPredictionClamp, 1.0 - kPredictionClamp);
}

/// d(bce)/d(prediction); zero where the clamp binds, matching the
/// implemented loss surface exactly.
double bce_prediction_grad(double p, double label) {
    if (p <= kPredictionClamp || p >= 1.0 - kPredictionClamp) return 0.0;
    return -label / p + (1.0 - label) / (1.0 - p);
}

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r'))
        s.remove_suffix(1);
    return s;
}

std::vector<std::size_t> parse_size_list(std::string_view value, std::size_t line_no) {
    std::vector<std::size_t> out;
    if (trim(value).empty()) return out;
    std::size_t pos = 0;
    std::string text(value);
    while (pos <= text.size()) {
        std::size_t comma = text.find(',', pos);
        std::string item(trim(std::string_view(text).substr(
            pos, comma == std::string::npos ? std::string::npos : comma - pos)));
        try {
            std::size_t consumed = 0;
            long long v = std::stoll(item, &consumed);
            if (consumed != item.size() || v <= 0) throw std::invalid_argument(item);
            out.push_back(static_cast<std::size_t>(v));
        } catch (const std::exception&) {
            throw MalformedRow(line_no, "bad width list entry '" + item + "'");
        }
        if (comma == std::string::npos) break;
        pos = comma + 1;
    }
    return out;
}

}  // namespace

void validate(const TrainConfig& config) {
    if (!(config.lambda_l1 >= 0.0) || !std::isfinite(config.lambda_l1))
        throw InvalidParams("lambda_l1 must be >= 0");
    if (config.epochs < 1) throw InvalidParams("epochs must be >= 1");
    if (config.batch_size < 1) throw InvalidParams("batch_size must be >= 1");
    if (!(config.lr_g >= 0.0) || !(config.lr_d >= 0.0))
        throw InvalidParams("learning rates must be >= 0");
    if (config.d_steps_per_g_step < 1) throw InvalidParams("d_steps must be >= 1");
    if (!(config.dropout >= 0.0 && config.dropout < 1.0))
        throw InvalidParams("dropout must be in [0, 1)");
    validate(config.window);
}

TrainConfig load_train_config(const std::filesystem::path& path) {
    const std::string text = read_text_file(path);
    TrainConfig config;

    std::string_view rest = text;
    std::size_t line_no = 0;
    while (!rest.empty()) {
        std::size_t nl = rest.find('\n');
        std::string_view line = rest.substr(0, nl);
        if (nl == std::string_view::npos)
            rest = {};
        else
            rest.remove_prefix(nl + 1);
        ++line_no;

        line = trim(line);
        if (line.empty() || line.front() == '#') continue;
        std::size_t eq = line.find('=');
        if (eq == std::string_view::npos)
            throw MalformedRow(line_no, "expected key=value");
        std::string key(trim(line.substr(0, eq)));
        std::string value(trim(line.substr(eq + 1)));

        auto as_double = [&](const std::string& v) {
            try {
                std::size_t consumed = 0;
                double d = std::stod(v, &consumed);
                if (consumed != v.size() || !std::isfinite(d))
                    throw std::invalid_argument(v);
                return d;
            } catch (const std::exception&) {
                throw MalformedRow(line_no, "bad numeric value '" + v + "'");
            }
        };
        auto as_size = [&](const std::string& v) {
            try {
                std::size_t consumed = 0;
                long long s = std::stoll(v, &consumed);
                if (consumed != v.size() || s < 0) throw std::invalid_argument(v);
                return static_cast<std::size_t>(s);
            } catch (const std::exception&) {
                throw MalformedRow(line_no, "bad integer value '" + v + "'");
            }
        };
        auto as_u64 = [&](const std::string& v) {
            try {
                std::size_t consumed = 0;
                unsigned long long s = std::stoull(v, &consumed);
                if (consumed != v.size()) throw std::invalid_argument(v);
                return static_cast<std::uint64_t>(s);
            } catch (const std::exception&) {
                throw MalformedRow(line_no, "bad seed value '" + v + "'");
            }
        };

        if (key == "lambda_l1")
            config.lambda_l1 = as_double(value);
        else if (key == "epochs")
            config.epochs = as_size(value);
        else if (key == "batch_size")
            config.batch_size = as_size(value);
        else if (key == "lr_g")
            config.lr_g = as_double(value);
        else if (key == "lr_d")
            config.lr_d = as_double(value);
        else if (key == "window_n")
            config.window.n = as_size(value);
        else if (key == "window_d")
            config.window.d = as_size(value);
        else if (key == "seed")
            config.seed = as_u64(value);
        else if (key == "d_steps")
            config.d_steps_per_g_step = as_size(value);
        else if (key == "g_hidden")
            config.g_hidden = parse_size_list(value, line_no);
        else if (key == "d_hidden")
            config.d_hidden = parse_size_list(value, line_no);
        else if (key == "dropout")
            config.dropout = as_double(value);
        else
            throw MalformedRow(line_no, "unknown config key '" + key + "'");
    }

    validate(config);
    return config;
}

void save_loss_csv(const TrainRecord& record, const std::filesystem::path& path) {
    std::string out = "step,g_bce,g_l1,g_total,d_real,d_fake\n";
    for (const TrainRecord::Entry& e : record.entries) {
        out += std::to_string(e.step);
        out += ',';
        out += format_g12(e.g_bce);
        out += ',';
        out += format_g12(e.g_l1);
        out += ',';
        out += format_g12(e.g_total);
        out += ',';
        out += format_g12(e.d_real);
        out += ',';
        out += format_g12(e.d_fake);
        out += '\n';
    }
    write_text_file_atomic(path, out);
}

double bce_loss(double prediction, double label) {
    if (label != 0.0 && label != 1.0) throw InvalidParams("bce label must be 0 or 1");
    const double p = clamp_prediction(prediction);
    return -(label * std::log(p) + (1.0 - label) * std::log(1.0 - p));
}

double l1_loss(std::span<const double> generated, std::span<const double> target) {
    if (generated.size() != target.size())
        throw ShapeMismatch("l1_loss operands differ in length");
    if (generated.empty()) throw ShapeMismatch("l1_loss on empty vectors");
    double acc = 0.0;
    for (std::size_t i = 0; i < generated.size(); ++i)
        acc += std::abs(generated[i] - target[i]);
    return acc / static_cast<double>(generated.size());
}

GeneratorLoss generator_loss(double d_output_on_fake, std::span<const double> generated,
                             std::span<const double> target, double lambda_l1) {
    GeneratorLoss loss;
    loss.bce_term = bce_loss(d_output_on_fake, 1.0);
    loss.l1_term = l1_loss(generated, target);
    loss.total = loss.bce_term + lambda_l1 * loss.l1_term;
    return loss;
}

double discriminator_loss(double d_on_real_pair, double d_on_fake_pair) {
    return bce_loss(d_on_real_pair, 1.0) + bce_loss(d_on_fake_pair, 0.0);
}

std::vector<WindowPair> build_training_set(const std::vector<AlignedPair>& pairs,
                                           const WindowSpec& spec) {
    validate(spec);
    std::vector<WindowPair> set;
    for (const AlignedPair& pair : pairs) {
        const WindowSet windows = extract_windows(pair.source, spec);
        for (std::size_t start : windows.starts) {
            set.push_back(WindowPair{flatten_window(pair.source, start, spec.n),
                                     flatten_window(pair.target, start, spec.n)});
        }
    }
    return set;
}

TrainResult train(const std::vector<AlignedPair>& pairs, const TrainConfig& config) {
    validate(config);
    const std::vector<WindowPair> dataset = build_training_set(pairs, config.window);
    if (dataset.empty()) throw EmptyTrainingSet();

    const std::size_t vec_dim = config.window.n * kNumChannels;

    std::vector<std::size_t> g_dims;
    g_dims.push_back(vec_dim);
    g_dims.insert(g_dims.end(), config.g_hidden.begin(), config.g_hidden.end());
    g_dims.push_back(vec_dim);

    std::vector<std::size_t> d_dims;
    d_dims.push_back(2 * vec_dim);
    d_dims.insert(d_dims.end(), config.d_hidden.begin(), config.d_hidden.end());
    d_dims.push_back(1);

    TrainResult result;
    result.generator =
        init_mlp(g_dims, std::vector<double>(config.g_hidden.size(), config.dropout),
                 derive_seed(config.seed, kGeneratorSeedLabel));
    result.discriminator =
        init_mlp(d_dims, {}, derive_seed(config.seed, kDiscriminatorSeedLabel));

    AdamState adam_g = make_adam(result.generator, config.lr_g);
    AdamState adam_d = make_adam(result.discriminator, config.lr_d);

    SplitMix64 shuffle_rng = rng_stream(config.seed, "shuffle");
    SplitMix64 dropout_rng = rng_stream(config.seed, "dropout");

    std::vector<std::size_t> order(dataset.size());
    std::iota(order.begin(), order.end(), 0);

    std::vector<double> d_input(2 * vec_dim);
    auto concat = [&](std::span<const double> a, std::span<const double> b) {
        std::copy(a.begin(), a.end(), d_input.begin());
        std::copy(b.begin(), b.end(), d_input.begin() + static_cast<std::ptrdiff_t>(vec_dim));
    };

    std::size_t step = 0;
    for (std::size_t epoch = 0; epoch < config.epochs; ++epoch) {
        // Fisher-Yates with the seeded stream.
        for (std::size_t i = order.size(); i > 1; --i) {
            const std::size_t j = static_cast<std::size_t>(shuffle_rng.next_below(i));
            std::swap(order[i - 1], order[j]);
        }

        for (std::size_t begin = 0; begin < order.size(); begin += config.batch_size) {
            const std::size_t end = std::min(begin + config.batch_size, order.size());
            const double inv_batch = 1.0 / static_cast<double>(end - begin);
            ++step;

            double d_real_mean = 0.0;
            double d_fake_mean = 0.0;
            for (std::size_t ds = 0; ds < config.d_steps_per_g_step; ++ds) {
                MlpGrads d_acc = zero_grads_like(result.discriminator);
                d_real_mean = 0.0;
                d_fake_mean = 0.0;
                for (std::size_t bi = begin; bi < end; ++bi) {
                    const WindowPair& sample = dataset[order[bi]];

                    ForwardCache cache_real;
                    concat(sample.source, sample.target);
                    const double p_real =
                        forward(result.discriminator, d_input, Mode::Train, &cache_real)[0];
                    d_real_mean += bce_loss(p_real, 1.0) * inv_batch;
                    MlpGrads g_real = backward(result.discriminator, cache_real,
                                               std::vector<double>{bce_prediction_grad(p_real, 1.0)});
                    accumulate(d_acc, g_real, inv_batch);

                    // G frozen; its dropout stream still advances.
                    const std::vector<double> fake =
                        forward(result.generator, sample.source, Mode::Train, nullptr,
                                &dropout_rng);
                    ForwardCache cache_fake;
                    concat(sample.source, fake);
                    const double p_fake =
                        forward(result.discriminator, d_input, Mode::Train, &cache_fake)[0];
                    d_fake_mean += bce_loss(p_fake, 0.0) * inv_batch;
                    MlpGrads g_fake = backward(result.discriminator, cache_fake,
                                               std::vector<double>{bce_prediction_grad(p_fake, 0.0)});
                    accumulate(d_acc, g_fake, inv_batch);
                }
                adam_step(result.discriminator, d_acc, adam_d);
            }

            MlpGrads g_acc = zero_grads_like(result.generator);
            double g_bce_mean = 0.0;
            double g_l1_mean = 0.0;
            for (std::size_t bi = begin; bi < end; ++bi) {
                const WindowPair& sample = dataset[order[bi]];

                ForwardCache cache_g;
                const std::vector<double> fake = forward(
                    result.generator, sample.source, Mode::Train, &cache_g, &dropout_rng);

                ForwardCache cache_d;
                concat(sample.source, fake);
                const double p_fake =
                    forward(result.discriminator, d_input, Mode::Eval, &cache_d)[0];

                g_bce_mean += bce_loss(p_fake, 1.0) * inv_batch;
                g_l1_mean += l1_loss(fake, sample.target) * inv_batch;

                // Adversarial gradient reaches G through the frozen D's input.
                MlpGrads d_grads = backward(result.discriminator, cache_d,
                                            std::vector<double>{bce_prediction_grad(p_fake, 1.0)});
                std::vector<double> out_grad(vec_dim);
                const double l1_scale =
                    config.lambda_l1 / static_cast<double>(vec_dim);
                for (std::size_t i = 0; i < vec_dim; ++i) {
                    const double diff = fake[i] - sample.target[i];
                    const double sign = diff > 0.0 ? 1.0 : (diff < 0.0 ? -1.0 : 0.0);
                    out_grad[i] = d_grads.input[vec_dim + i] + l1_scale * sign;
                }
                MlpGrads g_grads = backward(result.generator, cache_g, out_grad);
                accumulate(g_acc, g_grads, inv_batch);
            }
            adam_step(result.generator, g_acc, adam_g);

            TrainRecord::Entry entry;
            entry.step = step;
            entry.g_bce = g_bce_mean;
            entry.g_l1 = g_l1_mean;
            entry.g_total = g_bce_mean + config.lambda_l1 * g_l1_mean;
            entry.d_real = d_real_mean;
            entry.d_fake = d_fake_mean;
            if (!std::isfinite(entry.g_total) || !std::isfinite(entry.d_real) ||
                !std::isfinite(entry.d_fake))
                throw DivergenceDetected(step);
            result.history.entries.push_back(entry);
        }
    }
    return result;
}

}  // namespace motrans

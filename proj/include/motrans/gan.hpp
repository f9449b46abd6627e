#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include "motrans/dtw.hpp"
#include "motrans/motion.hpp"
#include "motrans/neural.hpp"

namespace motrans {

/// Everything the adversarial training loop needs. All fields have working
/// defaults and can be overridden from a key=value config file.
struct TrainConfig {
    double lambda_l1 = 100.0;
    std::size_t epochs = 40;
    std::size_t batch_size = 16;
    double lr_g = 2e-4;
    double lr_d = 2e-4;
    WindowSpec window{32, 8};
    std::uint64_t seed = 42;
    std::size_t d_steps_per_g_step = 1;
    std::vector<std::size_t> g_hidden = {256, 256};
    std::vector<std::size_t> d_hidden = {128, 128};
    double dropout = 0.3;  // applied to every generator hidden layer
};

void validate(const TrainConfig& config);

/// Parses the flat key=value config format. Keys: lambda_l1, epochs,
/// batch_size, lr_g, lr_d, window_n, window_d, seed, d_steps, g_hidden,
/// d_hidden, dropout. Hidden widths are comma-separated lists. Unknown keys
/// are an error; missing keys keep their defaults.
TrainConfig load_train_config(const std::filesystem::path& path);

/// Loss terms logged once per generator step.
struct TrainRecord {
    struct Entry {
        std::size_t step = 0;
        double g_bce = 0.0;
        double g_l1 = 0.0;
        double g_total = 0.0;
        double d_real = 0.0;
        double d_fake = 0.0;
    };
    std::vector<Entry> entries;
};

/// `step,g_bce,g_l1,g_total,d_real,d_fake` CSV.
void save_loss_csv(const TrainRecord& record, const std::filesystem::path& path);

/// Binary cross entropy -[t log p + (1-t) log(1-p)] with the prediction
/// clamped to [1e-7, 1-1e-7] before the logs.
double bce_loss(double prediction, double label);

/// Mean absolute element-wise difference.
double l1_loss(std::span<const double> generated, std::span<const double> target);

struct GeneratorLoss {
    double total = 0.0;
    double bce_term = 0.0;
    double l1_term = 0.0;
};

/// total = bce(d_output_on_fake, 1) + lambda * l1(generated, target).
/// The adversarial term is the non-saturating form: the generator is pushed
/// toward D(fake) = 1.
GeneratorLoss generator_loss(double d_output_on_fake, std::span<const double> generated,
                             std::span<const double> target, double lambda_l1);

/// bce(d_on_real_pair, 1) + bce(d_on_fake_pair, 0).
double discriminator_loss(double d_on_real_pair, double d_on_fake_pair);

/// One training example: source and target windows cut at the same start
/// index of an aligned pair, flattened to 6n values.
struct WindowPair {
    std::vector<double> source;
    std::vector<double> target;
};

std::vector<WindowPair> build_training_set(const std::vector<AlignedPair>& pairs,
                                           const WindowSpec& spec);

struct TrainResult {
    MlpParams generator;
    MlpParams discriminator;
    TrainRecord history;
};

/// Conditional adversarial training: per step, the discriminator is updated
/// on (source || target, label 1) and (source || G(source), label 0) pairs,
/// then the generator is updated against the frozen discriminator plus the
/// lambda-weighted L1 term. Deterministic under config.seed; throws
/// DivergenceDetected if any loss goes non-finite.
TrainResult train(const std::vector<AlignedPair>& pairs, const TrainConfig& config);

/// Network seeds are derived from the config seed with these labels, so a
/// zero-learning-rate run reproduces init_mlp exactly.
inline constexpr const char* kGeneratorSeedLabel = "generator-init";
inline constexpr const char* kDiscriminatorSeedLabel = "discriminator-init";

}  // namespace motrans

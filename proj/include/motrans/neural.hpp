#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include "motrans/motion.hpp"
#include "motrans/rng.hpp"

namespace motrans {

/// Dense multi-layer perceptron: ReLU hidden layers, sigmoid output,
/// optional inverted dropout on each hidden layer.
struct MlpParams {
    std::vector<std::size_t> layer_dims;            // input, hidden..., output
    std::vector<std::vector<double>> weights;       // [k]: dims[k+1] x dims[k], row-major
    std::vector<std::vector<double>> biases;        // [k]: dims[k+1]
    std::vector<double> dropout_rates;              // one per hidden layer, in [0, 1)

    std::size_t num_layers() const { return weights.size(); }
    std::size_t input_dim() const { return layer_dims.front(); }
    std::size_t output_dim() const { return layer_dims.back(); }
};

/// Glorot-uniform weights (bound sqrt(6/(fan_in+fan_out))), zero biases.
/// Deterministic under the seed. Pass an empty dropout vector for all-zero
/// rates.
MlpParams init_mlp(std::vector<std::size_t> layer_dims, std::vector<double> dropout_rates,
                   std::uint64_t seed);

enum class Mode { Train, Eval };

/// Intermediate values of one forward pass, consumed by backward().
struct ForwardCache {
    std::vector<double> input;
    std::vector<std::vector<double>> pre;    // affine outputs per layer
    std::vector<std::vector<double>> act;    // activations fed to the next layer
    std::vector<std::vector<double>> drop;   // dropout multipliers per hidden layer
    bool train = false;
};

/// Forward pass. Hidden layers: affine -> ReLU -> dropout (train mode only,
/// inverted scaling 1/(1-p)); output layer: affine -> sigmoid. Train mode
/// with any nonzero dropout rate requires `dropout_rng`.
std::vector<double> forward(const MlpParams& params, std::span<const double> input,
                            Mode mode, ForwardCache* cache = nullptr,
                            SplitMix64* dropout_rng = nullptr);

/// Parameter gradients plus the gradient with respect to the input.
struct MlpGrads {
    std::vector<std::vector<double>> weights;
    std::vector<std::vector<double>> biases;
    std::vector<double> input;
};

/// Exact reverse-mode gradients for the forward pass cached in `cache`.
/// Dropout masks recorded at forward time are reused.
MlpGrads backward(const MlpParams& params, const ForwardCache& cache,
                  std::span<const double> output_gradient);

MlpGrads zero_grads_like(const MlpParams& params);

/// Accumulates `g` into `acc` scaled by `scale` (fixed index order).
void accumulate(MlpGrads& acc, const MlpGrads& g, double scale);

/// Adam optimizer state shaped like one MlpParams.
struct AdamState {
    std::size_t step = 0;
    double learning_rate = 2e-4;
    double beta1 = 0.5;
    double beta2 = 0.999;
    double epsilon = 1e-8;
    std::vector<std::vector<double>> m_w, v_w;
    std::vector<std::vector<double>> m_b, v_b;
};

AdamState make_adam(const MlpParams& params, double learning_rate, double beta1 = 0.5,
                    double beta2 = 0.999, double epsilon = 1e-8);

/// Standard Adam update with bias correction; increments the step count.
void adam_step(MlpParams& params, const MlpGrads& grads, AdamState& state);

/// Self-describing trained generator: network parameters plus the
/// normalization stats and window geometry needed to run translation.
struct Checkpoint {
    MlpParams generator;
    ChannelStats corpus_stats;
    WindowSpec window_spec;
    std::uint64_t seed = 0;
    std::size_t train_step = 0;
};

/// JSON checkpoint with fields layer_dims, dropout_rates, weights, biases,
/// corpus_stats, window_spec, seed, train_step.
void save_checkpoint(const Checkpoint& ckpt, const std::filesystem::path& path);
Checkpoint load_checkpoint(const std::filesystem::path& path);

}  // namespace motrans

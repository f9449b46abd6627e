#include "motrans/reconstruct.hpp"

#include <string>

#include "motrans/errors.hpp"

namespace motrans {

std::vector<double> crossfade_weights(std::size_t overlap_len) {
    if (overlap_len < 2) throw OverlapTooShort(overlap_len);
    std::vector<double> w(overlap_len);
    const double denom = static_cast<double>(overlap_len - 1);
    for (std::size_t k = 0; k < overlap_len; ++k)
        w[k] = static_cast<double>(overlap_len - 1 - k) / denom;
    return w;
}

MergeState::MergeState(std::size_t window_samples, std::size_t values_per_sample)
    : n_(window_samples), values_(values_per_sample) {
    if (n_ < 2) throw InvalidParams("merge window must have at least 2 samples");
    if (values_ < 1) throw InvalidParams("merge needs at least 1 value per sample");
}

void MergeState::merge_window(std::span<const double> window, std::size_t start) {
    if (window.size() != n_ * values_)
        throw ShapeMismatch("window has " + std::to_string(window.size()) +
                            " values, expected " + std::to_string(n_ * values_));

    const std::size_t assembled_len = assembled_samples();
    if (assembled_len == 0) {
        if (start != 0) throw ShapeMismatch("first window must start at 0");
        assembled_.assign(window.begin(), window.end());
        return;
    }
    if (start > assembled_len)
        throw ShapeMismatch("window start " + std::to_string(start) +
                            " leaves a gap after " + std::to_string(assembled_len) +
                            " assembled samples");
    if (start + n_ <= assembled_len)
        throw ShapeMismatch("window does not extend the assembled series");

    const std::size_t overlap = assembled_len - start;
    if (overlap < 1) throw OverlapTooShort(overlap);

    // A single-sample overlap has no room to fade; the assembled value is
    // kept (w = 1), matching the crossfade's anchored first weight.
    const std::vector<double> w =
        overlap == 1 ? std::vector<double>{1.0} : crossfade_weights(overlap);
    for (std::size_t k = 0; k < overlap; ++k) {
        double* existing = assembled_.data() + (start + k) * values_;
        const double* incoming = window.data() + k * values_;
        for (std::size_t v = 0; v < values_; ++v)
            existing[v] = w[k] * existing[v] + (1.0 - w[k]) * incoming[v];
    }
    assembled_.insert(assembled_.end(), window.begin() + static_cast<std::ptrdiff_t>(overlap * values_),
                      window.end());
}

MotionTrajectory translate_trajectory(const MlpParams& generator,
                                      const MotionTrajectory& input,
                                      const WindowSpec& spec, const ChannelStats& stats) {
    validate(spec);
    const std::size_t vec_dim = spec.n * kNumChannels;
    if (generator.input_dim() != vec_dim || generator.output_dim() != vec_dim)
        throw CheckpointMismatch(
            "generator expects " + std::to_string(generator.input_dim()) + " -> " +
            std::to_string(generator.output_dim()) + " values but window spec needs " +
            std::to_string(vec_dim));

    const MotionTrajectory normalized = normalize(input, stats);
    const WindowSet windows = extract_windows(normalized, spec);

    MergeState merge(spec.n, kNumChannels);
    for (std::size_t start : windows.starts) {
        const std::vector<double> in_vec = flatten_window(normalized, start, spec.n);
        const std::vector<double> out_vec = forward(generator, in_vec, Mode::Eval);
        merge.merge_window(out_vec, start);
    }

    const std::vector<double>& flat = merge.assembled();
    std::vector<MotionSample> out_samples(input.size());
    for (std::size_t i = 0; i < input.size(); ++i) {
        out_samples[i].t = input[i].t;
        for (std::size_t c = 0; c < kNumChannels; ++c)
            out_samples[i].ch[c] = flat[i * kNumChannels + c];
    }
    MotionTrajectory normalized_out(std::move(out_samples), input.rate_hz());

    // Output is rescaled to the pre-translated (input) trajectory's range.
    return denormalize(normalized_out, compute_stats(input));
}

}  // namespace motrans

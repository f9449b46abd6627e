#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "motrans/motion.hpp"
#include "motrans/neural.hpp"

namespace motrans {

/// Linear crossfade weights over an overlap of `overlap_len` samples:
/// w_k = (L-1-k)/(L-1). The first overlap sample keeps the existing data
/// (w = 1) and the last takes the new window only (w = 0), so the merged
/// series has no seam discontinuity.
std::vector<double> crossfade_weights(std::size_t overlap_len);

/// Grows a full-length series out of fixed-size windows arriving in start
/// order. Each window's overlap with the already-assembled data is blended
/// with crossfade_weights; the non-overlapping tail is appended verbatim.
class MergeState {
public:
    /// `window_samples` per window, `values_per_sample` interleaved values.
    MergeState(std::size_t window_samples, std::size_t values_per_sample);

    /// Blends in the window covering samples [start, start + n). The first
    /// window must start at 0; later windows must overlap the assembly by at
    /// least 2 samples and extend it.
    void merge_window(std::span<const double> window, std::size_t start);

    std::size_t assembled_samples() const { return assembled_.size() / values_; }
    const std::vector<double>& assembled() const { return assembled_; }

private:
    std::size_t n_;
    std::size_t values_;
    std::vector<double> assembled_;
};

/// Full-trajectory translation: normalize with `stats`, cut windows, run the
/// generator in eval mode on each, crossfade-merge, then rescale with the
/// input trajectory's own min/max. Output length and timestamps equal the
/// input's.
MotionTrajectory translate_trajectory(const MlpParams& generator,
                                      const MotionTrajectory& input,
                                      const WindowSpec& spec, const ChannelStats& stats);

}  // namespace motrans

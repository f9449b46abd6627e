#pragma once

#include <array>
#include <cstddef>
#include <filesystem>
#include <vector>

namespace motrans {

inline constexpr std::size_t kNumChannels = 6;

/// Channel indices into MotionSample::ch.
enum Channel : std::size_t { kX = 0, kY = 1, kZ = 2, kFx = 3, kFy = 4, kFz = 5 };

extern const std::array<const char*, kNumChannels> kChannelNames;

/// One timestamped sample: position [m] and force [N] on three axes.
struct MotionSample {
    double t = 0.0;
    std::array<double, kNumChannels> ch{};  // x, y, z, fx, fy, fz
};

/// Uniformly sampled 6-channel time series. Invariants enforced on
/// construction: at least two samples, all values finite, timestamps strictly
/// increasing and on the 1/rate_hz grid within 1e-9 s per step.
class MotionTrajectory {
public:
    MotionTrajectory(std::vector<MotionSample> samples, double rate_hz);

    const std::vector<MotionSample>& samples() const { return samples_; }
    double rate_hz() const { return rate_hz_; }
    std::size_t size() const { return samples_.size(); }
    const MotionSample& operator[](std::size_t i) const { return samples_[i]; }
    const MotionSample& front() const { return samples_.front(); }
    const MotionSample& back() const { return samples_.back(); }

private:
    std::vector<MotionSample> samples_;
    double rate_hz_ = 0.0;
};

/// Per-channel min/max, used for min-max normalization and its inverse.
struct ChannelStats {
    std::array<double, kNumChannels> min{};
    std::array<double, kNumChannels> max{};
};

/// Sliding-window geometry: n samples per window, d samples between starts.
struct WindowSpec {
    std::size_t n = 32;
    std::size_t d = 8;
};

/// Throws InvalidParams unless n >= 2 and 1 <= d <= n.
void validate(const WindowSpec& spec);

/// Window start indices over a trajectory of `n`-sample windows.
struct WindowSet {
    std::vector<std::size_t> starts;
    std::size_t n = 0;
};

/// Loads the `t,x,y,z,fx,fy,fz` CSV format; sampling rate is inferred from
/// the median timestamp delta.
MotionTrajectory load_csv(const std::filesystem::path& path);

/// Writes the CSV format with 9 decimal places per field (atomic write).
void save_csv(const MotionTrajectory& traj, const std::filesystem::path& path);

/// Exact per-channel min and max over all samples.
ChannelStats compute_stats(const MotionTrajectory& traj);

/// Maps each channel value v to (v - min)/(max - min). Channels with
/// max == min map to 0.5 everywhere. Timestamps are unchanged.
MotionTrajectory normalize(const MotionTrajectory& traj, const ChannelStats& stats);

/// Inverse of normalize: v -> min + v * (max - min).
MotionTrajectory denormalize(const MotionTrajectory& traj, const ChannelStats& stats);

/// Window starts at 0, d, 2d, ... plus, when the last regular window stops
/// short of the end, one tail window anchored at len - n. Every sample is
/// covered by at least one window.
WindowSet extract_windows(const MotionTrajectory& traj, const WindowSpec& spec);

/// Flattens samples [start, start + n) to a 6n vector, sample-major:
/// [s0.x, s0.y, s0.z, s0.fx, s0.fy, s0.fz, s1.x, ...].
std::vector<double> flatten_window(const MotionTrajectory& traj, std::size_t start,
                                   std::size_t n);

/// `channel,min,max` CSV used to hand normalization stats between pipeline
/// stages.
void save_stats_csv(const ChannelStats& stats, const std::filesystem::path& path);
ChannelStats load_stats_csv(const std::filesystem::path& path);

}  // namespace motrans

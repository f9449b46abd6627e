#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "motrans/motion.hpp"

namespace motrans {

/// Parameters of one synthetic brush stroke: a smooth 2-D path, a z dip onto
/// the paper during the writing phase, and an attack-sustain-taper downforce
/// profile.
struct StrokeParams {
    std::vector<std::array<double, 2>> control_points;  // [m]
    double duration_s = 8.0;
    double rate_hz = 100.0;
    double speed_smooth = 1.0;   // 0 = constant parameter speed, 1 = eased
    double z_hover_m = 0.005;
    double z_dip_m = 0.005;
    double force_peak_n = 1.5;
    std::uint64_t seed = 0;
};

/// Stroke shape used by the CLI and tests when none is given.
StrokeParams default_stroke_params();

/// How a non-expert degrades the expert stroke: smoothed positional jitter,
/// a tempo change, and a flattened force profile (reduced peak, taper cut).
struct Degradation {
    double noise_amplitude_m = 0.008;
    std::size_t noise_window = 15;
    double tempo = 1.1;
    double force_flatten = 0.7;  // 0 = none, 1 = fully flattened
};

/// Smooth expert stroke. Deterministic in its parameters; the writing-phase
/// downforce exceeds 0.1 N and peaks at force_peak_n.
MotionTrajectory synth_expert(const StrokeParams& params);

/// Expert stroke warped in time by `tempo`, positions perturbed by smoothed
/// seeded noise, force profile flattened. All-zero degradation with tempo 1
/// reproduces synth_expert exactly.
MotionTrajectory synth_nonexpert(const StrokeParams& params, const Degradation& degradation);

/// Seeded demonstration corpus; the last element of each list is the
/// designated hold-out.
struct Corpus {
    std::vector<MotionTrajectory> experts;
    std::vector<MotionTrajectory> non_experts;
};

Corpus make_corpus(std::size_t n_experts, std::size_t n_nonexperts,
                   const StrokeParams& base, std::uint64_t seed);

/// Per-channel single-channel DTW distances against the expert, for the
/// non-expert input and the generated translation.
struct EvalReport {
    std::array<double, kNumChannels> nonexpert_dtw{};
    std::array<double, kNumChannels> generated_dtw{};
};

EvalReport evaluate(const MotionTrajectory& non_expert, const MotionTrajectory& generated,
                    const MotionTrajectory& expert);

/// `channel,nonexpert_dtw,generated_dtw` CSV.
void save_eval_csv(const EvalReport& report, const std::filesystem::path& path);

/// Column-aligned text table of the report.
std::string format_eval_table(const EvalReport& report);

/// x-y polyline of the trajectory as a standalone SVG 1.1 document. Segments
/// whose starting sample has Fz strictly above 0.1 N are red, the rest blue.
std::string render_svg_string(const MotionTrajectory& traj);
void render_svg(const MotionTrajectory& traj, const std::filesystem::path& path);

/// Force threshold separating the writing phase in the plots [N].
inline constexpr double kForceThresholdN = 0.1;

}  // namespace motrans

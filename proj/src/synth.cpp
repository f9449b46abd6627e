#include "motrans/synth.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "motrans/dtw.hpp"
#include "motrans/errors.hpp"
#include "motrans/io.hpp"
#include "motrans/rng.hpp"

namespace motrans {

namespace {

// Writing phase as a fraction of the stroke, and the expert force envelope
// shape. A non-expert's force_flatten interpolates the attack/taper widths
// toward abrupt edges and scales the peak down.
constexpr double kWriteStart = 0.08;
constexpr double kWriteEnd = 0.92;
constexpr double kZRampFrac = 0.10;
constexpr double kExpertAttackFrac = 0.12;
constexpr double kExpertTaperFrac = 0.25;
constexpr double kExpertSag = 0.05;
constexpr double kAbruptFrac = 0.015;
constexpr double kFlattenPeakDrop = 0.35;
constexpr double kFrictionCoeff = 0.3;

struct ForceStyle {
    double attack_frac = kExpertAttackFrac;
    double taper_frac = kExpertTaperFrac;
    double sag = kExpertSag;
    double peak_scale = 1.0;
};

ForceStyle flattened_style(double f) {
    ForceStyle s;
    s.attack_frac = kExpertAttackFrac * (1.0 - f) + kAbruptFrac * f;
    s.taper_frac = kExpertTaperFrac * (1.0 - f) + kAbruptFrac * f;
    s.sag = kExpertSag * (1.0 - f);
    s.peak_scale = 1.0 - kFlattenPeakDrop * f;
    return s;
}

double smoothstep(double x) {
    x = std::clamp(x, 0.0, 1.0);
    return x * x * (3.0 - 2.0 * x);
}

std::array<double, 2> catmull_rom(const std::vector<std::array<double, 2>>& pts,
                                  double u) {
    const std::size_t count = pts.size();
    if (count == 1) return pts[0];
    const double s = std::clamp(u, 0.0, 1.0) * static_cast<double>(count - 1);
    std::size_t seg = std::min(static_cast<std::size_t>(s), count - 2);
    const double t = s - static_cast<double>(seg);

    auto at = [&](std::ptrdiff_t i) {
        return pts[static_cast<std::size_t>(
            std::clamp<std::ptrdiff_t>(i, 0, static_cast<std::ptrdiff_t>(count) - 1))];
    };
    const std::array<double, 2> p0 = at(static_cast<std::ptrdiff_t>(seg) - 1);
    const std::array<double, 2> p1 = at(static_cast<std::ptrdiff_t>(seg));
    const std::array<double, 2> p2 = at(static_cast<std::ptrdiff_t>(seg) + 1);
    const std::array<double, 2> p3 = at(static_cast<std::ptrdiff_t>(seg) + 2);

    std::array<double, 2> out{};
    for (std::size_t k = 0; k < 2; ++k) {
        out[k] = 0.5 * ((2.0 * p1[k]) + (-p0[k] + p2[k]) * t +
                        (2.0 * p0[k] - 5.0 * p1[k] + 4.0 * p2[k] - p3[k]) * t * t +
                        (-p0[k] + 3.0 * p1[k] - 3.0 * p2[k] + p3[k]) * t * t * t);
    }
    return out;
}

/// Rise/plateau/fall envelope over the writing phase, 0 outside.
double phase_envelope(double tau, double rise_frac, double fall_frac) {
    if (tau <= kWriteStart || tau >= kWriteEnd) return 0.0;
    const double width = kWriteEnd - kWriteStart;
    const double phi = (tau - kWriteStart) / width;
    const double rise = rise_frac <= 0.0 ? 1.0 : smoothstep(phi / rise_frac);
    const double fall = fall_frac <= 0.0 ? 1.0 : smoothstep((1.0 - phi) / fall_frac);
    return rise * fall;
}

void validate(const StrokeParams& p) {
    if (p.control_points.empty())
        throw InvalidParams("stroke needs at least one control point");
    if (!(p.duration_s > 0.0) || !(p.rate_hz > 0.0))
        throw InvalidParams("stroke duration and rate must be positive");
    if (std::llround(p.duration_s * p.rate_hz) < 2)
        throw InvalidParams("stroke must span at least 2 samples");
    if (!(p.force_peak_n >= 0.0)) throw InvalidParams("force peak must be >= 0");
    if (!(p.z_dip_m >= 0.0)) throw InvalidParams("z dip must be >= 0");
    if (!(p.speed_smooth >= 0.0 && p.speed_smooth <= 1.0))
        throw InvalidParams("speed_smooth must be in [0, 1]");
    for (const auto& cp : p.control_points)
        for (double v : cp)
            if (!std::isfinite(v)) throw InvalidParams("control point must be finite");
}

void validate(const Degradation& d) {
    if (!(d.noise_amplitude_m >= 0.0)) throw InvalidParams("noise amplitude must be >= 0");
    if (d.noise_window < 1) throw InvalidParams("noise window must be >= 1");
    if (!(d.tempo > 0.0)) throw InvalidParams("tempo must be positive");
    if (!(d.force_flatten >= 0.0 && d.force_flatten <= 1.0))
        throw InvalidParams("force_flatten must be in [0, 1]");
}

MotionTrajectory build_stroke(const StrokeParams& p, const ForceStyle& style) {
    validate(p);
    const std::size_t len = static_cast<std::size_t>(std::llround(p.duration_s * p.rate_hz));
    const double dt = 1.0 / p.rate_hz;

    std::vector<MotionSample> samples(len);
    for (std::size_t i = 0; i < len; ++i) {
        const double tau = static_cast<double>(i) / static_cast<double>(len - 1);
        const double u =
            (1.0 - p.speed_smooth) * tau + p.speed_smooth * smoothstep(tau);
        const std::array<double, 2> xy = catmull_rom(p.control_points, u);

        MotionSample& s = samples[i];
        s.t = static_cast<double>(i) * dt;
        s.ch[kX] = xy[0];
        s.ch[kY] = xy[1];
        s.ch[kZ] = p.z_hover_m - p.z_dip_m * phase_envelope(tau, kZRampFrac, kZRampFrac);

        double env = phase_envelope(tau, style.attack_frac, style.taper_frac);
        if (env > 0.0 && style.sag > 0.0) {
            const double phi = (tau - kWriteStart) / (kWriteEnd - kWriteStart);
            const double sine = std::sin(2.0 * 3.14159265358979323846 * phi);
            env *= 1.0 - style.sag * sine * sine;
        }
        s.ch[kFz] = p.force_peak_n * style.peak_scale * env;
    }

    // Planar friction drag along the direction of travel.
    for (std::size_t i = 0; i < len; ++i) {
        const std::size_t prev = i == 0 ? 0 : i - 1;
        const std::size_t next = i + 1 == len ? len - 1 : i + 1;
        const double vx = samples[next].ch[kX] - samples[prev].ch[kX];
        const double vy = samples[next].ch[kY] - samples[prev].ch[kY];
        const double norm = std::sqrt(vx * vx + vy * vy);
        if (norm > 1e-12) {
            samples[i].ch[kFx] = kFrictionCoeff * samples[i].ch[kFz] * vx / norm;
            samples[i].ch[kFy] = kFrictionCoeff * samples[i].ch[kFz] * vy / norm;
        }
    }

    return MotionTrajectory(std::move(samples), p.rate_hz);
}

MotionTrajectory resample_tempo(const MotionTrajectory& traj, double tempo) {
    const std::size_t len = traj.size();
    const std::size_t new_len = static_cast<std::size_t>(
        std::llround(tempo * static_cast<double>(len)));
    if (new_len < 2) throw InvalidParams("tempo leaves fewer than 2 samples");

    const double dt = 1.0 / traj.rate_hz();
    std::vector<MotionSample> out(new_len);
    for (std::size_t j = 0; j < new_len; ++j) {
        double s = static_cast<double>(j) * static_cast<double>(len - 1) /
                   static_cast<double>(new_len - 1);
        std::size_t idx = static_cast<std::size_t>(s);
        if (idx >= len - 1) {
            idx = len - 2;
            s = static_cast<double>(len - 1);
        }
        const double frac = s - static_cast<double>(idx);
        out[j].t = static_cast<double>(j) * dt;
        for (std::size_t c = 0; c < kNumChannels; ++c)
            out[j].ch[c] =
                (1.0 - frac) * traj[idx].ch[c] + frac * traj[idx + 1].ch[c];
    }
    return MotionTrajectory(std::move(out), traj.rate_hz());
}

}  // namespace

StrokeParams default_stroke_params() {
    StrokeParams p;
    p.control_points = {
        {0.030, 0.150}, {0.055, 0.125}, {0.075, 0.085}, {0.100, 0.060},
        {0.130, 0.052}, {0.158, 0.068}, {0.150, 0.098},
    };
    return p;
}

MotionTrajectory synth_expert(const StrokeParams& params) {
    return build_stroke(params, ForceStyle{});
}

MotionTrajectory synth_nonexpert(const StrokeParams& params,
                                 const Degradation& degradation) {
    validate(degradation);
    MotionTrajectory traj =
        build_stroke(params, flattened_style(degradation.force_flatten));
    if (degradation.tempo != 1.0) traj = resample_tempo(traj, degradation.tempo);
    if (degradation.noise_amplitude_m <= 0.0) return traj;

    const std::size_t len = traj.size();
    SplitMix64 rng = rng_stream(params.seed, "nonexpert-noise");
    std::vector<MotionSample> samples = traj.samples();
    for (std::size_t c : {static_cast<std::size_t>(kX), static_cast<std::size_t>(kY),
                          static_cast<std::size_t>(kZ)}) {
        std::vector<double> raw(len);
        for (double& v : raw)
            v = degradation.noise_amplitude_m * rng.next_range(-1.0, 1.0);

        const std::size_t half = degradation.noise_window / 2;
        for (std::size_t i = 0; i < len; ++i) {
            const std::size_t lo = i >= half ? i - half : 0;
            const std::size_t hi = std::min(i + half, len - 1);
            double acc = 0.0;
            for (std::size_t k = lo; k <= hi; ++k) acc += raw[k];
            samples[i].ch[c] += acc / static_cast<double>(hi - lo + 1);
        }
    }
    return MotionTrajectory(std::move(samples), traj.rate_hz());
}

Corpus make_corpus(std::size_t n_experts, std::size_t n_nonexperts,
                   const StrokeParams& base, std::uint64_t seed) {
    if (n_experts < 1 || n_nonexperts < 1)
        throw InvalidParams("corpus needs at least one of each demonstration");
    validate(base);

    auto jittered = [&](SplitMix64& rng, double point_sigma) {
        StrokeParams p = base;
        for (auto& cp : p.control_points) {
            cp[0] += point_sigma * rng.next_gaussian();
            cp[1] += point_sigma * rng.next_gaussian();
        }
        p.force_peak_n = std::max(0.0, p.force_peak_n * (1.0 + 0.04 * rng.next_gaussian()));
        p.duration_s = p.duration_s * std::clamp(1.0 + 0.03 * rng.next_gaussian(), 0.5, 1.5);
        return p;
    };

    Corpus corpus;
    SplitMix64 e_rng = rng_stream(seed, "expert-jitter");
    for (std::size_t i = 0; i < n_experts; ++i) {
        StrokeParams p = jittered(e_rng, 0.001);
        p.seed = derive_seed(seed, "expert-" + std::to_string(i));
        corpus.experts.push_back(synth_expert(p));
    }

    SplitMix64 ne_rng = rng_stream(seed, "nonexpert-jitter");
    for (std::size_t j = 0; j < n_nonexperts; ++j) {
        StrokeParams p = jittered(ne_rng, 0.002);
        p.seed = derive_seed(seed, "nonexpert-" + std::to_string(j));
        Degradation deg;
        deg.noise_amplitude_m *= ne_rng.next_range(0.8, 1.2);
        deg.tempo = ne_rng.next_range(0.85, 1.25);
        deg.force_flatten = ne_rng.next_range(0.6, 0.85);
        corpus.non_experts.push_back(synth_nonexpert(p, deg));
    }
    return corpus;
}

EvalReport evaluate(const MotionTrajectory& non_expert, const MotionTrajectory& generated,
                    const MotionTrajectory& expert) {
    EvalReport report;
    for (std::size_t c = 0; c < kNumChannels; ++c) {
        const std::size_t channel[] = {c};
        report.nonexpert_dtw[c] =
            dtw_distance(non_expert.samples(), expert.samples(), channel);
        report.generated_dtw[c] =
            dtw_distance(generated.samples(), expert.samples(), channel);
    }
    return report;
}

void save_eval_csv(const EvalReport& report, const std::filesystem::path& path) {
    std::string out = "channel,nonexpert_dtw,generated_dtw\n";
    for (std::size_t c = 0; c < kNumChannels; ++c) {
        out += kChannelNames[c];
        out += ',';
        out += format_g12(report.nonexpert_dtw[c]);
        out += ',';
        out += format_g12(report.generated_dtw[c]);
        out += '\n';
    }
    write_text_file_atomic(path, out);
}

std::string format_eval_table(const EvalReport& report) {
    std::string out = "channel  nonexpert_dtw  generated_dtw\n";
    char buf[96];
    for (std::size_t c = 0; c < kNumChannels; ++c) {
        std::snprintf(buf, sizeof(buf), "%-7s %14.6g %14.6g\n", kChannelNames[c],
                      report.nonexpert_dtw[c], report.generated_dtw[c]);
        out += buf;
    }
    return out;
}

std::string render_svg_string(const MotionTrajectory& traj) {
    double min_x = traj[0].ch[kX], max_x = min_x;
    double min_y = traj[0].ch[kY], max_y = min_y;
    for (const MotionSample& s : traj.samples()) {
        min_x = std::min(min_x, s.ch[kX]);
        max_x = std::max(max_x, s.ch[kX]);
        min_y = std::min(min_y, s.ch[kY]);
        max_y = std::max(max_y, s.ch[kY]);
    }
    double span_x = max_x - min_x;
    double span_y = max_y - min_y;
    const double fallback = std::max({span_x, span_y, 1e-3});
    if (span_x == 0.0) span_x = fallback;
    if (span_y == 0.0) span_y = fallback;
    const double margin = 0.05 * std::max(span_x, span_y);
    const double width = span_x + 2.0 * margin;
    const double height = span_y + 2.0 * margin;
    const double stroke_width = 0.01 * std::max(width, height);

    // SVG y points down; flip so larger y draws higher.
    auto map_x = [&](double x) { return x - min_x + margin; };
    auto map_y = [&](double y) { return max_y - y + margin; };

    std::string out = "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    out += "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" viewBox=\"0 0 " +
           format_g6(width) + " " + format_g6(height) + "\">\n";

    const std::size_t segments = traj.size() - 1;
    std::size_t run_start = 0;
    while (run_start < segments) {
        const bool red = traj[run_start].ch[kFz] > kForceThresholdN;
        std::size_t run_end = run_start;
        while (run_end + 1 < segments &&
               (traj[run_end + 1].ch[kFz] > kForceThresholdN) == red)
            ++run_end;

        out += "  <polyline fill=\"none\" stroke=\"";
        out += red ? "red" : "blue";
        out += "\" stroke-width=\"" + format_g6(stroke_width) + "\" points=\"";
        for (std::size_t i = run_start; i <= run_end + 1; ++i) {
            if (i > run_start) out += ' ';
            out += format_g6(map_x(traj[i].ch[kX])) + "," + format_g6(map_y(traj[i].ch[kY]));
        }
        out += "\"/>\n";
        run_start = run_end + 1;
    }

    out += "</svg>\n";
    return out;
}

void render_svg(const MotionTrajectory& traj, const std::filesystem::path& path) {
    write_text_file_atomic(path, render_svg_string(traj));
}

}  // namespace motrans

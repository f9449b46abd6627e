#include "motrans/motion.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <string>
#include <string_view>

#include "motrans/errors.hpp"
#include "motrans/io.hpp"

namespace motrans {

const std::array<const char*, kNumChannels> kChannelNames = {"x", "y", "z",
                                                             "fx", "fy", "fz"};

namespace {

constexpr double kGridToleranceS = 1e-9;

bool parse_double(std::string_view field, double& out) {
    const char* begin = field.data();
    const char* end = begin + field.size();
    auto [ptr, ec] = std::from_chars(begin, end, out);
    return ec == std::errc() && ptr == end && std::isfinite(out);
}

std::vector<std::string_view> split_line(std::string_view line) {
    std::vector<std::string_view> fields;
    std::size_t pos = 0;
    while (true) {
        std::size_t comma = line.find(',', pos);
        if (comma == std::string_view::npos) {
            fields.push_back(line.substr(pos));
            break;
        }
        fields.push_back(line.substr(pos, comma - pos));
        pos = comma + 1;
    }
    return fields;
}

}  // namespace

MotionTrajectory::MotionTrajectory(std::vector<MotionSample> samples, double rate_hz)
    : samples_(std::move(samples)), rate_hz_(rate_hz) {
    if (samples_.size() < 2)
        throw TooShort("trajectory needs at least 2 samples, got " +
                       std::to_string(samples_.size()));
    if (!(rate_hz_ > 0.0) || !std::isfinite(rate_hz_))
        throw InvalidParams("rate_hz must be positive and finite");
    const double dt = 1.0 / rate_hz_;
    for (std::size_t i = 0; i < samples_.size(); ++i) {
        const MotionSample& s = samples_[i];
        if (!std::isfinite(s.t))
            throw InvalidParams("non-finite timestamp at sample " + std::to_string(i));
        for (double v : s.ch) {
            if (!std::isfinite(v))
                throw InvalidParams("non-finite channel value at sample " +
                                    std::to_string(i));
        }
        if (i > 0) {
            const double step = s.t - samples_[i - 1].t;
            if (step <= 0.0)
                throw InvalidParams("timestamps not strictly increasing at sample " +
                                    std::to_string(i));
            if (std::abs(step - dt) > kGridToleranceS)
                throw InvalidParams("timestamp off the 1/rate grid at sample " +
                                    std::to_string(i));
        }
    }
}

MotionTrajectory load_csv(const std::filesystem::path& path) {
    const std::string text = read_text_file(path);

    std::vector<std::string_view> lines;
    {
        std::string_view rest = text;
        while (!rest.empty()) {
            std::size_t nl = rest.find('\n');
            std::string_view line = rest.substr(0, nl);
            if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
            lines.push_back(line);
            if (nl == std::string_view::npos) break;
            rest.remove_prefix(nl + 1);
        }
        while (!lines.empty() && lines.back().empty()) lines.pop_back();
    }

    if (lines.empty()) throw TooShort(path.string() + " is empty");
    if (lines[0] != "t,x,y,z,fx,fy,fz")
        throw MalformedRow(1, "expected header t,x,y,z,fx,fy,fz");

    std::vector<MotionSample> samples;
    samples.reserve(lines.size() - 1);
    for (std::size_t li = 1; li < lines.size(); ++li) {
        const std::size_t file_line = li + 1;
        auto fields = split_line(lines[li]);
        if (fields.size() != 1 + kNumChannels)
            throw MalformedRow(file_line, "expected 7 fields, got " +
                                              std::to_string(fields.size()));
        MotionSample s;
        if (!parse_double(fields[0], s.t))
            throw MalformedRow(file_line, "bad t value");
        for (std::size_t c = 0; c < kNumChannels; ++c) {
            if (!parse_double(fields[1 + c], s.ch[c]))
                throw MalformedRow(file_line,
                                   std::string("bad ") + kChannelNames[c] + " value");
        }
        if (!samples.empty() && s.t <= samples.back().t)
            throw NonMonotonicTime(file_line);
        samples.push_back(s);
    }
    if (samples.size() < 2)
        throw TooShort(path.string() + " has fewer than 2 data rows");

    std::vector<double> deltas;
    deltas.reserve(samples.size() - 1);
    for (std::size_t i = 1; i < samples.size(); ++i)
        deltas.push_back(samples[i].t - samples[i - 1].t);
    std::sort(deltas.begin(), deltas.end());
    const double median_dt = deltas[(deltas.size() - 1) / 2];

    // Pre-check the grid here so the error carries a file line number.
    for (std::size_t i = 1; i < samples.size(); ++i) {
        if (std::abs((samples[i].t - samples[i - 1].t) - median_dt) > kGridToleranceS)
            throw MalformedRow(i + 2, "timestamp deviates from the uniform grid");
    }

    return MotionTrajectory(std::move(samples), 1.0 / median_dt);
}

void save_csv(const MotionTrajectory& traj, const std::filesystem::path& path) {
    std::string out = "t,x,y,z,fx,fy,fz\n";
    out.reserve(out.size() + traj.size() * 96);
    for (const MotionSample& s : traj.samples()) {
        out += format_fixed9(s.t);
        for (double v : s.ch) {
            out += ',';
            out += format_fixed9(v);
        }
        out += '\n';
    }
    write_text_file_atomic(path, out);
}

ChannelStats compute_stats(const MotionTrajectory& traj) {
    ChannelStats stats;
    for (std::size_t c = 0; c < kNumChannels; ++c) {
        stats.min[c] = traj[0].ch[c];
        stats.max[c] = traj[0].ch[c];
    }
    for (const MotionSample& s : traj.samples()) {
        for (std::size_t c = 0; c < kNumChannels; ++c) {
            stats.min[c] = std::min(stats.min[c], s.ch[c]);
            stats.max[c] = std::max(stats.max[c], s.ch[c]);
        }
    }
    return stats;
}

namespace {

void validate(const ChannelStats& stats) {
    for (std::size_t c = 0; c < kNumChannels; ++c) {
        if (!std::isfinite(stats.min[c]) || !std::isfinite(stats.max[c]) ||
            stats.max[c] < stats.min[c])
            throw InvalidParams(std::string("bad stats for channel ") + kChannelNames[c]);
    }
}

}  // namespace

MotionTrajectory normalize(const MotionTrajectory& traj, const ChannelStats& stats) {
    validate(stats);
    std::vector<MotionSample> out = traj.samples();
    for (MotionSample& s : out) {
        for (std::size_t c = 0; c < kNumChannels; ++c) {
            const double span = stats.max[c] - stats.min[c];
            s.ch[c] = span == 0.0 ? 0.5 : (s.ch[c] - stats.min[c]) / span;
        }
    }
    return MotionTrajectory(std::move(out), traj.rate_hz());
}

MotionTrajectory denormalize(const MotionTrajectory& traj, const ChannelStats& stats) {
    validate(stats);
    std::vector<MotionSample> out = traj.samples();
    for (MotionSample& s : out) {
        for (std::size_t c = 0; c < kNumChannels; ++c)
            s.ch[c] = stats.min[c] + s.ch[c] * (stats.max[c] - stats.min[c]);
    }
    return MotionTrajectory(std::move(out), traj.rate_hz());
}

void validate(const WindowSpec& spec) {
    if (spec.n < 2) throw InvalidParams("window n must be >= 2");
    if (spec.d < 1 || spec.d > spec.n)
        throw InvalidParams("window d must satisfy 1 <= d <= n");
}

WindowSet extract_windows(const MotionTrajectory& traj, const WindowSpec& spec) {
    validate(spec);
    const std::size_t len = traj.size();
    if (len < spec.n) throw TrajectoryShorterThanWindow(len, spec.n);

    WindowSet set;
    set.n = spec.n;
    for (std::size_t start = 0; start + spec.n <= len; start += spec.d)
        set.starts.push_back(start);
    if (set.starts.back() + spec.n < len) set.starts.push_back(len - spec.n);
    return set;
}

std::vector<double> flatten_window(const MotionTrajectory& traj, std::size_t start,
                                   std::size_t n) {
    if (start + n > traj.size())
        throw ShapeMismatch("window [" + std::to_string(start) + ", " +
                            std::to_string(start + n) + ") exceeds trajectory length " +
                            std::to_string(traj.size()));
    std::vector<double> flat;
    flat.reserve(n * kNumChannels);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t c = 0; c < kNumChannels; ++c)
            flat.push_back(traj[start + i].ch[c]);
    return flat;
}

void save_stats_csv(const ChannelStats& stats, const std::filesystem::path& path) {
    std::string out = "channel,min,max\n";
    for (std::size_t c = 0; c < kNumChannels; ++c) {
        out += kChannelNames[c];
        out += ',';
        out += format_fixed9(stats.min[c]);
        out += ',';
        out += format_fixed9(stats.max[c]);
        out += '\n';
    }
    write_text_file_atomic(path, out);
}

ChannelStats load_stats_csv(const std::filesystem::path& path) {
    const std::string text = read_text_file(path);
    ChannelStats stats;
    std::array<bool, kNumChannels> seen{};

    std::string_view rest = text;
    std::size_t line_no = 0;
    while (!rest.empty()) {
        std::size_t nl = rest.find('\n');
        std::string_view line = rest.substr(0, nl);
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
        if (nl == std::string_view::npos)
            rest = {};
        else
            rest.remove_prefix(nl + 1);
        ++line_no;
        if (line.empty()) continue;
        if (line_no == 1) {
            if (line != "channel,min,max")
                throw MalformedRow(1, "expected header channel,min,max");
            continue;
        }
        auto fields = split_line(line);
        if (fields.size() != 3) throw MalformedRow(line_no, "expected 3 fields");
        std::size_t c = kNumChannels;
        for (std::size_t k = 0; k < kNumChannels; ++k)
            if (fields[0] == kChannelNames[k]) c = k;
        if (c == kNumChannels) throw MalformedRow(line_no, "unknown channel name");
        if (!parse_double(fields[1], stats.min[c]) ||
            !parse_double(fields[2], stats.max[c]))
            throw MalformedRow(line_no, "bad min/max value");
        seen[c] = true;
    }
    for (std::size_t c = 0; c < kNumChannels; ++c)
        if (!seen[c])
            throw MalformedRow(line_no, std::string("missing channel ") + kChannelNames[c]);
    for (std::size_t c = 0; c < kNumChannels; ++c)
        if (stats.max[c] < stats.min[c])
            throw MalformedRow(line_no, std::string("max < min for channel ") + kChannelNames[c]);
    return stats;
}

}  // namespace motrans

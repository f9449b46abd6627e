#include "motrans/dtw.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "motrans/errors.hpp"

namespace motrans {

namespace {

double step_cost(const MotionSample& a, const MotionSample& b,
                 std::span<const std::size_t> channels, CostMetric metric) {
    double acc = 0.0;
    for (std::size_t c : channels) {
        const double d = a.ch[c] - b.ch[c];
        acc += metric == CostMetric::Euclidean ? d * d : std::abs(d);
    }
    return metric == CostMetric::Euclidean ? std::sqrt(acc) : acc;
}

void check_inputs(std::span<const MotionSample> a, std::span<const MotionSample> b,
                  std::span<const std::size_t> channels) {
    if (a.empty() || b.empty()) throw EmptySequence();
    if (channels.empty()) throw EmptyChannelSet();
    for (std::size_t c : channels)
        if (c >= kNumChannels) throw InvalidParams("channel index out of range");
}

/// Accumulated-cost matrix, row-major (la x lb).
std::vector<double> cost_matrix(std::span<const MotionSample> a,
                                std::span<const MotionSample> b,
                                std::span<const std::size_t> channels,
                                CostMetric metric) {
    const std::size_t la = a.size();
    const std::size_t lb = b.size();
    std::vector<double> acc(la * lb);
    for (std::size_t i = 0; i < la; ++i) {
        for (std::size_t j = 0; j < lb; ++j) {
            const double c = step_cost(a[i], b[j], channels, metric);
            double best;
            if (i == 0 && j == 0) {
                best = 0.0;
            } else if (i == 0) {
                best = acc[j - 1];
            } else if (j == 0) {
                best = acc[(i - 1) * lb];
            } else {
                best = std::min({acc[(i - 1) * lb + (j - 1)], acc[(i - 1) * lb + j],
                                 acc[i * lb + (j - 1)]});
            }
            acc[i * lb + j] = c + best;
        }
    }
    return acc;
}

}  // namespace

double dtw_distance(std::span<const MotionSample> a, std::span<const MotionSample> b,
                    std::span<const std::size_t> channels, CostMetric metric) {
    check_inputs(a, b, channels);
    return cost_matrix(a, b, channels, metric).back();
}

DtwResult dtw_path(std::span<const MotionSample> a, std::span<const MotionSample> b,
                   std::span<const std::size_t> channels, CostMetric metric) {
    check_inputs(a, b, channels);
    const std::size_t la = a.size();
    const std::size_t lb = b.size();
    const std::vector<double> acc = cost_matrix(a, b, channels, metric);

    DtwResult result;
    result.distance = acc.back();

    std::vector<WarpStep> reversed;
    std::size_t i = la - 1;
    std::size_t j = lb - 1;
    reversed.push_back({i, j});
    while (i > 0 || j > 0) {
        if (i == 0) {
            --j;
        } else if (j == 0) {
            --i;
        } else {
            const double diag = acc[(i - 1) * lb + (j - 1)];
            const double up = acc[(i - 1) * lb + j];
            const double left = acc[i * lb + (j - 1)];
            const double best = std::min({diag, up, left});
            if (diag == best) {
                --i;
                --j;
            } else if (up == best) {
                --i;
            } else {
                --j;
            }
        }
        reversed.push_back({i, j});
    }
    result.path.steps.assign(reversed.rbegin(), reversed.rend());
    return result;
}

std::vector<std::pair<std::size_t, std::size_t>> match_demonstrations(
    const std::vector<MotionTrajectory>& non_experts,
    const std::vector<MotionTrajectory>& experts, CostMetric metric) {
    if (non_experts.empty()) throw EmptyList("non_experts");
    if (experts.empty()) throw EmptyList("experts");

    static constexpr std::size_t kXyChannels[] = {kX, kY};
    std::vector<std::pair<std::size_t, std::size_t>> matches;
    matches.reserve(non_experts.size());
    for (std::size_t ne = 0; ne < non_experts.size(); ++ne) {
        std::size_t best_e = 0;
        double best_d = std::numeric_limits<double>::infinity();
        for (std::size_t e = 0; e < experts.size(); ++e) {
            const double d = dtw_distance(non_experts[ne].samples(),
                                          experts[e].samples(), kXyChannels, metric);
            if (d < best_d) {
                best_d = d;
                best_e = e;
            }
        }
        matches.emplace_back(ne, best_e);
    }
    return matches;
}

AlignedPair align_pair(const MotionTrajectory& source, const MotionTrajectory& target,
                       CostMetric metric) {
    for (const MotionTrajectory* traj : {&source, &target}) {
        for (const MotionSample& s : traj->samples())
            for (double v : s.ch)
                if (v < -1e-9 || v > 1.0 + 1e-9)
                    throw InvalidParams("align_pair expects normalized trajectories");
    }

    static constexpr std::size_t kXyChannels[] = {kX, kY};
    const DtwResult res =
        dtw_path(source.samples(), target.samples(), kXyChannels, metric);

    const double dt = 1.0 / source.rate_hz();
    std::vector<MotionSample> src_out;
    std::vector<MotionSample> tgt_out;
    src_out.reserve(res.path.steps.size());
    tgt_out.reserve(res.path.steps.size());
    for (std::size_t k = 0; k < res.path.steps.size(); ++k) {
        const WarpStep& step = res.path.steps[k];
        MotionSample s = source[step.i];
        MotionSample t = target[step.j];
        s.t = static_cast<double>(k) * dt;
        t.t = static_cast<double>(k) * dt;
        src_out.push_back(s);
        tgt_out.push_back(t);
    }
    return AlignedPair{MotionTrajectory(std::move(src_out), source.rate_hz()),
                       MotionTrajectory(std::move(tgt_out), source.rate_hz())};
}

}  // namespace motrans

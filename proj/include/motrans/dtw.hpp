#pragma once

#include <cstddef>
#include <span>
#include <utility>
#include <vector>

#include "motrans/motion.hpp"

namespace motrans {

/// Per-step cost between two samples, restricted to a channel subset.
enum class CostMetric { Euclidean, Manhattan };

struct WarpStep {
    std::size_t i = 0;
    std::size_t j = 0;
    bool operator==(const WarpStep&) const = default;
};

/// Monotone, continuous index path from (0,0) to (len_a-1, len_b-1); each
/// step advances by (1,0), (0,1) or (1,1).
struct WarpPath {
    std::vector<WarpStep> steps;
};

/// Minimum summed per-step cost over all monotone warping paths
/// (symmetric step pattern, unit weights, no band).
double dtw_distance(std::span<const MotionSample> a, std::span<const MotionSample> b,
                    std::span<const std::size_t> channels,
                    CostMetric metric = CostMetric::Euclidean);

struct DtwResult {
    double distance = 0.0;
    WarpPath path;
};

/// Distance plus one optimal path. Backtracking ties prefer the diagonal
/// step, then (1,0), then (0,1), so results are reproducible.
DtwResult dtw_path(std::span<const MotionSample> a, std::span<const MotionSample> b,
                   std::span<const std::size_t> channels,
                   CostMetric metric = CostMetric::Euclidean);

/// Matches every non-expert trajectory to the expert minimizing x/y-channel
/// DTW distance. Many-to-one matches are allowed; ties pick the lowest
/// expert index. Inputs are expected normalized.
std::vector<std::pair<std::size_t, std::size_t>> match_demonstrations(
    const std::vector<MotionTrajectory>& non_experts,
    const std::vector<MotionTrajectory>& experts,
    CostMetric metric = CostMetric::Euclidean);

/// Equal-length normalized (source, target) pair read off a warp path.
struct AlignedPair {
    MotionTrajectory source;
    MotionTrajectory target;
};

/// Walks the x/y-cost warp path between two normalized trajectories and
/// emits one aligned sample per path step. Timestamps are regenerated on the
/// source trajectory's rate grid.
AlignedPair align_pair(const MotionTrajectory& source, const MotionTrajectory& target,
                       CostMetric metric = CostMetric::Euclidean);

}  // namespace motrans

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "motrans/dtw.hpp"
#include "motrans/errors.hpp"
#include "motrans/rng.hpp"
#include "oracles.hpp"

using namespace motrans;

namespace {

constexpr std::size_t kChannel0[] = {0};
constexpr std::size_t kXy[] = {kX, kY};

MotionTrajectory norm_traj(const std::vector<std::array<double, 2>>& xy, double rate = 100.0) {
    std::vector<MotionSample> samples(xy.size());
    for (std::size_t i = 0; i < xy.size(); ++i) {
        samples[i].t = static_cast<double>(i) / rate;
        samples[i].ch[kX] = xy[i][0];
        samples[i].ch[kY] = xy[i][1];
    }
    return MotionTrajectory(std::move(samples), rate);
}

}  // namespace

TEST_CASE("dtw distance basics") {
    const auto a = oracles::seq1({1.0, 3.0, 4.0});
    CHECK(dtw_distance(a, a, kChannel0) == 0.0);

    const auto two_zeros = oracles::seq1({0.0, 0.0});
    const auto one = oracles::seq1({1.0});
    CHECK(dtw_distance(two_zeros, one, kChannel0) == doctest::Approx(2.0));

    const auto b = oracles::seq1({1.0, 4.0});
    CHECK(dtw_distance(a, b, kChannel0) == doctest::Approx(1.0));
}

TEST_CASE("dtw input validation") {
    const auto a = oracles::seq1({1.0});
    const std::vector<MotionSample> empty;
    CHECK_THROWS_AS(dtw_distance(empty, a, kChannel0), EmptySequence);
    CHECK_THROWS_AS(dtw_distance(a, empty, kChannel0), EmptySequence);
    CHECK_THROWS_AS(dtw_distance(a, a, std::vector<std::size_t>{}), EmptyChannelSet);
}

TEST_CASE("dtw is symmetric") {
    SplitMix64 rng(41);
    for (int trial = 0; trial < 50; ++trial) {
        std::vector<double> va(2 + rng.next_below(8));
        std::vector<double> vb(2 + rng.next_below(8));
        for (double& v : va) v = rng.next_range(-2.0, 2.0);
        for (double& v : vb) v = rng.next_range(-2.0, 2.0);
        const auto a = oracles::seq1(va);
        const auto b = oracles::seq1(vb);
        CHECK(std::abs(dtw_distance(a, b, kChannel0) - dtw_distance(b, a, kChannel0)) <
              1e-12);
    }
}

TEST_CASE("dtw equals exhaustive path enumeration on short sequences") {
    SplitMix64 rng(1234);
    const std::vector<std::size_t> channels = {0, 1};
    for (int trial = 0; trial < 200; ++trial) {
        std::vector<MotionSample> a(1 + rng.next_below(6));
        std::vector<MotionSample> b(1 + rng.next_below(6));
        for (MotionSample& s : a)
            for (std::size_t c : channels) s.ch[c] = rng.next_range(-1.0, 1.0);
        for (MotionSample& s : b)
            for (std::size_t c : channels) s.ch[c] = rng.next_range(-1.0, 1.0);
        const double got = dtw_distance(a, b, channels);
        const double expected = oracles::dtw_enumerate(a, b, channels);
        CHECK(std::abs(got - expected) <= 1e-12);
    }
}

TEST_CASE("manhattan metric is the absolute-difference sum") {
    const auto a = oracles::seq1({0.0, 2.0});
    const auto b = oracles::seq1({1.0, 3.0});
    CHECK(dtw_distance(a, b, kChannel0, CostMetric::Manhattan) == doctest::Approx(2.0));
}

TEST_CASE("dtw_path identities and hand-enumerated cases") {
    const auto a = oracles::seq1({0.5, 0.2, 0.9});
    const DtwResult self = dtw_path(a, a, kChannel0);
    CHECK(self.distance == 0.0);
    CHECK(self.path.steps == std::vector<WarpStep>{{0, 0}, {1, 1}, {2, 2}});

    const auto two_zeros = oracles::seq1({0.0, 0.0});
    const auto one = oracles::seq1({1.0});
    const DtwResult res = dtw_path(two_zeros, one, kChannel0);
    CHECK(res.distance == doctest::Approx(2.0));
    CHECK(res.path.steps == std::vector<WarpStep>{{0, 0}, {1, 0}});
}

TEST_CASE("dtw_path cost equals dtw_distance and enumeration; path is valid") {
    SplitMix64 rng(77);
    for (int trial = 0; trial < 100; ++trial) {
        std::vector<MotionSample> a(1 + rng.next_below(5));
        std::vector<MotionSample> b(1 + rng.next_below(5));
        for (MotionSample& s : a) s.ch[0] = rng.next_range(-1.0, 1.0);
        for (MotionSample& s : b) s.ch[0] = rng.next_range(-1.0, 1.0);

        const DtwResult res = dtw_path(a, b, kChannel0);
        CHECK(res.distance == dtw_distance(a, b, kChannel0));
        CHECK(std::abs(res.distance - oracles::dtw_enumerate(a, b, {0})) <= 1e-12);

        // Path cost re-accumulated along the returned steps.
        double path_cost = 0.0;
        for (const WarpStep& step : res.path.steps)
            path_cost += std::abs(a[step.i].ch[0] - b[step.j].ch[0]);
        CHECK(std::abs(path_cost - res.distance) <= 1e-12);

        // Structural validity: endpoints pinned, monotone continuous steps.
        REQUIRE(!res.path.steps.empty());
        CHECK(res.path.steps.front() == WarpStep{0, 0});
        CHECK(res.path.steps.back() == WarpStep{a.size() - 1, b.size() - 1});
        for (std::size_t k = 1; k < res.path.steps.size(); ++k) {
            const std::size_t di = res.path.steps[k].i - res.path.steps[k - 1].i;
            const std::size_t dj = res.path.steps[k].j - res.path.steps[k - 1].j;
            CHECK(di <= 1);
            CHECK(dj <= 1);
            CHECK(di + dj >= 1);
        }

        const std::size_t L = res.path.steps.size();
        CHECK(L >= std::max(a.size(), b.size()));
        CHECK(L <= a.size() + b.size() - 1);
    }
}

TEST_CASE("match_demonstrations picks the nearest expert") {
    const MotionTrajectory expert0 =
        norm_traj({{0.0, 0.0}, {0.2, 0.1}, {0.4, 0.3}, {0.6, 0.6}});
    const MotionTrajectory expert1 =
        norm_traj({{1.0, 1.0}, {0.9, 0.8}, {0.7, 0.7}, {0.5, 0.6}});

    SUBCASE("single pair has only one option") {
        const auto matches = match_demonstrations({expert0}, {expert1});
        CHECK(matches == std::vector<std::pair<std::size_t, std::size_t>>{{0, 0}});
    }

    SUBCASE("identical trajectory dominates with zero distance") {
        const auto matches = match_demonstrations({expert1}, {expert0, expert1});
        CHECK(matches == std::vector<std::pair<std::size_t, std::size_t>>{{0, 1}});
    }

    SUBCASE("empty lists are rejected") {
        CHECK_THROWS_AS(match_demonstrations({}, {expert0}), EmptyList);
        CHECK_THROWS_AS(match_demonstrations({expert0}, {}), EmptyList);
    }
}

TEST_CASE("match_demonstrations agrees with an exhaustive distance matrix") {
    SplitMix64 rng(3001);
    auto random_norm = [&](std::size_t len) {
        std::vector<std::array<double, 2>> xy(len);
        for (auto& p : xy) p = {rng.next_unit(), rng.next_unit()};
        return norm_traj(xy);
    };

    std::vector<MotionTrajectory> experts;
    for (int e = 0; e < 3; ++e) experts.push_back(random_norm(5 + rng.next_below(4)));
    std::vector<MotionTrajectory> nonexperts;
    for (int n = 0; n < 6; ++n) nonexperts.push_back(random_norm(5 + rng.next_below(4)));

    const auto matches = match_demonstrations(nonexperts, experts);
    REQUIRE(matches.size() == nonexperts.size());
    for (const auto& [ne, e] : matches) {
        double best = std::numeric_limits<double>::infinity();
        std::size_t best_e = 0;
        for (std::size_t k = 0; k < experts.size(); ++k) {
            const double d =
                dtw_distance(nonexperts[ne].samples(), experts[k].samples(), kXy);
            if (d < best) {
                best = d;
                best_e = k;
            }
        }
        CHECK(e == best_e);
    }
}

TEST_CASE("align_pair on identical inputs is the identity") {
    const MotionTrajectory traj =
        norm_traj({{0.1, 0.1}, {0.4, 0.2}, {0.8, 0.9}, {0.2, 0.5}});
    const AlignedPair pair = align_pair(traj, traj);
    REQUIRE(pair.source.size() == traj.size());
    REQUIRE(pair.target.size() == traj.size());
    for (std::size_t i = 0; i < traj.size(); ++i)
        for (std::size_t c = 0; c < kNumChannels; ++c) {
            CHECK(pair.source[i].ch[c] == traj[i].ch[c]);
            CHECK(pair.target[i].ch[c] == traj[i].ch[c]);
        }
}

TEST_CASE("align_pair pins endpoints and bounds length") {
    SplitMix64 rng(555);
    std::vector<std::array<double, 2>> src_xy(5);
    std::vector<std::array<double, 2>> tgt_xy(3);
    for (auto& p : src_xy) p = {rng.next_unit(), rng.next_unit()};
    for (auto& p : tgt_xy) p = {rng.next_unit(), rng.next_unit()};
    const MotionTrajectory source = norm_traj(src_xy);
    const MotionTrajectory target = norm_traj(tgt_xy);

    const AlignedPair pair = align_pair(source, target);
    const std::size_t L = pair.source.size();
    CHECK(pair.target.size() == L);
    CHECK(L >= 5);
    CHECK(L <= 7);
    for (std::size_t c = 0; c < kNumChannels; ++c) {
        CHECK(pair.source[0].ch[c] == source[0].ch[c]);
        CHECK(pair.target[0].ch[c] == target[0].ch[c]);
        CHECK(pair.source[L - 1].ch[c] == source[4].ch[c]);
        CHECK(pair.target[L - 1].ch[c] == target[2].ch[c]);
    }

    // Aligned values stay in [0,1]; timestamps sit on the source rate grid.
    for (std::size_t i = 0; i < L; ++i) {
        for (std::size_t c = 0; c < kNumChannels; ++c) {
            CHECK(pair.source[i].ch[c] >= 0.0);
            CHECK(pair.source[i].ch[c] <= 1.0);
        }
        CHECK(pair.source[i].t ==
              doctest::Approx(static_cast<double>(i) / source.rate_hz()));
    }
}

TEST_CASE("align_pair rejects unnormalized input") {
    std::vector<MotionSample> samples(3);
    for (std::size_t i = 0; i < 3; ++i) {
        samples[i].t = static_cast<double>(i) * 0.01;
        samples[i].ch[kX] = 5.0;  // out of [0,1]
    }
    const MotionTrajectory bad(std::move(samples), 100.0);
    const MotionTrajectory good = norm_traj({{0.1, 0.1}, {0.2, 0.2}, {0.3, 0.3}});
    CHECK_THROWS_AS(align_pair(bad, good), InvalidParams);
}

TEST_CASE("aligned slow/fast pair beats naive same-index pairing") {
    // Same curve traced at different tempos.
    auto curve = [](double u) {
        return std::array<double, 2>{0.5 + 0.4 * std::sin(u * 3.0),
                                     0.5 + 0.4 * std::cos(u * 2.0)};
    };
    std::vector<std::array<double, 2>> slow_xy;
    std::vector<std::array<double, 2>> fast_xy;
    for (int i = 0; i < 40; ++i) slow_xy.push_back(curve(i / 39.0));
    for (int i = 0; i < 25; ++i) fast_xy.push_back(curve(i / 24.0));
    const MotionTrajectory slow = norm_traj(slow_xy);
    const MotionTrajectory fast = norm_traj(fast_xy);

    const AlignedPair pair = align_pair(slow, fast);
    double aligned_cost = 0.0;
    for (std::size_t i = 0; i < pair.source.size(); ++i) {
        const double dx = pair.source[i].ch[kX] - pair.target[i].ch[kX];
        const double dy = pair.source[i].ch[kY] - pair.target[i].ch[kY];
        aligned_cost += std::sqrt(dx * dx + dy * dy);
    }
    aligned_cost /= static_cast<double>(pair.source.size());

    double naive_cost = 0.0;
    const std::size_t min_len = std::min(slow.size(), fast.size());
    for (std::size_t i = 0; i < min_len; ++i) {
        const double dx = slow[i].ch[kX] - fast[i].ch[kX];
        const double dy = slow[i].ch[kY] - fast[i].ch[kY];
        naive_cost += std::sqrt(dx * dx + dy * dy);
    }
    naive_cost /= static_cast<double>(min_len);

    CHECK(aligned_cost <= naive_cost);
}

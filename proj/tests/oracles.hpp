// Test-only oracles, independent of the library implementations they check.
#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <string>
#include <vector>

#include "motrans/motion.hpp"

namespace oracles {

/// Builds samples from per-channel scalar values (channel 0 only).
inline std::vector<motrans::MotionSample> seq1(const std::vector<double>& values) {
    std::vector<motrans::MotionSample> out(values.size());
    for (std::size_t i = 0; i < values.size(); ++i) out[i].ch[0] = values[i];
    return out;
}

/// Exhaustive DTW: minimum summed step cost over every monotone path from
/// (0,0) to (la-1, lb-1) with moves (1,0), (0,1), (1,1). Exponential; only
/// for short sequences.
inline double dtw_enumerate(const std::vector<motrans::MotionSample>& a,
                            const std::vector<motrans::MotionSample>& b,
                            const std::vector<std::size_t>& channels) {
    const std::size_t la = a.size();
    const std::size_t lb = b.size();
    auto cost = [&](std::size_t i, std::size_t j) {
        double acc = 0.0;
        for (std::size_t c : channels) {
            const double d = a[i].ch[c] - b[j].ch[c];
            acc += d * d;
        }
        return std::sqrt(acc);
    };

    double best = std::numeric_limits<double>::infinity();
    std::function<void(std::size_t, std::size_t, double)> walk =
        [&](std::size_t i, std::size_t j, double acc) {
            acc += cost(i, j);
            if (acc >= best) return;
            if (i == la - 1 && j == lb - 1) {
                best = acc;
                return;
            }
            if (i + 1 < la && j + 1 < lb) walk(i + 1, j + 1, acc);
            if (i + 1 < la) walk(i + 1, j, acc);
            if (j + 1 < lb) walk(i, j + 1, acc);
        };
    walk(0, 0, 0.0);
    return best;
}

/// Central finite difference of `loss` with respect to a parameter accessed
/// through `param` (read/write reference).
inline double central_difference(double& param, const std::function<double()>& loss,
                                 double h = 1e-5) {
    const double saved = param;
    param = saved + h;
    const double up = loss();
    param = saved - h;
    const double down = loss();
    param = saved;
    return (up - down) / (2.0 * h);
}

inline double rel_error(double a, double b, double floor = 1e-6) {
    return std::abs(a - b) / std::max({std::abs(a), std::abs(b), floor});
}

/// Minimal XML well-formedness scan: matched angle brackets, balanced open
/// and close tags, quoted attribute values. Returns an empty string when the
/// document scans clean, else a description of the first problem.
inline std::string xml_scan(const std::string& doc) {
    std::vector<std::string> stack;
    std::size_t pos = 0;
    while (pos < doc.size()) {
        const std::size_t open = doc.find('<', pos);
        if (open == std::string::npos) break;
        const std::size_t close = doc.find('>', open);
        if (close == std::string::npos) return "unterminated tag";
        std::string tag = doc.substr(open + 1, close - open - 1);
        pos = close + 1;
        if (tag.empty()) return "empty tag";
        if (tag.front() == '?' || tag.front() == '!') continue;
        if (std::count(tag.begin(), tag.end(), '"') % 2 != 0)
            return "unbalanced attribute quotes in <" + tag + ">";
        if (tag.front() == '/') {
            const std::string name = tag.substr(1);
            if (stack.empty() || stack.back() != name)
                return "mismatched close tag </" + name + ">";
            stack.pop_back();
        } else if (tag.back() == '/') {
            continue;  // self-closing
        } else {
            const std::size_t name_end = tag.find_first_of(" \t\n");
            stack.push_back(tag.substr(0, name_end));
        }
    }
    if (!stack.empty()) return "unclosed tag <" + stack.back() + ">";
    return "";
}

}  // namespace oracles

#pragma once

#include <cmath>
#include <cstdint>
#include <string_view>

namespace motrans {

/// SplitMix64 generator. Bit-identical output on every platform; all
/// randomness in the pipeline (init, dropout, shuffling, corpus jitter)
/// flows through labeled streams of this generator.
class SplitMix64 {
public:
    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next_u64() {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    /// Uniform in [0, 1) with 53 random bits.
    double next_unit() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    double next_range(double lo, double hi) { return lo + (hi - lo) * next_unit(); }

    std::uint64_t next_below(std::uint64_t n) { return n == 0 ? 0 : next_u64() % n; }

    /// Standard normal via Box-Muller (two uniforms per call, no cached spare).
    double next_gaussian() {
        double u1 = next_unit();
        double u2 = next_unit();
        if (u1 <= 0.0) u1 = 0x1.0p-53;
        return std::sqrt(-2.0 * std::log(u1)) *
               std::cos(2.0 * 3.14159265358979323846 * u2);
    }

private:
    std::uint64_t state_;
};

/// FNV-1a hash of `label` folded into `seed`. Each consumer derives its own
/// stream by label, so adding a consumer never perturbs the others.
inline std::uint64_t derive_seed(std::uint64_t seed, std::string_view label) {
    std::uint64_t h = 14695981039346656037ULL ^ seed;
    for (char c : label) {
        h ^= static_cast<unsigned char>(c);
        h *= 1099511628211ULL;
    }
    return h;
}

inline SplitMix64 rng_stream(std::uint64_t seed, std::string_view label) {
    return SplitMix64(derive_seed(seed, label));
}

}  // namespace motrans

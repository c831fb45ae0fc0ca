// Seeded random number generation with stable cross-run behavior.
//
// std::mt19937_64 is fully specified by the standard, but the distribution
// adaptors are not, so uniform draws are mapped from raw engine output here.
// Every random quantity in the library flows from a named seed through this
// header, which is what makes runs byte-for-byte reproducible.
#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

namespace lifa {

// SplitMix64 step; used to derive independent substream seeds.
inline std::uint64_t mix_seed(std::uint64_t state) {
    state += 0x9e3779b97f4a7c15ULL;
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

// Derives a substream seed from a root seed and one or more stream tags.
// Tagged derivation keeps substreams independent of evaluation order.
inline std::uint64_t substream(std::uint64_t seed, std::uint64_t tag) {
    return mix_seed(seed ^ mix_seed(tag));
}

template <typename... Tags>
std::uint64_t substream(std::uint64_t seed, std::uint64_t tag, Tags... rest) {
    return substream(substream(seed, tag), rest...);
}

class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next_u64() { return engine_(); }

    // Uniform in [0, 1).
    double uniform() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    // Uniform in [lo, hi).
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    // Uniform integer in [0, n); n > 0. Rejection sampling keeps it unbiased.
    std::uint64_t below(std::uint64_t n) {
        const std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % n);
        std::uint64_t x;
        do {
            x = next_u64();
        } while (x >= limit);
        return x % n;
    }

    std::int64_t index(std::int64_t n) { return static_cast<std::int64_t>(below(static_cast<std::uint64_t>(n))); }

    bool bernoulli(double p) { return uniform() < p; }

    // Standard normal via Box-Muller (cached second draw).
    double normal() {
        if (has_cached_) {
            has_cached_ = false;
            return cached_;
        }
        double u1 = 0.0;
        while (u1 == 0.0) u1 = uniform();
        const double u2 = uniform();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double theta = 6.283185307179586476925286766559 * u2;
        cached_ = r * std::sin(theta);
        has_cached_ = true;
        return r * std::cos(theta);
    }

    // In-place Fisher-Yates shuffle.
    template <typename T>
    void shuffle(std::vector<T>& items) {
        for (std::size_t i = items.size(); i > 1; --i) {
            std::swap(items[i - 1], items[static_cast<std::size_t>(below(i))]);
        }
    }

    // k distinct values from [0, n), in sorted order.
    std::vector<std::int64_t> sample_without_replacement(std::int64_t n, std::int64_t k);

private:
    std::mt19937_64 engine_;
    bool has_cached_ = false;
    double cached_ = 0.0;
};

inline std::vector<std::int64_t> Rng::sample_without_replacement(std::int64_t n, std::int64_t k) {
    std::vector<std::int64_t> chosen;
    chosen.reserve(static_cast<std::size_t>(k));
    if (k >= n) {
        chosen.resize(static_cast<std::size_t>(n));
        for (std::int64_t i = 0; i < n; ++i) chosen[static_cast<std::size_t>(i)] = i;
        return chosen;
    }
    // Partial Fisher-Yates over an index pool; O(n) memory, O(n + k) time.
    std::vector<std::int64_t> pool(static_cast<std::size_t>(n));
    for (std::int64_t i = 0; i < n; ++i) pool[static_cast<std::size_t>(i)] = i;
    for (std::int64_t i = 0; i < k; ++i) {
        const std::int64_t j = i + index(n - i);
        std::swap(pool[static_cast<std::size_t>(i)], pool[static_cast<std::size_t>(j)]);
        chosen.push_back(pool[static_cast<std::size_t>(i)]);
    }
    std::sort(chosen.begin(), chosen.end());
    return chosen;
}

} // namespace lifa

#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <vector>

namespace ensred {

// SplitMix64 finalizer. Statistically strong enough for synthetic-data
// streams and cheap enough to run per draw.
inline constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ull;

inline std::uint64_t mix64(std::uint64_t z) {
    z ^= z >> 30;
    z *= 0xBF58476D1CE4E5B9ull;
    z ^= z >> 27;
    z *= 0x94D049BB133111EBull;
    z ^= z >> 31;
    return z;
}

/// Counter-based random stream keyed by (seed, a, b, c). Draw i is a pure
/// function of the key and i, so streams can be evaluated in any order or
/// from any thread and still produce identical values.
class CounterStream {
public:
    explicit CounterStream(std::uint64_t seed, std::uint64_t a = 0,
                           std::uint64_t b = 0, std::uint64_t c = 0) {
        std::uint64_t k = mix64(seed + kGolden);
        k = mix64(k + kGolden + a);
        k = mix64(k + kGolden + b);
        k = mix64(k + kGolden + c);
        key_ = k;
    }

    std::uint64_t bits(std::uint64_t counter) const {
        return mix64(key_ + (counter + 1) * kGolden);
    }

    // Uniform in [0, 1), 53-bit resolution.
    double uniform01(std::uint64_t counter) const {
        return static_cast<double>(bits(counter) >> 11) * 0x1.0p-53;
    }

    // Standard normal via Box-Muller. Consumes bit counters 2i and 2i+1.
    double normal(std::uint64_t counter) const {
        const double u1 =
            (static_cast<double>(bits(2 * counter) >> 11) + 1.0) * 0x1.0p-53;
        const double u2 =
            static_cast<double>(bits(2 * counter + 1) >> 11) * 0x1.0p-53;
        return std::sqrt(-2.0 * std::log(u1)) *
               std::cos(2.0 * std::numbers::pi * u2);
    }

private:
    std::uint64_t key_ = 0;
};

/// Sequential SplitMix64 engine. Used where a plain seeded stream is enough
/// (shuffles, sampling). Distribution helpers are implemented here rather
/// than with <random> adaptors so that results do not depend on the standard
/// library implementation.
class SplitMix64 {
public:
    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next() {
        std::uint64_t z = (state_ += kGolden);
        return mix64(z);
    }

    double uniform01() {
        return static_cast<double>(next() >> 11) * 0x1.0p-53;
    }

    // Unbiased integer in [0, n) by rejection.
    std::uint64_t below(std::uint64_t n) {
        const std::uint64_t threshold = (0 - n) % n;
        for (;;) {
            const std::uint64_t r = next();
            if (r >= threshold) return r % n;
        }
    }

private:
    std::uint64_t state_;
};

template <typename T>
void fisher_yates_shuffle(std::vector<T>& v, SplitMix64& rng) {
    for (std::size_t i = v.size(); i > 1; --i) {
        const std::size_t j = static_cast<std::size_t>(rng.below(i));
        std::swap(v[i - 1], v[j]);
    }
}

/// k distinct indices from [0, n), in draw order (partial Fisher-Yates).
std::vector<int> sample_without_replacement(int n, int k, SplitMix64& rng);

}  // namespace ensred

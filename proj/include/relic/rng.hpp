#pragma once

#include <cstdint>
#include <vector>

namespace relic {

// SplitMix64. All sampling in the library goes through this generator;
// parallel work derives independent streams from (master seed, stream index),
// so results do not depend on how work is scheduled.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : state_(seed) {}

    static std::uint64_t mix(std::uint64_t z) {
        z += 0x9E3779B97F4A7C15ULL;
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    // Independent stream keyed by (seed, index).
    static Rng stream(std::uint64_t seed, std::uint64_t index) {
        return Rng(mix(seed ^ mix(index ^ 0xA5A5A5A5DEADBEEFULL)));
    }

    std::uint64_t next() {
        state_ += 0x9E3779B97F4A7C15ULL;
        std::uint64_t z = state_;
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    // uniform in [0,1) with 53 random bits
    double uniform01() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    bool bernoulli(double p) { return uniform01() < p; }

    // uniform in [0, m), Lemire rejection
    std::uint64_t below(std::uint64_t m) {
        if (m == 0) return 0;
        while (true) {
            std::uint64_t x = next();
            __uint128_t prod = static_cast<__uint128_t>(x) * m;
            std::uint64_t low = static_cast<std::uint64_t>(prod);
            if (low < m) {
                std::uint64_t threshold = (0 - m) % m;
                if (low < threshold) continue;
            }
            return static_cast<std::uint64_t>(prod >> 64);
        }
    }

    // Fisher-Yates, values 0..m-1
    std::vector<int> permutation(int m) {
        std::vector<int> p(m);
        for (int i = 0; i < m; ++i) p[i] = i;
        for (int i = m - 1; i > 0; --i) {
            int j = static_cast<int>(below(static_cast<std::uint64_t>(i) + 1));
            std::swap(p[i], p[j]);
        }
        return p;
    }

private:
    std::uint64_t state_;
};

} // namespace relic

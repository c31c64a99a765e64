#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace imbtk {

// splitmix64 finalizer, used to derive independent seed streams from a base
// seed plus integer tags (class label, repeat index, tree index, ...).
constexpr std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

constexpr std::uint64_t derive_seed(std::uint64_t base, std::uint64_t tag) {
    return splitmix64(base ^ splitmix64(tag));
}

constexpr std::uint64_t derive_seed(std::uint64_t base, std::uint64_t tag_a, std::uint64_t tag_b) {
    return derive_seed(derive_seed(base, tag_a), tag_b);
}

/// Deterministic random source. Wraps std::mt19937_64 but generates uniform
/// doubles and bounded integers itself, so identical seeds give identical
/// streams on every platform (std::uniform_*_distribution is not portable).
class Rng {
public:
    explicit Rng(std::uint64_t seed) : gen_(seed) {}

    std::uint64_t next_u64() { return gen_(); }

    /// Uniform draw from [0, 1) with 53 bits of precision.
    double uniform01() {
        return static_cast<double>(gen_() >> 11) * 0x1.0p-53;
    }

    /// Uniform draw from [0, max). max of 0 means [0, 1) again.
    double uniform_real(double max) { return uniform01() * max; }

    /// Unbiased uniform integer in [0, n). n must be positive.
    std::size_t uniform_below(std::size_t n) {
        const std::uint64_t bound = static_cast<std::uint64_t>(n);
        const std::uint64_t threshold = (0ULL - bound) % bound;
        for (;;) {
            const std::uint64_t r = gen_();
            if (r >= threshold) return static_cast<std::size_t>(r % bound);
        }
    }

    /// Standard normal via Box-Muller (deterministic across platforms).
    double normal() {
        const double u1 = 1.0 - uniform01();  // (0, 1]
        const double u2 = uniform01();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586476925286766559 * u2);
    }

private:
    std::mt19937_64 gen_;
};

}  // namespace imbtk

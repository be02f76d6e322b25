#ifndef SSCC_RNG_HPP
#define SSCC_RNG_HPP

#include <cmath>
#include <cstdint>
#include <random>

namespace sscc {

/// Deterministic random source. Wraps std::mt19937_64 but converts to
/// floating point by hand so that streams are reproducible across standard
/// library implementations (std::uniform_real_distribution is not portable).
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    /// Independent substream: mixes a stream id into the seed so that, for
    /// example, each worker trace draws from its own sequence.
    Rng(std::uint64_t seed, std::uint64_t stream)
        : engine_(seed * 0x9e3779b97f4a7c15ull + stream * 0xbf58476d1ce4e5b9ull + 0x94d049bb133111ebull) {}

    std::uint64_t next_u64() { return engine_(); }

    /// Uniform in [0, 1) with 53 random bits.
    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    /// Uniform integer in [0, bound). Uses rejection sampling so the result
    /// does not depend on how the standard library maps words to ranges.
    std::uint64_t below(std::uint64_t bound) {
        const std::uint64_t limit = ~0ull - ~0ull % bound;
        std::uint64_t word = engine_();
        while (word >= limit) word = engine_();
        return word % bound;
    }

    /// Standard normal via Box-Muller on the portable uniform stream.
    double normal() {
        double u = uniform();
        while (u == 0.0) u = uniform();
        const double v = uniform();
        constexpr double twoPi = 6.283185307179586476925286766559;
        return std::sqrt(-2.0 * std::log(u)) * std::cos(twoPi * v);
    }

private:
    std::mt19937_64 engine_;
};

} // namespace sscc

#endif

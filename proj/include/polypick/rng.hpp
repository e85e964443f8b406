#pragma once

#include <complex>
#include <cstdint>
#include <numbers>

namespace polypick::detail {

// splitmix64: stable across platforms, so seeded artifacts are byte-identical.
class SplitMix64 {
public:
    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next() {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    /// Uniform double in [0, 1).
    double uniform01() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    /// Uniform point on the unit circle.
    std::complex<double> unimodular() {
        const double theta = 2.0 * std::numbers::pi * uniform01();
        return {std::cos(theta), std::sin(theta)};
    }

    /// Area-uniform point in the disc of the given radius.
    std::complex<double> in_disc(double radius) {
        const double r = radius * std::sqrt(uniform01());
        return r * unimodular();
    }

private:
    std::uint64_t state_;
};

/// Mixes a stream tag into a seed so stages draw independent sequences.
inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t tag) {
    SplitMix64 rng(seed ^ (0x5851f42d4c957f2dULL * (tag + 1)));
    return rng.next();
}

} // namespace polypick::detail

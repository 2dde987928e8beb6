#ifndef AMRLAB_RNG_HPP
#define AMRLAB_RNG_HPP

#include <cstdint>

namespace amrlab {

// splitmix64 finalizer; the fixed constants make every synthetic input
// reproducible bit-for-bit across platforms and languages.
inline std::uint64_t splitmix64_mix(std::uint64_t z) {
    z += 0x9E3779B97F4A7C15ULL;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

/// Sequential splitmix64 stream.
class SplitMix64 {
public:
    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next() {
        state_ += 0x9E3779B97F4A7C15ULL;
        std::uint64_t z = state_;
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    /// Uniform double in [0, 1).
    double next_unit() { return double(next() >> 11) * 0x1.0p-53; }

    /// Uniform integer in [lo, hi] inclusive.
    std::int64_t next_range(std::int64_t lo, std::int64_t hi) {
        return lo + std::int64_t(next() % std::uint64_t(hi - lo + 1));
    }

private:
    std::uint64_t state_;
};

inline std::uint64_t hash3(std::uint64_t seed, std::uint64_t a, std::uint64_t b) {
    return splitmix64_mix(splitmix64_mix(splitmix64_mix(seed) ^ a) ^ b);
}

inline double unit_double(std::uint64_t h) { return double(h >> 11) * 0x1.0p-53; }

} // namespace amrlab

#endif

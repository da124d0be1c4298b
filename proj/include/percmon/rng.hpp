#ifndef PERCMON_RNG_HPP_
#define PERCMON_RNG_HPP_

#include <cmath>
#include <cstdint>

namespace percmon {

// Deterministic counter-based generator. std::mt19937 plus the standard
// distributions are not bit-reproducible across library versions, and the
// output contracts here require byte-identical reruns, so sampling is done
// by hand on top of splitmix64.
inline std::uint64_t splitmix64(std::uint64_t& state) {
    state += 0x9e3779b97f4a7c15ULL;
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

class Rng {
public:
    explicit Rng(std::uint64_t seed) : state_(seed) {
        // burn-in decorrelates low-entropy seeds
        splitmix64(state_);
        splitmix64(state_);
    }

    std::uint64_t next_u64() { return splitmix64(state_); }

    /// Uniform double in [0, 1) with 53 bits of randomness.
    double uniform01() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    /// Uniform double in [lo, hi).
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

    /// Standard normal via Box-Muller; pairs are cached so one call
    /// consumes either zero or two uniforms.
    double normal() {
        if (has_cached_) {
            has_cached_ = false;
            return cached_;
        }
        double u1 = uniform01();
        double u2 = uniform01();
        while (u1 <= 0.0) u1 = uniform01();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double a = 6.283185307179586476925286766559 * u2;
        cached_ = r * std::sin(a);
        has_cached_ = true;
        return r * std::cos(a);
    }

    double normal(double mean, double stddev) { return mean + stddev * normal(); }

private:
    std::uint64_t state_;
    double cached_ = 0.0;
    bool has_cached_ = false;
};

/// Derives an independent substream for (seed, frame, id, salt). Used by the
/// fault injector and the LiDAR model so results do not depend on processing
/// order.
inline Rng substream(std::uint64_t seed, std::uint64_t frame, std::uint64_t id,
                     std::uint64_t salt = 0) {
    std::uint64_t s = seed;
    s ^= 0x632be59bd9b4e019ULL + splitmix64(frame);
    std::uint64_t f = frame * 0x9e3779b97f4a7c15ULL + 0x7f4a7c15ULL;
    std::uint64_t i = id * 0xbf58476d1ce4e5b9ULL + 0x1ce4e5b9ULL;
    s ^= splitmix64(f) + (splitmix64(i) << 1);
    s ^= salt * 0x94d049bb133111ebULL;
    return Rng(s);
}

}  // namespace percmon

#endif  // PERCMON_RNG_HPP_

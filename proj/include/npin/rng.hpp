#pragma once

#include <cstdint>
#include <limits>

namespace npin {

/// SplitMix64 finalizer; also used to derive per-episode seeds.
constexpr std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

/// Seed of episode `index` in a batch: splitmix64(base ^ splitmix64(index)).
/// The constant mixing keeps logs portable across machines and builds.
constexpr std::uint64_t episode_seed(std::uint64_t base_seed, std::uint64_t index) {
    return splitmix64(base_seed ^ splitmix64(index));
}

/// Small deterministic generator (xoshiro256**) with explicitly specified
/// real and integer draws; std distributions are implementation-defined and
/// would break cross-platform replay.
class Rng {
public:
    using result_type = std::uint64_t;

    explicit Rng(std::uint64_t seed);

    std::uint64_t next();
    std::uint64_t operator()() { return next(); }
    static constexpr std::uint64_t min() { return 0; }
    static constexpr std::uint64_t max() { return std::numeric_limits<std::uint64_t>::max(); }

    /// Uniform in [0, 1) with 53 random bits.
    double uniform();
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
    /// Uniform integer in [lo, hi] (inclusive), rejection-sampled.
    std::int64_t uniform_int(std::int64_t lo, std::int64_t hi);

private:
    std::uint64_t s_[4];
};

}  // namespace npin

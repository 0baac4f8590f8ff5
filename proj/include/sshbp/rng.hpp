#pragma once

#include <cstdint>
#include <random>

namespace sshbp {

/// SplitMix64 finalizer. Used to derive independent, platform-stable seeds.
constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept
{
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

/// Seed of realization `index` under `master_seed`:
///   seed_k = splitmix64(master_seed ^ splitmix64(k))
/// Depends only on (master_seed, k), never on scheduling.
constexpr std::uint64_t realization_seed(std::uint64_t master_seed, std::uint64_t index) noexcept
{
    return splitmix64(master_seed ^ splitmix64(index));
}

/// Uniform variates with a bit-exact definition on every platform.
/// std::uniform_real_distribution is implementation-defined, so the
/// conversion from the (standardized) mt19937_64 stream is done here.
class UniformStream {
public:
    explicit UniformStream(std::uint64_t seed) : engine_(seed) {}

    /// Uniform on [0, 1) with 53 random bits.
    double next_unit() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    /// Uniform on [lo, hi).
    double next(double lo, double hi) { return lo + (hi - lo) * next_unit(); }

private:
    std::mt19937_64 engine_;
};

} // namespace sshbp

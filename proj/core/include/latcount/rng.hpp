#pragma once

#include <array>
#include <cstdint>

namespace latcount {

/// xoshiro256** generator seeded through splitmix64.
///
/// The state for (seed, stream) is produced by running splitmix64 on
/// `seed ^ mix(stream)`; all derived draws (uniform doubles, bounded
/// integers, normals) are implemented here instead of through
/// <random> distributions, so sequences are identical on every platform
/// and standard library.
class Rng {
public:
    explicit Rng(std::uint64_t seed = 0, std::uint64_t stream = 0);

    std::uint64_t next();

    /// Uniform on [0, 1) with 53 random bits.
    double uniform01();

    /// Uniform on [lo, hi].
    double uniform(double lo, double hi);

    /// Uniform integer in [0, bound), bound > 0. Unbiased (rejection).
    std::uint64_t below(std::uint64_t bound);

    /// Uniform integer in [lo, hi].
    std::int64_t integer(std::int64_t lo, std::int64_t hi);

    /// Standard normal via Box-Muller; caches the second variate.
    double normal();

    std::uint64_t seed() const noexcept { return seed_; }
    std::uint64_t stream() const noexcept { return stream_; }

    /// Child generator on a derived stream; does not advance *this.
    Rng derive(std::uint64_t substream) const;

private:
    std::array<std::uint64_t, 4> s_{};
    std::uint64_t seed_;
    std::uint64_t stream_;
    double spare_normal_ = 0.0;
    bool has_spare_ = false;
};

std::uint64_t splitmix64(std::uint64_t& state);

/// Stateless 64-bit mixer (splitmix64 finalizer).
std::uint64_t mix64(std::uint64_t x);

}  // namespace latcount

#pragma once

#include <cstddef>
#include <cstdint>

namespace latcount {

/// Every tunable of a counting run. Defaults follow the reference
/// settings: eps = 0.2, delta = 0.1, w = n, s = 2/(delta eps^2),
/// r_min = 0.4, r_max = 0.6, mu = 0.005, gamma = 10.
struct RunConfig {
    double epsilon = 0.2;
    double delta = 0.1;
    std::size_t s = 0;      // 0 selects sample_size(epsilon, delta, gamma)
    std::size_t gamma = 10;
    std::size_t w = 0;      // 0 selects the dimension n
    double r_min = 0.4;
    double r_max = 0.6;
    double mu = 0.005;
    std::uint64_t seed = 0;

    std::size_t max_rounds = 1000;
    std::uint64_t max_attempts = 0;  // per sampling call; 0 selects max(1e5, 1e4 s)
    std::size_t max_disturbs = 100;  // per chain level
    std::size_t threads = 1;

    /// s with the default filled in.
    std::size_t samples_per_round() const;

    /// Throws Error(input) when an invariant is violated:
    /// 0<eps<1, 0<delta<1, gamma>=2, s % gamma == 0, r_min < 0.5 < r_max, mu > 0.
    void validate() const;
};

/// ceil(2 / (delta eps^2)) rounded up to a multiple of gamma.
std::size_t sample_size(double epsilon, double delta, std::size_t gamma);

}  // namespace latcount

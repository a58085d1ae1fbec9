#pragma once

#include "latcount/bignum.hpp"
#include "latcount/chain.hpp"
#include "latcount/config.hpp"
#include "latcount/model.hpp"

#include <cstdint>
#include <vector>

namespace latcount {

/// Ratio |S cap P_{i+1}| / |S| for one level, with its grouped variance.
struct RatioStats {
    double r = 0.0;
    double v = 0.0;
    std::vector<double> group_ratios;  // r_ij, groups taken in arrival order
    std::size_t N = 0;
};

/// Splits `inside` (one flag per sample, arrival order) into N equal
/// groups. v = sum_j (r_ij - r)^2 / (N (N - 1)).
RatioStats ratio_stats(std::span<const std::uint8_t> inside, std::size_t N);
RatioStats ratio_stats(std::span<const LatticePoint> S, const Polytope& P_next, std::size_t N);

struct StopDecision {
    bool stop = false;
    double r = 0.0;
    double v = 0.0;
};

/// Evaluates prod(v_i + r_i^2) - r^2 <= delta eps^2 r^2.
///
/// Returns stop = false whenever some r_i is zero. Beyond 30 levels the
/// products are formed in log space. A relative band of 1e-9 on the
/// bound absorbs rounding when the two sides agree exactly.
StopDecision stopping_satisfied(std::span<const RatioStats> levels, double epsilon, double delta);

struct LevelDiagnostics {
    std::uint64_t attempts = 0;  // walk endpoints generated for this level, all rounds
    std::uint64_t accepted = 0;
    std::uint64_t reused = 0;    // samples inherited from the previous level
    std::size_t cut_rows = 0;
    std::size_t disturbs = 0;
    bool window_relaxed = false;
    bool weak_rounding = false;
    std::size_t rounding_iterations = 0;

    double acceptance_rate() const noexcept
    {
        return attempts ? static_cast<double>(accepted) / static_cast<double>(attempts) : 0.0;
    }
};

struct CountEstimate {
    BigFloat count;    // rect_count * r
    BigInt rect_count;  // |P_0 cap Z^n|
    double r = 0.0;
    double v = 0.0;
    std::vector<RatioStats> levels;
    std::vector<LevelDiagnostics> diagnostics;
    std::size_t chain_length = 0;
    std::size_t rounds = 0;
    std::uint64_t total_samples = 0;  // accepted samples across chain construction and rounds
    std::size_t groups = 0;           // final N
    std::size_t group_size = 0;
    bool weak_rounding = false;

    double count_as_double() const { return count.convert_to<double>(); }
};

/// Approximate |P cap Z^n| to within (eps, delta).
///
/// Builds the chain, then repeats rounds: N grows by gamma and every
/// level receives s new samples, starting from the points of the
/// previous level's batch that fall inside it. Each level walks
/// from the origin of its rounded body on an Rng stream pinned to
/// (level, round), so the result does not depend on `threads`.
CountEstimate estimate(const Polytope& P, const RunConfig& cfg);

}  // namespace latcount

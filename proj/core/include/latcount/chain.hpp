#pragma once

#include "latcount/bignum.hpp"
#include "latcount/config.hpp"
#include "latcount/lp.hpp"
#include "latcount/model.hpp"
#include "latcount/rng.hpp"
#include "latcount/sampler.hpp"

#include <optional>
#include <vector>

namespace latcount {

/// One polytope P_i of the chain with the rows that cut it down to P_{i+1}.
struct ChainLevel {
    Polytope polytope;               // P_i
    std::vector<Halfspace> cut_rows;  // P_{i+1} = P_i plus these rows; empty on the last level
    SampleSet samples;               // construction samples S_i
    std::size_t reused = 0;          // leading samples carried over from S_{i-1}
    std::size_t disturbs = 0;
    bool window_relaxed = false;  // no cut reached [r_min, r_max]; only r_min was enforced
    std::optional<ShiftedPolytope> shifted;  // sampling body, present for i < l
};

struct Chain {
    Rectangle rect;
    BigInt rect_count;
    std::vector<ChainLevel> levels;  // P_0 .. P_l

    /// l, the number of ratios.
    std::size_t length() const noexcept { return levels.empty() ? 0 : levels.size() - 1; }
};

/// Builds P_0 = Rect(P) > P_1 > ... > P_l = P.
///
/// Each level samples s lattice points of P_i (reusing the points of
/// S_{i-1} that fall in P_i), then greedily appends original rows while
/// the kept fraction stays above r_max. A row that would drop the
/// fraction below r_min is replaced by a parallel relaxation found by
/// `find_threshold`; when no threshold lands in [r_min, r_max] the row
/// direction is perturbed with `disturb` and the search repeated. After
/// `max_disturbs` failed perturbations (a level with too few lattice
/// points for any cut to split it near one half) the smallest relaxation
/// keeping at least r_min is used, or h_j itself if that cuts nothing.
Chain subdivision(const Polytope& P, std::size_t s, const RunConfig& cfg, Rng& rng);

struct ThresholdCounter {
    std::size_t comparisons = 0;
};

/// Scan of sorted projections. `values` holds a.p for p in S cap H,
/// `total` is |S|. Returns the smallest b' >= b_lower whose kept
/// fraction reaches r_min, provided that fraction is at most r_max.
std::optional<double> threshold_from_values(std::vector<double> values, std::size_t total, double b_lower,
                                            double r_min, double r_max, ThresholdCounter* counter = nullptr);

std::optional<double> find_threshold(std::span<const LatticePoint> S, std::span<const Halfspace> H,
                                     std::span<const double> a, double b_lower, double r_min, double r_max);

/// Each coordinate uniform in [a_i - mu, a_i + mu]; redraws once on a zero vector.
Vector disturb(std::span<const double> a, double mu, Rng& rng);

}  // namespace latcount

#pragma once

#include "latcount/bignum.hpp"
#include "latcount/model.hpp"

#include <cstdint>
#include <optional>
#include <vector>

namespace latcount {

enum class LpStatus { optimal, unbounded, infeasible };

struct LpResult {
    LpStatus status = LpStatus::infeasible;
    double value = 0.0;
    std::optional<Vector> argmax;  // engaged iff optimal
};

/// Dense two-phase tableau simplex for max c.x s.t. A x <= b, x free.
///
/// Free variables are split as x = x+ - x-. Dantzig's rule picks the
/// entering column until 500 consecutive degenerate pivots occur, after
/// which Bland's rule is used for the rest of the phase. Exceeding
/// 50*(m+2n) pivots per phase throws Error(numerical).
LpResult maximize(std::span<const double> c, const Polytope& P);

/// Integer bounding box of a polytope.
struct Rectangle {
    std::vector<std::int64_t> lo;
    std::vector<std::int64_t> hi;

    std::size_t dim() const noexcept { return lo.size(); }
    Polytope to_polytope() const;
};

/// Bounding rectangle from 2n LPs, rounded inward to integers with a
/// 1e-7 safety band. Throws Error(unbounded) or Error(infeasible).
Rectangle get_rect(const Polytope& P);

/// Real bounding box [lo, hi] from 2n LPs (no rounding).
struct RealBox {
    Vector lo;
    Vector hi;
};
RealBox real_bounds(const Polytope& P);

BigInt rect_lattice_count(const Rectangle& R);

/// Center and radius of the largest inscribed ball.
struct InnerBall {
    Vector center;
    double radius = 0.0;
};
InnerBall chebyshev_ball(const Polytope& P);

}  // namespace latcount

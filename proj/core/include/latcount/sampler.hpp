#pragma once

#include "latcount/model.hpp"
#include "latcount/rng.hpp"
#include "latcount/rounding.hpp"

#include <cstdint>
#include <vector>

namespace latcount {

/// P enlarged so every unit cube centred at a lattice point of P fits,
/// plus the rounding map and the rounded body the walk runs in.
struct ShiftedPolytope {
    Polytope base;         // P
    Vector shifts;         // v_i = max a_i.x over the cube [-1/2, 1/2]^n
    Polytope enlarged;     // {A x <= b + v}
    AffineMap map;         // rounding transform of `enlarged`
    Polytope transformed;  // map(enlarged)
    bool weak_rounding = false;
    std::size_t rounding_iterations = 0;
};

/// v_i = 1/2 * ||a_i||_1, the closed-form optimum of the cube LP.
Vector facet_shifts(const Polytope& P);

/// Same quantity solved with the simplex; kept for cross-checking.
Vector facet_shifts_lp(const Polytope& P);

ShiftedPolytope shift_facets(const Polytope& P, const RoundingOptions& rounding = {});

/// Coordinate-directions hit-and-run over a fixed polytope.
///
/// Keeps the slack vector b - A x incrementally so a step costs O(m).
/// Coefficients with |a_ij| < 1e-12 are treated as parallel to the
/// chosen axis.
class CoordinateWalker {
public:
    CoordinateWalker(const Polytope& Q, std::span<const double> start);

    /// One step: uniform axis, then uniform point on the chord.
    void step(Rng& rng);
    void steps(std::size_t count, Rng& rng);

    /// Recomputes the slack vector from scratch (drift control).
    void refresh();

    std::span<const double> position() const noexcept { return x_; }

private:
    bool try_axis(std::size_t axis, Rng& rng);

    const Polytope* Q_;
    std::size_t n_;
    std::size_t m_;
    std::vector<double> columns_;  // column-major copy of A
    Vector x_;
    Vector slack_;
};

/// Chord [lo, hi] of the line p + lambda*e_axis inside Q.
struct Chord {
    double lo;
    double hi;
};
Chord axis_chord(const Polytope& Q, std::span<const double> p, std::size_t axis);

Vector hit_and_run_step(const Polytope& Q, std::span<const double> p, Rng& rng);
Vector walk(const Polytope& Q, std::span<const double> p, std::size_t w, Rng& rng);

struct SampleSet {
    std::vector<LatticePoint> points;
    std::uint64_t attempts = 0;
    std::uint64_t accepted = 0;
    std::vector<std::uint64_t> attempts_at_accept;  // running attempt count at each acceptance

    /// Keeps the first k points, as if sampling had stopped at the k-th accept.
    void truncate(std::size_t k);

    double acceptance_rate() const noexcept
    {
        return attempts ? static_cast<double>(accepted) / static_cast<double>(attempts) : 0.0;
    }
};

struct SampleOptions {
    std::size_t walk_length = 0;     // 0 selects w = n
    std::uint64_t max_attempts = 0;  // 0 selects max(1e5, 1e4 * s)
};

/// Rejection sampler: walk in the rounded enlarged body, pull back,
/// round, keep the point iff it lies in P. The walk position carries
/// over between attempts. `start` defaults to the origin of the rounded
/// body.
SampleSet sample_lattice(const ShiftedPolytope& SP, std::size_t s, Rng& rng,
                         std::span<const double> start = {}, const SampleOptions& options = {});

}  // namespace latcount

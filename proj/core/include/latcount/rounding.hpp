#pragma once

#include "latcount/model.hpp"

#include <cstddef>
#include <vector>

namespace latcount {

/// y = linear * x + offset, with the inverse kept alongside.
/// Matrices are dense row-major n*n.
struct AffineMap {
    std::size_t dim = 0;
    std::vector<double> linear;
    std::vector<double> inverse;
    Vector offset;
    double log_det = 0.0;  // log |det linear|

    static AffineMap identity(std::size_t n);
    /// Builds the map from a linear part and offset; computes inverse and log_det.
    static AffineMap from_linear(std::size_t n, std::vector<double> linear, Vector offset);
};

Vector apply(const AffineMap& T, std::span<const double> x);
Vector apply_inv(const AffineMap& T, std::span<const double> y);

/// In-place variant for hot loops; `out` must have size n.
void apply_inv(const AffineMap& T, std::span<const double> y, std::span<double> out);

/// Rows of T(P): {y : a T^{-1}(y) <= b}.
Polytope transform_polytope(const AffineMap& T, const Polytope& P);

struct RoundingOptions {
    std::size_t max_iterations = 0;  // 0 selects 50*n^2
    bool allow_fallback = true;
};

struct Rounding {
    AffineMap map;
    bool weak = false;          // fallback map; inner ball not certified
    std::size_t iterations = 0;  // ellipsoid updates performed
    double inner_radius = 0.0;   // radius of the ellipsoid shrink that fits in the body
};

/// Shallow-cut ellipsoid rounding with beta = 1/(2n).
///
/// On success the returned map satisfies B(0,1) in T(P) in B(0,2n). The
/// ellipsoid starts as the one circumscribing the real bounding box of P.
/// At each step the row whose halfspace is most violated by the
/// beta-shrunk ellipsoid is used as a (deep or shallow) cut. When the
/// iteration cap is hit the map sending the bounding box to [-1,1]^n,
/// recentred on the Chebyshev center, is returned with `weak` set.
Rounding round_body(const Polytope& P, const RoundingOptions& options = {});

}  // namespace latcount

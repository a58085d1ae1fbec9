#pragma once

// Reference computations used as independent checks. Nothing here calls
// the library's LP, oracle or rounding code.

#include "latcount/model.hpp"

#include <boost/math/distributions/chi_squared.hpp>

#include <cmath>
#include <cstdint>
#include <map>
#include <utility>
#include <vector>

namespace support {

using latcount::LatticePoint;
using latcount::Polytope;

inline Polytope box(const std::vector<double>& lo, const std::vector<double>& hi)
{
    Polytope P(lo.size());
    std::vector<double> a(lo.size(), 0.0);
    for (std::size_t j = 0; j < lo.size(); ++j) {
        a[j] = 1.0;
        P.add_row(a, hi[j]);
        a[j] = -1.0;
        P.add_row(a, -lo[j]);
        a[j] = 0.0;
    }
    return P;
}

inline Polytope cube(std::size_t n, double lo, double hi)
{
    return box(std::vector<double>(n, lo), std::vector<double>(n, hi));
}

// {-x1 <= 0, -x2 <= 0, x1 + x2 <= 2}
inline Polytope triangle()
{
    Polytope P(2);
    P.add_row(std::vector<double>{-1, 0}, 0);
    P.add_row(std::vector<double>{0, -1}, 0);
    P.add_row(std::vector<double>{1, 1}, 2);
    return P;
}

// x_i >= 0, sum x_i <= k
inline Polytope simplex(std::size_t n, double k)
{
    Polytope P(n);
    std::vector<double> a(n, 0.0);
    for (std::size_t j = 0; j < n; ++j) {
        a[j] = -1.0;
        P.add_row(a, 0.0);
        a[j] = 0.0;
    }
    P.add_row(std::vector<double>(n, 1.0), k);
    return P;
}

inline bool inside(const Polytope& P, const std::vector<std::int64_t>& x)
{
    for (std::size_t i = 0; i < P.rows(); ++i) {
        long double s = 0;
        for (std::size_t j = 0; j < P.dim(); ++j) s += static_cast<long double>(P.a(i)[j]) * x[j];
        if (s > static_cast<long double>(P.b(i)) + 1e-9L * (1 + std::fabs(P.b(i)))) return false;
    }
    return true;
}

// Plain odometer over [lo, hi]; no pruning.
inline std::vector<LatticePoint> brute_points(const Polytope& P, const std::vector<std::int64_t>& lo,
                                              const std::vector<std::int64_t>& hi)
{
    std::vector<LatticePoint> out;
    std::vector<std::int64_t> x = lo;
    const std::size_t n = lo.size();
    while (true) {
        if (inside(P, x)) out.push_back(LatticePoint{x});
        std::size_t j = n;
        while (j > 0) {
            --j;
            if (x[j] < hi[j]) {
                ++x[j];
                break;
            }
            x[j] = lo[j];
            if (j == 0) return out;
        }
        if (n == 0) return out;
    }
}

inline std::uint64_t brute_count(const Polytope& P, std::int64_t lo, std::int64_t hi)
{
    const std::size_t n = P.dim();
    return brute_points(P, std::vector<std::int64_t>(n, lo), std::vector<std::int64_t>(n, hi)).size();
}

using Point2 = std::pair<double, double>;

inline double shoelace(const std::vector<Point2>& poly)
{
    double s = 0;
    for (std::size_t i = 0; i < poly.size(); ++i) {
        const auto& [x1, y1] = poly[i];
        const auto& [x2, y2] = poly[(i + 1) % poly.size()];
        s += x1 * y2 - x2 * y1;
    }
    return std::fabs(s) / 2;
}

// Sutherland-Hodgman clip of a large square by every row of a 2D polytope.
inline std::vector<Point2> polygon(const Polytope& P, double extent = 1e6)
{
    std::vector<Point2> poly{{-extent, -extent}, {extent, -extent}, {extent, extent}, {-extent, extent}};
    for (std::size_t i = 0; i < P.rows(); ++i) {
        const double a = P.a(i)[0], b = P.a(i)[1], c = P.b(i);
        auto val = [&](const Point2& p) { return a * p.first + b * p.second - c; };
        std::vector<Point2> next;
        for (std::size_t k = 0; k < poly.size(); ++k) {
            const Point2& p = poly[k];
            const Point2& q = poly[(k + 1) % poly.size()];
            const double vp = val(p), vq = val(q);
            if (vp <= 0) next.push_back(p);
            if ((vp < 0 && vq > 0) || (vp > 0 && vq < 0)) {
                const double t = vp / (vp - vq);
                next.emplace_back(p.first + t * (q.first - p.first), p.second + t * (q.second - p.second));
            }
        }
        poly = std::move(next);
        if (poly.empty()) break;
    }
    return poly;
}

// Determinant by Gaussian elimination with partial pivoting (row-major n*n).
inline double determinant(std::vector<double> M, std::size_t n)
{
    double det = 1;
    for (std::size_t c = 0; c < n; ++c) {
        std::size_t piv = c;
        for (std::size_t r = c + 1; r < n; ++r)
            if (std::fabs(M[r * n + c]) > std::fabs(M[piv * n + c])) piv = r;
        if (M[piv * n + c] == 0) return 0;
        if (piv != c) {
            for (std::size_t k = 0; k < n; ++k) std::swap(M[c * n + k], M[piv * n + k]);
            det = -det;
        }
        det *= M[c * n + c];
        for (std::size_t r = c + 1; r < n; ++r) {
            const double f = M[r * n + c] / M[c * n + c];
            for (std::size_t k = c; k < n; ++k) M[r * n + k] -= f * M[c * n + k];
        }
    }
    return det;
}

// Upper-tail p-value of Pearson's statistic against the uniform law on the keys of `expected_support`.
inline double chi_square_uniform_pvalue(const std::map<LatticePoint, std::uint64_t>& counts,
                                        const std::vector<LatticePoint>& support_points)
{
    std::uint64_t total = 0;
    for (const auto& [p, c] : counts) total += c;
    const double e = static_cast<double>(total) / static_cast<double>(support_points.size());
    double stat = 0;
    for (const auto& p : support_points) {
        auto it = counts.find(p);
        const double o = it == counts.end() ? 0.0 : static_cast<double>(it->second);
        stat += (o - e) * (o - e) / e;
    }
    boost::math::chi_squared dist(static_cast<double>(support_points.size() - 1));
    return boost::math::cdf(boost::math::complement(dist, stat));
}

}  // namespace support

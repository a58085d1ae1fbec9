#include "latcount/rounding.hpp"

#include "latcount/error.hpp"
#include "latcount/lp.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <limits>

namespace latcount {

namespace {

using Mat = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using Vec = Eigen::VectorXd;

Eigen::Map<const Mat> view(const std::vector<double>& m, std::size_t n)
{
    const auto k = static_cast<Eigen::Index>(n);
    return Eigen::Map<const Mat>(m.data(), k, k);
}

std::vector<double> flatten(const Mat& m)
{
    return std::vector<double>(m.data(), m.data() + m.size());
}

constexpr double kMinWidth = 1e-10;

}  // namespace

AffineMap AffineMap::identity(std::size_t n)
{
    AffineMap T;
    T.dim = n;
    T.linear.assign(n * n, 0.0);
    for (std::size_t i = 0; i < n; ++i) T.linear[i * n + i] = 1.0;
    T.inverse = T.linear;
    T.offset.assign(n, 0.0);
    T.log_det = 0.0;
    return T;
}

AffineMap AffineMap::from_linear(std::size_t n, std::vector<double> linear, Vector offset)
{
    if (linear.size() != n * n || offset.size() != n) {
        throw Error(ErrorKind::input, "AffineMap: dimension mismatch");
    }
    const Mat L = view(linear, n);
    Eigen::PartialPivLU<Mat> lu(L);
    const double det = lu.determinant();
    if (!std::isfinite(det) || det == 0.0) throw Error(ErrorKind::degenerate, "AffineMap: singular linear part");

    AffineMap T;
    T.dim = n;
    T.linear = std::move(linear);
    T.inverse = flatten(lu.inverse());
    T.offset = std::move(offset);
    // log|det| from the LU diagonal avoids overflow in high dimension
    const Mat& lu_m = lu.matrixLU();
    double log_det = 0.0;
    for (Eigen::Index i = 0; i < lu_m.rows(); ++i) log_det += std::log(std::abs(lu_m(i, i)));
    T.log_det = log_det;
    return T;
}

Vector apply(const AffineMap& T, std::span<const double> x)
{
    const std::size_t n = T.dim;
    if (x.size() != n) throw Error(ErrorKind::input, "apply: dimension mismatch");
    Vector y(T.offset);
    for (std::size_t i = 0; i < n; ++i) {
        const double* row = &T.linear[i * n];
        double s = 0.0;
        for (std::size_t j = 0; j < n; ++j) s += row[j] * x[j];
        y[i] += s;
    }
    return y;
}

void apply_inv(const AffineMap& T, std::span<const double> y, std::span<double> out)
{
    const std::size_t n = T.dim;
    for (std::size_t i = 0; i < n; ++i) {
        const double* row = &T.inverse[i * n];
        double s = 0.0;
        for (std::size_t j = 0; j < n; ++j) s += row[j] * (y[j] - T.offset[j]);
        out[i] = s;
    }
}

Vector apply_inv(const AffineMap& T, std::span<const double> y)
{
    if (y.size() != T.dim) throw Error(ErrorKind::input, "apply_inv: dimension mismatch");
    Vector x(T.dim);
    apply_inv(T, y, x);
    return x;
}

Polytope transform_polytope(const AffineMap& T, const Polytope& P)
{
    const std::size_t n = P.dim();
    if (T.dim != n) throw Error(ErrorKind::input, "transform_polytope: dimension mismatch");
    // a.x <= b with x = M (y - t)  =>  (a M) y <= b + (a M) t
    Polytope Q(n);
    Vector row(n);
    for (std::size_t i = 0; i < P.rows(); ++i) {
        auto a = P.a(i);
        for (std::size_t j = 0; j < n; ++j) {
            double s = 0.0;
            for (std::size_t k = 0; k < n; ++k) s += a[k] * T.inverse[k * n + j];
            row[j] = s;
        }
        double shift = 0.0;
        for (std::size_t j = 0; j < n; ++j) shift += row[j] * T.offset[j];
        Q.add_row(row, P.b(i) + shift);
    }
    return Q;
}

Rounding round_body(const Polytope& P, const RoundingOptions& options)
{
    const std::size_t n = P.dim();
    const RealBox box = real_bounds(P);
    Vec center(static_cast<Eigen::Index>(n));
    Vec half(static_cast<Eigen::Index>(n));
    for (std::size_t j = 0; j < n; ++j) {
        const double w = box.hi[j] - box.lo[j];
        if (!(w > kMinWidth)) {
            throw Error(ErrorKind::degenerate, "degenerate body: width " + std::to_string(w) +
                                                   " in coordinate x" + std::to_string(j + 1));
        }
        const auto jj = static_cast<Eigen::Index>(j);
        center(jj) = 0.5 * (box.hi[j] + box.lo[j]);
        half(jj) = 0.5 * w;
    }

    const auto diagonal_map = [&](const Vec& origin) {
        Mat L = Mat::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
        for (Eigen::Index j = 0; j < L.rows(); ++j) L(j, j) = 1.0 / half(j);
        Vec t = -(L * origin);
        return AffineMap::from_linear(n, flatten(L), Vector(t.data(), t.data() + t.size()));
    };

    Rounding result;
    if (n == 1) {
        // the interval itself is the sandwich: [-1,1] in B(0,1)..B(0,2)
        result.map = diagonal_map(center);
        result.inner_radius = 1.0;
        return result;
    }

    const double dn = static_cast<double>(n);
    const double beta = 1.0 / (2.0 * dn);
    const std::size_t cap = options.max_iterations ? options.max_iterations : 50 * n * n;

    Mat A(static_cast<Eigen::Index>(P.rows()), static_cast<Eigen::Index>(n));
    Vec b(static_cast<Eigen::Index>(P.rows()));
    for (std::size_t i = 0; i < P.rows(); ++i) {
        auto a = P.a(i);
        for (std::size_t j = 0; j < n; ++j) A(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = a[j];
        b(static_cast<Eigen::Index>(i)) = P.b(i);
    }

    // E = {x : (x-c)^T Q^{-1} (x-c) <= 1} circumscribing the box
    Vec c = center;
    Mat Q = (dn * half.array().square()).matrix().asDiagonal();

    std::size_t iter = 0;
    for (;;) {
        const Mat AQ = A * Q;
        const Vec slack = b - A * c;
        Eigen::Index worst = -1;
        double worst_alpha = -std::numeric_limits<double>::infinity();
        double worst_t = 0.0;
        double inner = std::numeric_limits<double>::infinity();
        for (Eigen::Index i = 0; i < A.rows(); ++i) {
            const double t = std::sqrt(std::max(AQ.row(i).dot(A.row(i)), 0.0));
            if (!(t > 0.0)) throw Error(ErrorKind::degenerate, "degenerate body: ellipsoid collapsed");
            const double alpha = -slack(i) / t;
            inner = std::min(inner, slack(i) / t);
            if (alpha > worst_alpha) {
                worst_alpha = alpha;
                worst = i;
                worst_t = t;
            }
        }
        if (worst_alpha <= -beta) {
            Eigen::LLT<Mat> llt(Q);
            if (llt.info() != Eigen::Success) break;  // numerically lost; use fallback
            const Mat L = llt.matrixL();
            Mat Linv = L.triangularView<Eigen::Lower>().solve(Mat::Identity(L.rows(), L.cols()));
            Linv /= inner;
            const Vec t = -(Linv * c);
            result.map = AffineMap::from_linear(n, flatten(Linv), Vector(t.data(), t.data() + t.size()));
            result.iterations = iter;
            result.inner_radius = inner;
            return result;
        }
        if (worst_alpha >= 1.0) {
            throw Error(ErrorKind::infeasible, "body is empty (ellipsoid cut off entirely)");
        }
        if (iter >= cap) break;

        const double alpha = worst_alpha;
        const Vec g = AQ.row(worst).transpose() / worst_t;
        c -= ((1.0 + dn * alpha) / (dn + 1.0)) * g;
        Q = (dn * dn * (1.0 - alpha * alpha) / (dn * dn - 1.0)) *
            (Q - (2.0 * (1.0 + dn * alpha) / ((dn + 1.0) * (1.0 + alpha))) * (g * g.transpose()));
        Q = 0.5 * (Q + Q.transpose()).eval();
        ++iter;
    }

    if (!options.allow_fallback) {
        throw Error(ErrorKind::resource_cap,
                    "rounding: ellipsoid iteration cap of " + std::to_string(cap) + " exceeded");
    }
    const InnerBall ball = chebyshev_ball(P);
    if (!(ball.radius > kMinWidth)) throw Error(ErrorKind::degenerate, "degenerate body: no interior");
    Vec origin(static_cast<Eigen::Index>(n));
    for (std::size_t j = 0; j < n; ++j) origin(static_cast<Eigen::Index>(j)) = ball.center[j];
    result.map = diagonal_map(origin);
    result.weak = true;
    result.iterations = iter;
    result.inner_radius = 0.0;
    return result;
}

}  // namespace latcount

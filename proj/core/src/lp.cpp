#include "latcount/lp.hpp"

#include "latcount/error.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace latcount {

namespace {

constexpr double kReducedCostEps = 1e-9;
constexpr double kPivotEps = 1e-9;
constexpr double kDegenerateStep = 1e-12;
constexpr int kDegenerateRunBeforeBland = 500;

// Dense tableau over z = (y+ [n], y- [n], slack [m], artificial [1]).
class Tableau {
public:
    Tableau(std::span<const double> c, const Polytope& P)
        : m_(P.rows()), n_(P.dim()), cols_(2 * n_ + m_ + 1), artificial_(cols_ - 1),
          t_(m_ * cols_, 0.0), rhs_(m_), basis_(m_), cost_(cols_, 0.0), d_(cols_, 0.0),
          cap_(50 * (m_ + 2 * n_))
    {
        for (std::size_t i = 0; i < m_; ++i) {
            auto a = P.a(i);
            double* row = &t_[i * cols_];
            for (std::size_t j = 0; j < n_; ++j) {
                row[j] = a[j];
                row[n_ + j] = -a[j];
            }
            row[2 * n_ + i] = 1.0;
            row[artificial_] = -1.0;
            rhs_[i] = P.b(i);
            basis_[i] = 2 * n_ + i;
        }
        for (std::size_t j = 0; j < n_; ++j) {
            objective_.push_back(c[j]);
        }
    }

    LpResult solve()
    {
        // phase 1 only when the slack basis is infeasible
        std::size_t worst = 0;
        for (std::size_t i = 1; i < m_; ++i)
            if (rhs_[i] < rhs_[worst]) worst = i;

        double scale = 1.0;
        for (double b : rhs_) scale = std::max(scale, std::abs(b));

        if (m_ > 0 && rhs_[worst] < 0.0) {
            pivot(worst, artificial_);
            std::fill(cost_.begin(), cost_.end(), 0.0);
            cost_[artificial_] = -1.0;
            price();
            if (run(/*allow_artificial=*/true) == Outcome::unbounded) {
                throw Error(ErrorKind::numerical, "simplex: phase 1 reported unbounded");
            }
            if (objval_ < -1e-7 * scale) return {LpStatus::infeasible, 0.0, std::nullopt};
            drive_out_artificial();
        }

        std::fill(cost_.begin(), cost_.end(), 0.0);
        for (std::size_t j = 0; j < n_; ++j) {
            cost_[j] = objective_[j];
            cost_[n_ + j] = -objective_[j];
        }
        price();
        if (run(/*allow_artificial=*/false) == Outcome::unbounded) {
            return {LpStatus::unbounded, std::numeric_limits<double>::infinity(), std::nullopt};
        }

        Vector z(cols_, 0.0);
        for (std::size_t i = 0; i < m_; ++i) z[basis_[i]] = rhs_[i];
        Vector x(n_);
        double value = 0.0;
        for (std::size_t j = 0; j < n_; ++j) {
            x[j] = z[j] - z[n_ + j];
            value += objective_[j] * x[j];
        }
        return {LpStatus::optimal, value, std::move(x)};
    }

private:
    enum class Outcome { optimal, unbounded };

    double& at(std::size_t i, std::size_t j) { return t_[i * cols_ + j]; }

    void price()
    {
        d_ = cost_;
        objval_ = 0.0;
        for (std::size_t i = 0; i < m_; ++i) {
            const double cb = cost_[basis_[i]];
            if (cb == 0.0) continue;
            const double* row = &t_[i * cols_];
            for (std::size_t j = 0; j < cols_; ++j) d_[j] -= cb * row[j];
            objval_ += cb * rhs_[i];
        }
    }

    void pivot(std::size_t r, std::size_t e)
    {
        double* prow = &t_[r * cols_];
        const double inv = 1.0 / prow[e];
        for (std::size_t j = 0; j < cols_; ++j) prow[j] *= inv;
        rhs_[r] *= inv;
        prow[e] = 1.0;

        for (std::size_t i = 0; i < m_; ++i) {
            if (i == r) continue;
            double* row = &t_[i * cols_];
            const double f = row[e];
            if (f == 0.0) continue;
            for (std::size_t j = 0; j < cols_; ++j) row[j] -= f * prow[j];
            row[e] = 0.0;
            rhs_[i] -= f * rhs_[r];
            if (std::abs(rhs_[i]) < 1e-13) rhs_[i] = 0.0;
        }
        const double f = d_[e];
        if (f != 0.0) {
            for (std::size_t j = 0; j < cols_; ++j) d_[j] -= f * prow[j];
            d_[e] = 0.0;
            objval_ += f * rhs_[r];
        }
        basis_[r] = e;
    }

    Outcome run(bool allow_artificial)
    {
        std::size_t iterations = 0;
        int degenerate_run = 0;
        bool bland = false;
        for (;;) {
            std::size_t enter = cols_;
            double best = kReducedCostEps;
            for (std::size_t j = 0; j < cols_; ++j) {
                if (!allow_artificial && j == artificial_) continue;
                if (d_[j] > best) {
                    enter = j;
                    if (bland) break;
                    best = d_[j];
                }
            }
            if (enter == cols_) return Outcome::optimal;

            std::size_t leave = m_;
            double ratio = std::numeric_limits<double>::infinity();
            for (std::size_t i = 0; i < m_; ++i) {
                const double a = at(i, enter);
                if (a <= kPivotEps) continue;
                const double q = std::max(rhs_[i], 0.0) / a;
                if (leave == m_ || q < ratio - 1e-12 * (1.0 + ratio)) {
                    leave = i;
                    ratio = q;
                } else if (q <= ratio + 1e-12 * (1.0 + ratio)) {
                    const bool take = bland ? basis_[i] < basis_[leave] : a > at(leave, enter);
                    if (take) {
                        leave = i;
                        ratio = std::min(ratio, q);
                    }
                }
            }
            if (leave == m_) return Outcome::unbounded;

            pivot(leave, enter);
            if (ratio < kDegenerateStep) {
                if (++degenerate_run >= kDegenerateRunBeforeBland) bland = true;
            } else {
                degenerate_run = 0;
            }
            if (++iterations > cap_) {
                throw Error(ErrorKind::numerical,
                            "simplex: iteration cap of " + std::to_string(cap_) + " exceeded");
            }
        }
    }

    void drive_out_artificial()
    {
        for (std::size_t i = 0; i < m_; ++i) {
            if (basis_[i] != artificial_) continue;
            std::size_t best = cols_;
            double mag = kPivotEps;
            for (std::size_t j = 0; j < artificial_; ++j) {
                if (std::abs(at(i, j)) > mag) {
                    mag = std::abs(at(i, j));
                    best = j;
                }
            }
            if (best != cols_) pivot(i, best);
            // otherwise the row is redundant; the artificial stays basic at zero
        }
        for (std::size_t i = 0; i < m_; ++i) {
            if (basis_[i] != artificial_) at(i, artificial_) = 0.0;
        }
    }

    std::size_t m_;
    std::size_t n_;
    std::size_t cols_;
    std::size_t artificial_;
    std::vector<double> t_;
    std::vector<double> rhs_;
    std::vector<std::size_t> basis_;
    std::vector<double> cost_;
    std::vector<double> d_;
    double objval_ = 0.0;
    std::size_t cap_;
    Vector objective_;
};

}  // namespace

LpResult maximize(std::span<const double> c, const Polytope& P)
{
    if (c.size() != P.dim()) throw Error(ErrorKind::input, "maximize: objective dimension mismatch");
    Tableau tableau(c, P);
    return tableau.solve();
}

Polytope Rectangle::to_polytope() const
{
    Vector l(lo.begin(), lo.end());
    Vector h(hi.begin(), hi.end());
    return box_polytope(l, h);
}

RealBox real_bounds(const Polytope& P)
{
    const std::size_t n = P.dim();
    RealBox box{Vector(n), Vector(n)};
    Vector c(n, 0.0);
    for (std::size_t j = 0; j < n; ++j) {
        for (double sign : {1.0, -1.0}) {
            c[j] = sign;
            const LpResult res = maximize(c, P);
            if (res.status == LpStatus::infeasible) {
                throw Error(ErrorKind::infeasible, "polytope is infeasible");
            }
            if (res.status == LpStatus::unbounded) {
                throw Error(ErrorKind::unbounded,
                            "polytope is unbounded in coordinate x" + std::to_string(j + 1));
            }
            (sign > 0 ? box.hi[j] : box.lo[j]) = sign * res.value;
        }
        c[j] = 0.0;
    }
    return box;
}

Rectangle get_rect(const Polytope& P)
{
    const RealBox box = real_bounds(P);
    Rectangle R;
    for (std::size_t j = 0; j < P.dim(); ++j) {
        const double lo = std::ceil(box.lo[j] - 1e-7);
        const double hi = std::floor(box.hi[j] + 1e-7);
        if (lo > hi) {
            throw Error(ErrorKind::infeasible, "polytope contains no lattice points (empty range for x" +
                                                   std::to_string(j + 1) + ")");
        }
        if (std::abs(lo) > 9.0e15 || std::abs(hi) > 9.0e15) {
            throw Error(ErrorKind::input, "bounding box exceeds exactly representable integers");
        }
        R.lo.push_back(static_cast<std::int64_t>(lo));
        R.hi.push_back(static_cast<std::int64_t>(hi));
    }
    return R;
}

BigInt rect_lattice_count(const Rectangle& R)
{
    BigInt count = 1;
    for (std::size_t j = 0; j < R.dim(); ++j) count *= BigInt(R.hi[j] - R.lo[j] + 1);
    return count;
}

InnerBall chebyshev_ball(const Polytope& P)
{
    const std::size_t n = P.dim();
    Polytope lifted(n + 1);
    Vector row(n + 1);
    for (std::size_t i = 0; i < P.rows(); ++i) {
        auto a = P.a(i);
        double norm = 0.0;
        for (std::size_t j = 0; j < n; ++j) {
            row[j] = a[j];
            norm += a[j] * a[j];
        }
        row[n] = std::sqrt(norm);
        lifted.add_row(row, P.b(i));
    }
    Vector c(n + 1, 0.0);
    c[n] = 1.0;
    const LpResult res = maximize(c, lifted);
    if (res.status == LpStatus::infeasible) throw Error(ErrorKind::infeasible, "polytope is infeasible");
    if (res.status == LpStatus::unbounded) throw Error(ErrorKind::unbounded, "polytope is unbounded");
    InnerBall ball;
    ball.center.assign(res.argmax->begin(), res.argmax->begin() + static_cast<std::ptrdiff_t>(n));
    ball.radius = res.value;
    return ball;
}

}  // namespace latcount

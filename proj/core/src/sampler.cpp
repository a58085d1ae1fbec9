#include "latcount/sampler.hpp"

#include "latcount/error.hpp"
#include "latcount/lp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace latcount {

namespace {

constexpr double kParallelEps = 1e-12;
constexpr double kMinChord = 1e-12;
constexpr std::uint64_t kRefreshEvery = 64;

}  // namespace

Vector facet_shifts(const Polytope& P)
{
    Vector v(P.rows());
    for (std::size_t i = 0; i < P.rows(); ++i) {
        double l1 = 0.0;
        for (double a : P.a(i)) l1 += std::abs(a);
        v[i] = 0.5 * l1;
    }
    return v;
}

Vector facet_shifts_lp(const Polytope& P)
{
    const std::size_t n = P.dim();
    const Polytope cube = box_polytope(Vector(n, -0.5), Vector(n, 0.5));
    Vector v(P.rows());
    for (std::size_t i = 0; i < P.rows(); ++i) {
        const LpResult res = maximize(P.a(i), cube);
        if (res.status != LpStatus::optimal) throw Error(ErrorKind::numerical, "facet shift LP not optimal");
        v[i] = res.value;
    }
    return v;
}

ShiftedPolytope shift_facets(const Polytope& P, const RoundingOptions& rounding)
{
    ShiftedPolytope SP;
    SP.base = P;
    SP.shifts = facet_shifts(P);
    SP.enlarged = Polytope(P.dim());
    for (std::size_t i = 0; i < P.rows(); ++i) SP.enlarged.add_row(P.a(i), P.b(i) + SP.shifts[i]);
    Rounding r = round_body(SP.enlarged, rounding);
    SP.map = std::move(r.map);
    SP.weak_rounding = r.weak;
    SP.rounding_iterations = r.iterations;
    SP.transformed = transform_polytope(SP.map, SP.enlarged);
    return SP;
}

// ---------------------------------------------------------------------------

CoordinateWalker::CoordinateWalker(const Polytope& Q, std::span<const double> start)
    : Q_(&Q), n_(Q.dim()), m_(Q.rows()), columns_(Q.dim() * Q.rows()), x_(start.begin(), start.end()),
      slack_(Q.rows())
{
    if (start.size() != n_) throw Error(ErrorKind::input, "walker: start dimension mismatch");
    for (std::size_t i = 0; i < m_; ++i) {
        auto a = Q.a(i);
        for (std::size_t j = 0; j < n_; ++j) columns_[j * m_ + i] = a[j];
    }
    refresh();
}

void CoordinateWalker::refresh()
{
    for (std::size_t i = 0; i < m_; ++i) slack_[i] = Q_->b(i) - Q_->dot(i, x_);
}

bool CoordinateWalker::try_axis(std::size_t axis, Rng& rng)
{
    const double* col = &columns_[axis * m_];
    double lo = -std::numeric_limits<double>::infinity();
    double hi = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < m_; ++i) {
        const double a = col[i];
        const double s = slack_[i] > 0.0 ? slack_[i] : 0.0;
        if (a > kParallelEps) hi = std::min(hi, s / a);
        else if (a < -kParallelEps) lo = std::max(lo, s / a);
    }
    if (!std::isfinite(lo) || !std::isfinite(hi)) {
        throw Error(ErrorKind::unbounded, "hit-and-run: body is unbounded along x" + std::to_string(axis + 1));
    }
    if (hi - lo < kMinChord) return false;
    const double lambda = lo + (hi - lo) * rng.uniform01();
    x_[axis] += lambda;
    for (std::size_t i = 0; i < m_; ++i) slack_[i] -= col[i] * lambda;
    return true;
}

void CoordinateWalker::step(Rng& rng)
{
    for (std::size_t attempt = 0; attempt <= n_; ++attempt) {
        if (try_axis(static_cast<std::size_t>(rng.below(n_)), rng)) return;
    }
    throw Error(ErrorKind::degenerate, "hit-and-run: chord shorter than 1e-12 along every sampled axis");
}

void CoordinateWalker::steps(std::size_t count, Rng& rng)
{
    for (std::size_t k = 0; k < count; ++k) step(rng);
}

Chord axis_chord(const Polytope& Q, std::span<const double> p, std::size_t axis)
{
    Chord c{-std::numeric_limits<double>::infinity(), std::numeric_limits<double>::infinity()};
    for (std::size_t i = 0; i < Q.rows(); ++i) {
        const double a = Q.a(i)[axis];
        const double s = std::max(Q.b(i) - Q.dot(i, p), 0.0);
        if (a > kParallelEps) c.hi = std::min(c.hi, s / a);
        else if (a < -kParallelEps) c.lo = std::max(c.lo, s / a);
    }
    return c;
}

Vector hit_and_run_step(const Polytope& Q, std::span<const double> p, Rng& rng)
{
    CoordinateWalker walker(Q, p);
    walker.step(rng);
    auto pos = walker.position();
    return Vector(pos.begin(), pos.end());
}

Vector walk(const Polytope& Q, std::span<const double> p, std::size_t w, Rng& rng)
{
    if (w < 1) throw Error(ErrorKind::input, "walk: length must be at least 1");
    CoordinateWalker walker(Q, p);
    walker.steps(w, rng);
    auto pos = walker.position();
    return Vector(pos.begin(), pos.end());
}

SampleSet sample_lattice(const ShiftedPolytope& SP, std::size_t s, Rng& rng, std::span<const double> start,
                         const SampleOptions& options)
{
    if (s < 1) throw Error(ErrorKind::input, "sample_lattice: sample count must be at least 1");
    const std::size_t n = SP.base.dim();
    const Vector origin(n, 0.0);
    if (start.empty()) start = origin;
    if (start.size() != n) throw Error(ErrorKind::input, "sample_lattice: start dimension mismatch");
    if (!contains_real(SP.transformed, start, 1e-9)) {
        throw Error(ErrorKind::input, "sample_lattice: start point lies outside the rounded body");
    }

    const std::size_t w = options.walk_length ? options.walk_length : n;
    const std::uint64_t cap =
        options.max_attempts ? options.max_attempts : std::max<std::uint64_t>(100000, 10000ULL * s);

    SampleSet out;
    out.points.reserve(s);
    out.attempts_at_accept.reserve(s);
    CoordinateWalker walker(SP.transformed, start);
    Vector pulled(n);
    while (out.accepted < s) {
        if (out.attempts >= cap) {
            throw Error(ErrorKind::resource_cap,
                        "rejection cap exceeded: " + std::to_string(out.attempts) + " attempts, " +
                            std::to_string(out.accepted) + " of " + std::to_string(s) +
                            " samples accepted (count indistinguishable from zero or acceptance too low)");
        }
        walker.steps(w, rng);
        ++out.attempts;
        if (out.attempts % kRefreshEvery == 0) walker.refresh();
        apply_inv(SP.map, walker.position(), pulled);
        LatticePoint q = round_real(pulled);
        if (contains_lattice(SP.base, q)) {
            out.points.push_back(std::move(q));
            out.attempts_at_accept.push_back(out.attempts);
            ++out.accepted;
        }
    }
    return out;
}

}  // namespace latcount

namespace latcount {

void SampleSet::truncate(std::size_t k)
{
    if (k >= points.size()) return;
    points.resize(k);
    attempts_at_accept.resize(k);
    accepted = k;
    attempts = k ? attempts_at_accept.back() : 0;
}

}  // namespace latcount

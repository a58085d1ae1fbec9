#include "latcount/oracle.hpp"

#include "latcount/error.hpp"
#include "latcount/lp.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <future>
#include <limits>

namespace latcount {

namespace {

constexpr std::size_t kMaxPoints = 100000;
constexpr int kPropagationPasses = 3;

class Enumerator {
public:
    Enumerator(const Polytope& P, bool collect) : P_(P), n_(P.dim()), collect_(collect), point_{} {}

    void run(std::vector<std::int64_t> lo, std::vector<std::int64_t> hi)
    {
        point_.coords.assign(n_, 0);
        recurse(0, std::move(lo), std::move(hi));
    }

    std::uint64_t count() const noexcept { return count_; }
    std::vector<LatticePoint>& points() { return points_; }

private:
    // Tightens [lo_j, hi_j] for j >= depth from each row, with x_0..x_{depth-1} fixed.
    bool propagate(std::size_t depth, std::vector<std::int64_t>& lo, std::vector<std::int64_t>& hi) const
    {
        for (int pass = 0; pass < kPropagationPasses; ++pass) {
            bool changed = false;
            for (std::size_t i = 0; i < P_.rows(); ++i) {
                auto a = P_.a(i);
                const double b = P_.b(i);
                const double rhs = b + kMembershipTol * (1.0 + std::abs(b));
                double fixed = 0.0;
                for (std::size_t j = 0; j < depth; ++j) fixed += a[j] * static_cast<double>(point_.coords[j]);
                double min_rest = 0.0;
                for (std::size_t j = depth; j < n_; ++j) {
                    min_rest += a[j] > 0 ? a[j] * static_cast<double>(lo[j]) : a[j] * static_cast<double>(hi[j]);
                }
                const double room = rhs - fixed - min_rest;
                if (room < -1e-9 * (1.0 + std::abs(rhs))) return false;
                for (std::size_t j = depth; j < n_; ++j) {
                    if (a[j] == 0.0) continue;
                    const double own = a[j] > 0 ? a[j] * static_cast<double>(lo[j]) : a[j] * static_cast<double>(hi[j]);
                    const double limit = (room + own) / a[j];
                    // small outward band keeps float error from pruning feasible points
                    const double band = 1e-9 * (1.0 + std::abs(limit));
                    if (a[j] > 0) {
                        const double cap = std::floor(limit + band);
                        if (cap < static_cast<double>(hi[j])) {
                            hi[j] = static_cast<std::int64_t>(cap);
                            changed = true;
                        }
                    } else {
                        const double floor_ = std::ceil(limit - band);
                        if (floor_ > static_cast<double>(lo[j])) {
                            lo[j] = static_cast<std::int64_t>(floor_);
                            changed = true;
                        }
                    }
                    if (lo[j] > hi[j]) return false;
                }
            }
            if (!changed) break;
        }
        return true;
    }

    void recurse(std::size_t depth, std::vector<std::int64_t> lo, std::vector<std::int64_t> hi)
    {
        if (!propagate(depth, lo, hi)) return;
        if (depth + 1 == n_) {
            for (std::int64_t v = lo[depth]; v <= hi[depth]; ++v) {
                point_.coords[depth] = v;
                if (contains_lattice(P_, point_)) {
                    ++count_;
                    if (collect_ && points_.size() <= kMaxPoints) points_.push_back(point_);
                }
            }
            return;
        }
        for (std::int64_t v = lo[depth]; v <= hi[depth]; ++v) {
            point_.coords[depth] = v;
            auto l = lo;
            auto h = hi;
            l[depth] = h[depth] = v;
            recurse(depth + 1, std::move(l), std::move(h));
        }
    }

    const Polytope& P_;
    std::size_t n_;
    bool collect_;
    LatticePoint point_;
    std::uint64_t count_ = 0;
    std::vector<LatticePoint> points_;
};

}  // namespace

OracleResult exact_count(const Polytope& P, const OracleOptions& options)
{
    const Rectangle R = get_rect(P);
    OracleResult result;
    result.enumerated = rect_lattice_count(R);
    if (result.enumerated > options.limit) {
        throw Error(ErrorKind::resource_cap, "bounding box has " + result.enumerated.str() +
                                                 " points, above the enumeration limit " + options.limit.str());
    }

    // partition on the first coordinate; slices are merged in order
    const std::size_t threads = std::max<std::size_t>(1, options.threads);
    const std::int64_t first_lo = R.lo[0];
    const std::int64_t span = R.hi[0] - R.lo[0] + 1;
    const auto slices = static_cast<std::int64_t>(std::min<std::size_t>(threads, static_cast<std::size_t>(span)));

    std::vector<Enumerator> parts;
    parts.reserve(static_cast<std::size_t>(slices));
    for (std::int64_t k = 0; k < slices; ++k) parts.emplace_back(P, options.collect_points);

    auto run_slice = [&](std::int64_t k) {
        auto lo = R.lo;
        auto hi = R.hi;
        lo[0] = first_lo + span * k / slices;
        hi[0] = first_lo + span * (k + 1) / slices - 1;
        if (lo[0] <= hi[0]) parts[static_cast<std::size_t>(k)].run(lo, hi);
    };
    if (slices == 1) {
        run_slice(0);
    } else {
        std::vector<std::future<void>> jobs;
        for (std::int64_t k = 0; k < slices; ++k) jobs.push_back(std::async(std::launch::async, run_slice, k));
        for (auto& job : jobs) job.get();
    }

    std::uint64_t total = 0;
    for (const auto& part : parts) total += part.count();
    result.count = total;
    if (options.collect_points && total <= kMaxPoints) {
        std::vector<LatticePoint> pts;
        for (auto& part : parts) {
            auto& src = part.points();
            pts.insert(pts.end(), std::make_move_iterator(src.begin()), std::make_move_iterator(src.end()));
        }
        result.points = std::move(pts);
    }
    return result;
}

}  // namespace latcount

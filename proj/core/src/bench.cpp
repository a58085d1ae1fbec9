#include "latcount/bench.hpp"

#include "latcount/error.hpp"
#include "latcount/estimator.hpp"
#include "latcount/lp.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <future>
#include <ostream>
#include <sstream>

namespace latcount {

namespace {

constexpr std::size_t kMaxDraws = 100;
constexpr std::uint64_t kSmallBox = 1000000;

bool has_lattice_point(const Polytope& P)
{
    InnerBall ball;
    try {
        ball = chebyshev_ball(P);
    } catch (const Error& e) {
        if (e.kind() == ErrorKind::infeasible) return false;
        throw;
    }
    if (ball.radius < 0.0) return false;
    if (contains_lattice(P, round_real(ball.center))) return true;

    Rectangle R;
    try {
        R = get_rect(P);
    } catch (const Error& e) {
        if (e.kind() == ErrorKind::infeasible) return false;
        throw;
    }
    if (rect_lattice_count(R) > kSmallBox) return false;
    OracleOptions opts;
    opts.limit = kSmallBox;
    return exact_count(P, opts).count > 0;
}

}  // namespace

GeneratedPolytope gen_random(std::size_t m, std::size_t n, std::int64_t lambda, Rng& rng)
{
    if (m < 1 || n < 1 || lambda < 1) throw Error(ErrorKind::input, "gen_random: need m, n, lambda >= 1");
    const auto bound = static_cast<double>(lambda);
    Vector a(n);
    for (std::size_t draw = 0; draw < kMaxDraws; ++draw) {
        Polytope P(n);
        for (std::size_t i = 0; i < m; ++i) {
            do {
                for (auto& v : a) v = static_cast<double>(rng.integer(-10, 10));
            } while (std::all_of(a.begin(), a.end(), [](double v) { return v == 0.0; }));
            P.add_row(a, static_cast<double>(rng.integer(-lambda, lambda)));
        }
        std::fill(a.begin(), a.end(), 0.0);
        for (std::size_t j = 0; j < n; ++j) {
            a[j] = 1.0;
            P.add_row(a, bound);
            a[j] = -1.0;
            P.add_row(a, bound);
            a[j] = 0.0;
        }
        if (has_lattice_point(P)) return {std::move(P), draw};
    }
    throw Error(ErrorKind::resource_cap, "gen_random: 100 consecutive draws without a lattice point");
}

std::vector<double> random_orthogonal(std::size_t n, Rng& rng)
{
    using Mat = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
    const auto k = static_cast<Eigen::Index>(n);
    Mat G(k, k);
    for (Eigen::Index i = 0; i < k; ++i)
        for (Eigen::Index j = 0; j < k; ++j) G(i, j) = rng.normal();
    Eigen::HouseholderQR<Mat> qr(G);
    Mat Q = qr.householderQ();
    const Mat R = qr.matrixQR().triangularView<Eigen::Upper>();
    for (Eigen::Index j = 0; j < k; ++j)
        if (R(j, j) < 0.0) Q.col(j) *= -1.0;
    return std::vector<double>(Q.data(), Q.data() + Q.size());
}

Polytope gen_thin_rect(std::size_t n, double tau, Rng& rng, bool rotate)
{
    if (n < 2) throw Error(ErrorKind::input, "gen_thin_rect: need n >= 2");
    if (!(tau > 0.0)) throw Error(ErrorKind::input, "gen_thin_rect: tau must be positive");
    std::vector<double> Q(n * n, 0.0);
    if (rotate) {
        Q = random_orthogonal(n, rng);
    } else {
        for (std::size_t i = 0; i < n; ++i) Q[i * n + i] = 1.0;
    }
    // row e_j.x <= c in the unrotated frame becomes (Q e_j).y <= c
    Polytope P(n);
    Vector a(n);
    for (std::size_t j = 0; j < n; ++j) {
        const double bound = j == 0 ? 1000.0 : tau;
        for (double sign : {1.0, -1.0}) {
            for (std::size_t i = 0; i < n; ++i) a[i] = sign * Q[i * n + j];
            P.add_row(a, bound);
        }
    }
    return P;
}

std::vector<Instance> make_instances(const std::vector<FamilySpec>& families, std::uint64_t seed,
                                     const BigInt& max_exact, const OracleOptions& oracle)
{
    std::vector<Instance> out;
    Rng root(seed, 0);
    std::uint64_t draw = 0;
    for (std::size_t f = 0; f < families.size(); ++f) {
        const FamilySpec& spec = families[f];
        for (std::size_t k = 0; k < spec.count; ++k) {
            bool done = false;
            for (std::size_t attempt = 0; attempt < kMaxDraws && !done; ++attempt) {
                Rng rng = root.derive(draw++);
                Polytope P;
                std::ostringstream id;
                if (spec.family == "random") {
                    const std::size_t m = spec.m ? spec.m : spec.n;
                    P = gen_random(m, spec.n, spec.lambda, rng).polytope;
                    id << "random-m" << m << "-n" << spec.n << "-l" << spec.lambda << "-" << k;
                } else if (spec.family == "thinrect") {
                    P = gen_thin_rect(spec.n, spec.tau, rng);
                    id << "thinrect-n" << spec.n << "-t" << spec.tau << "-" << k;
                } else {
                    throw Error(ErrorKind::input, "unknown instance family '" + spec.family + "'");
                }
                OracleResult exact;
                try {
                    exact = exact_count(P, oracle);
                } catch (const Error& e) {
                    if (e.kind() == ErrorKind::resource_cap) continue;
                    throw;
                }
                if (exact.count == 0 || exact.count > max_exact) continue;
                out.push_back(Instance{id.str(), std::move(P), exact.count});
                done = true;
            }
            if (!done) {
                throw Error(ErrorKind::resource_cap, "could not draw an oracle-countable " + spec.family + " instance");
            }
        }
    }
    return out;
}

BoundReport bound_experiment(const std::vector<Instance>& instances, const RunConfig& cfg, std::size_t repeats,
                             std::size_t threads)
{
    BoundReport report;
    report.epsilon = cfg.epsilon;
    report.delta = cfg.delta;
    const auto t0 = std::chrono::steady_clock::now();
    const std::size_t total = instances.size() * repeats;
    report.runs.resize(total);

    auto run_one = [&](std::size_t idx) {
        const std::size_t inst = idx / repeats;
        const std::size_t run = idx % repeats;
        RunRecord& rec = report.runs[idx];
        rec.instance_id = instances[inst].id;
        rec.run_idx = run;
        rec.exact_count = instances[inst].exact;
        rec.seed = mix64(cfg.seed ^ mix64(inst * 1000003ULL + run));
        RunConfig c = cfg;
        c.seed = rec.seed;
        c.threads = 1;
        const auto start = std::chrono::steady_clock::now();
        try {
            const CountEstimate est = estimate(instances[inst].polytope, c);
            rec.estimate = est.count_as_double();
            rec.rel_error = (est.count / BigFloat(rec.exact_count)).convert_to<double>();
            rec.within_bound = rec.rel_error >= 1.0 - cfg.epsilon && rec.rel_error <= 1.0 + cfg.epsilon;
            rec.rounds = est.rounds;
            rec.total_samples = est.total_samples;
            rec.chain_length = est.chain_length;
        } catch (const Error& e) {
            rec.error = e.what();
        }
        rec.wall_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
    };

    const std::size_t workers = std::max<std::size_t>(1, std::min(threads, total));
    if (workers == 1) {
        for (std::size_t i = 0; i < total; ++i) run_one(i);
    } else {
        std::atomic<std::size_t> next{0};
        std::vector<std::future<void>> jobs;
        for (std::size_t w = 0; w < workers; ++w) {
            jobs.push_back(std::async(std::launch::async, [&] {
                for (std::size_t i = next++; i < total; i = next++) run_one(i);
            }));
        }
        for (auto& job : jobs) job.get();
    }

    for (std::size_t inst = 0; inst < instances.size(); ++inst) {
        InstanceSummary sum;
        sum.instance_id = instances[inst].id;
        for (std::size_t run = 0; run < repeats; ++run) {
            ++sum.runs;
            if (report.runs[inst * repeats + run].within_bound) ++sum.within;
        }
        report.within += sum.within;
        report.instances.push_back(std::move(sum));
    }
    report.total_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
    return report;
}

void write_csv(const BoundReport& report, std::ostream& out)
{
    out << "instance_id,seed,run_idx,exact_count,estimate,rel_error,within_bound,rounds,total_samples,chain_length,wall_ms\n";
    for (const auto& r : report.runs) {
        out << r.instance_id << ',' << r.seed << ',' << r.run_idx << ',' << r.exact_count << ','
            << r.estimate << ',' << r.rel_error << ',' << (r.within_bound ? 1 : 0) << ',' << r.rounds << ','
            << r.total_samples << ',' << r.chain_length << ',' << r.wall_ms << '\n';
    }
}

}  // namespace latcount

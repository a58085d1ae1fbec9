#include "latcount/estimator.hpp"

#include "latcount/error.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <future>

namespace latcount {

namespace {

constexpr std::uint64_t kChainStream = 11;
constexpr std::uint64_t kRoundStream = 12;
constexpr std::size_t kLogSpaceLevels = 30;
constexpr double kBoundBand = 1e-9;

bool inside_cut(const ChainLevel& level, const LatticePoint& p)
{
    return std::all_of(level.cut_rows.begin(), level.cut_rows.end(),
                       [&](const Halfspace& h) { return satisfies(h.a, h.b, p); });
}

struct Speculative {
    SampleSet samples;
    std::exception_ptr error;
};

}  // namespace

RatioStats ratio_stats(std::span<const std::uint8_t> inside, std::size_t N)
{
    if (N < 2) throw Error(ErrorKind::input, "ratio_stats: need at least two groups");
    if (inside.empty() || inside.size() % N != 0) {
        throw Error(ErrorKind::input, "ratio_stats: indivisible split of " + std::to_string(inside.size()) +
                                          " samples into " + std::to_string(N) + " groups");
    }
    const std::size_t size = inside.size() / N;
    RatioStats st;
    st.N = N;
    st.group_ratios.reserve(N);
    std::size_t hits = 0;
    for (std::size_t g = 0; g < N; ++g) {
        std::size_t h = 0;
        for (std::size_t k = g * size; k < (g + 1) * size; ++k) h += inside[k] ? 1 : 0;
        hits += h;
        st.group_ratios.push_back(static_cast<double>(h) / static_cast<double>(size));
    }
    st.r = static_cast<double>(hits) / static_cast<double>(inside.size());
    double ss = 0.0;
    for (double rij : st.group_ratios) ss += (rij - st.r) * (rij - st.r);
    const double dN = static_cast<double>(N);
    st.v = ss / (dN * (dN - 1.0));
    return st;
}

RatioStats ratio_stats(std::span<const LatticePoint> S, const Polytope& P_next, std::size_t N)
{
    std::vector<std::uint8_t> inside;
    inside.reserve(S.size());
    for (const auto& p : S) inside.push_back(contains_lattice(P_next, p) ? 1 : 0);
    return ratio_stats(inside, N);
}

StopDecision stopping_satisfied(std::span<const RatioStats> levels, double epsilon, double delta)
{
    StopDecision d;
    if (levels.empty()) return d;
    for (const auto& st : levels)
        if (!(st.r > 0.0)) return d;

    const double tolerance = delta * epsilon * epsilon;
    if (levels.size() <= kLogSpaceLevels) {
        double r = 1.0;
        double second = 1.0;
        for (const auto& st : levels) {
            r *= st.r;
            second *= st.v + st.r * st.r;
        }
        d.r = r;
        d.v = second - r * r;
        d.stop = d.v <= tolerance * r * r * (1.0 + kBoundBand);
        return d;
    }
    double log_r = 0.0;
    double log_rel = 0.0;
    for (const auto& st : levels) {
        log_r += std::log(st.r);
        log_rel += std::log1p(st.v / (st.r * st.r));
    }
    const double rel = std::expm1(log_rel);
    d.r = std::exp(log_r);
    d.v = d.r * d.r * rel;
    d.stop = rel <= tolerance * (1.0 + kBoundBand);
    return d;
}

CountEstimate estimate(const Polytope& P, const RunConfig& cfg)
{
    cfg.validate();
    const std::size_t s = cfg.samples_per_round();
    Rng root(cfg.seed, 0);
    Rng chain_rng = root.derive(kChainStream);
    // Construction needs at least 10*gamma samples per level even when the
    // round size is smaller (large epsilon).
    const std::size_t chain_s = std::max(s, 10 * cfg.gamma);
    Chain chain = subdivision(P, chain_s, cfg, chain_rng);
    const std::size_t l = chain.length();

    CountEstimate est;
    est.rect_count = chain.rect_count;
    est.chain_length = l;
    est.diagnostics.resize(l);
    for (std::size_t i = 0; i < l; ++i) {
        const ChainLevel& level = chain.levels[i];
        auto& diag = est.diagnostics[i];
        diag.attempts = level.samples.attempts;
        diag.accepted = level.samples.accepted - level.reused;
        diag.cut_rows = level.cut_rows.size();
        diag.disturbs = level.disturbs;
        diag.window_relaxed = level.window_relaxed;
        diag.weak_rounding = level.shifted->weak_rounding;
        diag.rounding_iterations = level.shifted->rounding_iterations;
        est.weak_rounding = est.weak_rounding || diag.weak_rounding;
        est.total_samples += diag.accepted;
    }

    SampleOptions sample_options;
    sample_options.walk_length = cfg.w;
    sample_options.max_attempts = cfg.max_attempts;

    const Rng round_root = root.derive(kRoundStream);
    auto stream_for = [&](std::size_t level, std::size_t round) {
        return round_root.derive(round).derive(level);
    };

    std::vector<std::vector<std::uint8_t>> inside(l);
    std::size_t N = 0;
    for (std::size_t round = 0; round < cfg.max_rounds; ++round) {
        N += cfg.gamma;

        std::vector<Speculative> spec;
        if (cfg.threads > 1) {
            // every level may need up to s fresh points; sample them all concurrently
            spec.resize(l);
            for (std::size_t start = 0; start < l; start += cfg.threads) {
                std::vector<std::future<void>> jobs;
                for (std::size_t i = start; i < std::min(l, start + cfg.threads); ++i) {
                    jobs.push_back(std::async(std::launch::async, [&, i] {
                        try {
                            Rng rng = stream_for(i, round);
                            spec[i].samples = sample_lattice(*chain.levels[i].shifted, s, rng, {}, sample_options);
                        } catch (...) {
                            spec[i].error = std::current_exception();
                        }
                    }));
                }
                for (auto& job : jobs) job.get();
            }
        }

        std::vector<LatticePoint> carried;
        for (std::size_t i = 0; i < l; ++i) {
            const ChainLevel& level = chain.levels[i];
            std::vector<LatticePoint> batch = std::move(carried);
            carried.clear();
            auto& diag = est.diagnostics[i];
            diag.reused += batch.size();
            const std::size_t need = s - std::min(s, batch.size());
            if (need > 0) {
                SampleSet fresh;
                if (cfg.threads > 1) {
                    if (spec[i].error) std::rethrow_exception(spec[i].error);
                    fresh = std::move(spec[i].samples);
                    fresh.truncate(need);
                } else {
                    Rng rng = stream_for(i, round);
                    fresh = sample_lattice(*level.shifted, need, rng, {}, sample_options);
                }
                diag.attempts += fresh.attempts;
                diag.accepted += fresh.accepted;
                est.total_samples += fresh.accepted;
                for (auto& p : fresh.points) batch.push_back(std::move(p));
            }
            batch.resize(s);
            for (auto& p : batch) {
                const bool in = inside_cut(level, p);
                inside[i].push_back(in ? 1 : 0);
                if (in && i + 1 < l) carried.push_back(p);
            }
        }

        est.levels.clear();
        for (std::size_t i = 0; i < l; ++i) est.levels.push_back(ratio_stats(inside[i], N));
        est.rounds = round + 1;
        est.groups = N;
        est.group_size = s / cfg.gamma;

        const StopDecision d = stopping_satisfied(est.levels, cfg.epsilon, cfg.delta);
        if (d.stop) {
            est.r = d.r;
            est.v = d.v;
            est.count = BigFloat(est.rect_count) * BigFloat(d.r);
            return est;
        }
    }
    throw Error(ErrorKind::resource_cap,
                "round cap of " + std::to_string(cfg.max_rounds) + " exceeded without meeting the stopping criterion");
}

}  // namespace latcount

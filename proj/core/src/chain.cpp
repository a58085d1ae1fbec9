#include "latcount/chain.hpp"

#include "latcount/error.hpp"

#include <algorithm>
#include <cmath>

namespace latcount {

namespace {

constexpr std::uint64_t kSampleStream = 1;
constexpr std::uint64_t kDisturbStream = 2;

bool inside_all(std::span<const Halfspace> H, const LatticePoint& p)
{
    return std::all_of(H.begin(), H.end(), [&](const Halfspace& h) { return satisfies(h.a, h.b, p); });
}

double dot(std::span<const double> a, const LatticePoint& p)
{
    double s = 0.0;
    for (std::size_t j = 0; j < a.size(); ++j) s += a[j] * static_cast<double>(p.coords[j]);
    return s;
}

std::size_t chain_cap(const BigInt& rect_count)
{
    const double log2_count = rect_count > 1 ? static_cast<double>(boost::multiprecision::msb(rect_count)) + 1.0 : 0.0;
    return 64 + static_cast<std::size_t>(2.0 * log2_count);
}

}  // namespace

std::optional<double> threshold_from_values(std::vector<double> values, std::size_t total, double b_lower,
                                            double r_min, double r_max, ThresholdCounter* counter)
{
    if (total == 0) throw Error(ErrorKind::input, "find_threshold: empty sample set");
    if (counter) {
        std::sort(values.begin(), values.end(), [counter](double x, double y) {
            ++counter->comparisons;
            return x < y;
        });
    } else {
        std::sort(values.begin(), values.end());
    }

    const double t = static_cast<double>(total);
    const auto need = static_cast<std::size_t>(std::max(0.0, std::ceil(r_min * t - 1e-9)));
    if (need > values.size()) return std::nullopt;

    double candidate = need == 0 ? b_lower : std::max(values[need - 1], b_lower);
    // kept fraction counts ties, which is what exposes jumps
    const auto kept = static_cast<std::size_t>(std::upper_bound(values.begin(), values.end(), candidate) - values.begin());
    if (static_cast<double>(kept) > r_max * t + 1e-9) return std::nullopt;
    return candidate;
}

std::optional<double> find_threshold(std::span<const LatticePoint> S, std::span<const Halfspace> H,
                                     std::span<const double> a, double b_lower, double r_min, double r_max)
{
    std::vector<double> values;
    values.reserve(S.size());
    for (const auto& p : S)
        if (inside_all(H, p)) values.push_back(dot(a, p));
    return threshold_from_values(std::move(values), S.size(), b_lower, r_min, r_max);
}

Vector disturb(std::span<const double> a, double mu, Rng& rng)
{
    if (!(mu > 0.0)) throw Error(ErrorKind::input, "disturb: mu must be positive");
    Vector out(a.size());
    for (int attempt = 0; attempt < 2; ++attempt) {
        for (std::size_t j = 0; j < a.size(); ++j) out[j] = rng.uniform(a[j] - mu, a[j] + mu);
        if (std::any_of(out.begin(), out.end(), [](double v) { return v != 0.0; })) return out;
    }
    throw Error(ErrorKind::numerical, "disturb: produced a zero vector twice");
}

Chain subdivision(const Polytope& P, std::size_t s, const RunConfig& cfg, Rng& rng)
{
    if (s < 1) throw Error(ErrorKind::input, "subdivision: s must be positive");
    if (s < 10 * cfg.gamma) {
        throw Error(ErrorKind::input, "subdivision: s must be at least 10*gamma");
    }
    Chain chain;
    chain.rect = get_rect(P);
    chain.rect_count = rect_lattice_count(chain.rect);
    chain.levels.push_back(ChainLevel{chain.rect.to_polytope(), {}, {}, 0, 0, false, std::nullopt});

    const std::size_t m = P.rows();
    const std::size_t cap = chain_cap(chain.rect_count);
    const double total = static_cast<double>(s);
    SampleOptions sample_options;
    sample_options.walk_length = cfg.w;
    sample_options.max_attempts = cfg.max_attempts;

    std::vector<LatticePoint> carried;
    std::size_t j = 0;
    while (j < m) {
        const std::size_t index = chain.levels.size() - 1;
        ChainLevel& level = chain.levels.back();
        level.shifted = shift_facets(level.polytope);

        // S_i: points of S_{i-1} inside P_i first, then fresh samples
        SampleSet S;
        S.points = std::move(carried);
        level.reused = S.points.size();
        S.accepted = S.points.size();
        S.attempts_at_accept.assign(S.points.size(), 0);
        if (S.points.size() < s) {
            Rng level_rng = rng.derive(kSampleStream).derive(index);
            SampleSet fresh = sample_lattice(*level.shifted, s - S.points.size(), level_rng, {}, sample_options);
            S.attempts = fresh.attempts;
            for (std::size_t k = 0; k < fresh.points.size(); ++k) {
                S.points.push_back(std::move(fresh.points[k]));
                S.attempts_at_accept.push_back(fresh.attempts_at_accept[k]);
            }
            S.accepted = S.points.size();
        }
        S.truncate(s);

        std::vector<Halfspace> H;
        std::vector<std::uint8_t> in_h(S.points.size(), 1);
        auto kept_with = [&](std::span<const double> a, double b) {
            std::size_t kept = 0;
            for (std::size_t k = 0; k < S.points.size(); ++k)
                if (in_h[k] && satisfies(a, b, S.points[k])) ++kept;
            return kept;
        };
        auto add_to_h = [&](Halfspace h) {
            for (std::size_t k = 0; k < S.points.size(); ++k)
                if (in_h[k] && !satisfies(h.a, h.b, S.points[k])) in_h[k] = 0;
            H.push_back(std::move(h));
        };

        // Step 1: absorb rows while the fraction stays above r_max
        while (j < m && static_cast<double>(kept_with(P.a(j), P.b(j))) / total > cfg.r_max) {
            add_to_h(P.row(j));
            ++j;
        }

        if (j < m) {
            if (static_cast<double>(kept_with(P.a(j), P.b(j))) / total >= cfg.r_min) {
                // Step 2
                add_to_h(P.row(j));
                ++j;
            } else {
                // Step 3: relax h_j to a parallel (or perturbed) cut; j stays
                Rng disturb_rng = rng.derive(kDisturbStream).derive(index);
                std::vector<double> values;
                std::optional<double> b_new;
                Vector a_new(P.a(j).begin(), P.a(j).end());
                for (std::size_t round = 0; round <= cfg.max_disturbs; ++round) {
                    double lower = P.b(j);
                    if (round > 0) {
                        ++level.disturbs;
                        a_new = disturb(P.a(j), cfg.mu, disturb_rng);
                        // the perturbed cut must keep all of P
                        const LpResult top = maximize(a_new, P);
                        if (top.status != LpStatus::optimal) {
                            throw Error(ErrorKind::numerical, "subdivision: LP bound for disturbed cut failed");
                        }
                        lower = top.value + 1e-9 * (1.0 + std::abs(top.value));
                    }
                    values.clear();
                    for (std::size_t k = 0; k < S.points.size(); ++k)
                        if (in_h[k]) values.push_back(dot(a_new, S.points[k]));
                    b_new = threshold_from_values(values, S.points.size(), lower, cfg.r_min, cfg.r_max);
                    if (b_new) break;
                }
                if (b_new) {
                    add_to_h(Halfspace{a_new, *b_new});
                } else {
                    // Too few distinct lattice points for any cut to land in
                    // [r_min, r_max]: drop the upper end of the window.
                    level.window_relaxed = true;
                    std::size_t in_count = 0;
                    values.clear();
                    for (std::size_t k = 0; k < S.points.size(); ++k) {
                        if (!in_h[k]) continue;
                        ++in_count;
                        values.push_back(dot(P.a(j), S.points[k]));
                    }
                    const auto loose = threshold_from_values(values, S.points.size(), P.b(j), cfg.r_min, 1.0);
                    if (loose && kept_with(P.a(j), *loose) < in_count) {
                        add_to_h(Halfspace{Vector(P.a(j).begin(), P.a(j).end()), *loose});
                    } else if (kept_with(P.a(j), P.b(j)) > 0) {
                        add_to_h(P.row(j));
                        ++j;
                    } else {
                        throw Error(ErrorKind::resource_cap,
                                    "disturb cap of " + std::to_string(cfg.max_disturbs) +
                                        " exceeded at chain level " + std::to_string(index));
                    }
                }
            }
        }

        Polytope next = level.polytope;
        for (const auto& h : H) next.add_row(h);
        for (std::size_t k = 0; k < S.points.size(); ++k)
            if (in_h[k]) carried.push_back(S.points[k]);
        level.cut_rows = std::move(H);
        level.samples = std::move(S);

        chain.levels.push_back(ChainLevel{std::move(next), {}, {}, 0, 0, false, std::nullopt});
        if (chain.length() > cap) {
            throw Error(ErrorKind::resource_cap, "chain length cap of " + std::to_string(cap) + " exceeded");
        }
    }
    return chain;
}

}  // namespace latcount

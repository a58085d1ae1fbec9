#pragma once

#include "latcount/bignum.hpp"
#include "latcount/config.hpp"
#include "latcount/model.hpp"
#include "latcount/oracle.hpp"
#include "latcount/rng.hpp"

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace latcount {

struct GeneratedPolytope {
    Polytope polytope;
    std::size_t redraws = 0;  // rejected draws before this one
};

/// {A x <= b, -lambda <= x_i <= lambda} with a_ij uniform in [-10,10] and
/// b_i uniform in [-lambda, lambda], integers. The m random rows come
/// first, then the 2n box rows. Draws are repeated (at most 100 times)
/// until a lattice point is confirmed, by rounding the Chebyshev center
/// or, for boxes up to 1e6 points, by enumeration.
GeneratedPolytope gen_random(std::size_t m, std::size_t n, std::int64_t lambda, Rng& rng);

/// {-1000 <= x_1 <= 1000, -tau <= x_i <= tau} under a Haar-random
/// rotation (QR of a Gaussian matrix, signs fixed by diag(R)).
Polytope gen_thin_rect(std::size_t n, double tau, Rng& rng, bool rotate = true);

/// The rotation gen_thin_rect would use for this rng state (row-major n*n).
std::vector<double> random_orthogonal(std::size_t n, Rng& rng);

struct Instance {
    std::string id;
    Polytope polytope;
    BigInt exact;
};

struct FamilySpec {
    std::string family;  // "random" or "thinrect"
    std::size_t m = 0;   // random: rows (0 selects n)
    std::size_t n = 3;
    std::int64_t lambda = 8;
    double tau = 1.0;
    std::size_t count = 1;
};

/// Generates instances and their oracle counts; draws whose exact count
/// is 0 or above `max_exact` are replaced by fresh draws.
std::vector<Instance> make_instances(const std::vector<FamilySpec>& families, std::uint64_t seed,
                                     const BigInt& max_exact, const OracleOptions& oracle = {});

struct RunRecord {
    std::string instance_id;
    std::uint64_t seed = 0;
    std::size_t run_idx = 0;
    BigInt exact_count;
    double estimate = 0.0;
    double rel_error = 0.0;  // estimate / exact
    bool within_bound = false;
    std::size_t rounds = 0;
    std::uint64_t total_samples = 0;
    std::size_t chain_length = 0;
    double wall_ms = 0.0;
    std::string error;  // non-empty when the run threw
};

struct InstanceSummary {
    std::string instance_id;
    std::size_t runs = 0;
    std::size_t within = 0;
    double frequency() const noexcept { return runs ? static_cast<double>(within) / static_cast<double>(runs) : 0.0; }
};

struct BoundReport {
    double epsilon = 0.0;
    double delta = 0.0;
    std::vector<RunRecord> runs;
    std::vector<InstanceSummary> instances;
    std::size_t within = 0;
    double total_ms = 0.0;

    double frequency() const noexcept
    {
        return runs.empty() ? 0.0 : static_cast<double>(within) / static_cast<double>(runs.size());
    }
};

/// Runs `estimate` `repeats` times per instance (seed derived from
/// cfg.seed, instance index and run index) and records whether
/// estimate/exact lies in [1 - eps, 1 + eps]. Runs are spread over
/// `threads` workers; records keep instance-major order.
BoundReport bound_experiment(const std::vector<Instance>& instances, const RunConfig& cfg, std::size_t repeats,
                             std::size_t threads = 1);

/// instance_id,seed,run_idx,exact_count,estimate,rel_error,within_bound,rounds,total_samples,chain_length,wall_ms
void write_csv(const BoundReport& report, std::ostream& out);

}  // namespace latcount

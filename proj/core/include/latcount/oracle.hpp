#pragma once

#include "latcount/bignum.hpp"
#include "latcount/model.hpp"

#include <optional>
#include <vector>

namespace latcount {

struct OracleResult {
    BigInt count;
    BigInt enumerated;  // size of the bounding rectangle
    std::optional<std::vector<LatticePoint>> points;
};

struct OracleOptions {
    BigInt limit = BigInt(100'000'000);  // refuse boxes larger than this
    bool collect_points = false;         // honoured only when count <= 1e5
    std::size_t threads = 1;
};

/// Exact |P cap Z^n| by enumerating the integer bounding box in
/// lexicographic order. Before each coordinate is branched on, interval
/// bound propagation over all rows tightens the ranges of the remaining
/// coordinates, so whole sub-boxes are skipped. Leaves are checked with
/// `contains_lattice`.
OracleResult exact_count(const Polytope& P, const OracleOptions& options = {});

}  // namespace latcount

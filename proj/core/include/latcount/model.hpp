#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace latcount {

using Vector = std::vector<double>;

/// One inequality a.x <= b.
struct Halfspace {
    Vector a;
    double b = 0.0;
};

/// Lattice point with exact integer coordinates.
struct LatticePoint {
    std::vector<std::int64_t> coords;

    std::size_t dim() const noexcept { return coords.size(); }
    friend bool operator==(const LatticePoint&, const LatticePoint&) = default;
    friend auto operator<=>(const LatticePoint&, const LatticePoint&) = default;
};

/// H-polytope {x in R^n : A x <= b}. Rows keep insertion order.
///
/// Coefficients are stored row-major in one buffer; `row(i)` returns a
/// view. A Polytope is immutable once built except through `add_row`,
/// which only ever appends.
class Polytope {
public:
    Polytope() = default;
    explicit Polytope(std::size_t dim);
    Polytope(std::size_t dim, const std::vector<Halfspace>& rows);

    std::size_t dim() const noexcept { return dim_; }
    std::size_t rows() const noexcept { return bounds_.size(); }
    bool empty() const noexcept { return bounds_.empty(); }

    std::span<const double> a(std::size_t i) const
    {
        return {coeffs_.data() + i * dim_, dim_};
    }
    double b(std::size_t i) const { return bounds_[i]; }
    Halfspace row(std::size_t i) const;

    std::span<const double> coefficients() const noexcept { return coeffs_; }
    std::span<const double> bounds() const noexcept { return bounds_; }

    /// Appends a row; throws on dimension mismatch or all-zero coefficients.
    void add_row(std::span<const double> a, double b);
    void add_row(const Halfspace& h) { add_row(h.a, h.b); }

    /// a_i . x
    double dot(std::size_t i, std::span<const double> x) const;
    double dot(std::size_t i, const LatticePoint& p) const;

    friend bool operator==(const Polytope&, const Polytope&) = default;

private:
    std::size_t dim_ = 0;
    std::vector<double> coeffs_;
    std::vector<double> bounds_;
};

/// Default relative membership band used by `contains_lattice`.
inline constexpr double kMembershipTol = 1e-9;

/// true iff a_i.x <= b_i + tol*(1+|b_i|) for every row.
bool contains_real(const Polytope& P, std::span<const double> x, double tol);

/// Lattice membership with the fixed 1e-9 relative band.
bool contains_lattice(const Polytope& P, const LatticePoint& p);

/// Row-wise lattice membership for a single halfspace.
bool satisfies(std::span<const double> a, double b, const LatticePoint& p);

/// Nearest integer per coordinate, halves away from zero.
LatticePoint round_real(std::span<const double> x);

Vector to_real(const LatticePoint& p);

enum class PolytopeFormat {
    native,        // "m n" then rows "a_1 .. a_n b"
    dense_matrix,  // "m n" then rows "b a_1 .. a_n"
};

/// Relational input: rows "a_1 .. a_n OP b" with OP in <=,<,>=,>,=.
/// Rewritten to <= rows. Integer strict rows are tightened by one;
/// other strict rows become non-strict with a warning.
struct ParsedConstraints {
    Polytope polytope;
    std::vector<std::string> warnings;
};

Polytope parse_polytope(std::string_view text, PolytopeFormat format = PolytopeFormat::native);
ParsedConstraints parse_constraints(std::string_view text);

/// Picks the relational parser when any row carries an operator token.
ParsedConstraints parse_any(std::string_view text);

/// Native format, full round-trip precision.
std::string serialize_polytope(const Polytope& P);

/// Reads a whole file; throws Error(input) when it cannot be opened.
std::string read_file(const std::string& path);

/// Axis-aligned box lo <= x <= hi as 2n rows (upper bound, then lower, per axis).
Polytope box_polytope(std::span<const double> lo, std::span<const double> hi);

}  // namespace latcount

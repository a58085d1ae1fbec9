#include "latcount/model.hpp"

#include "latcount/error.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

namespace latcount {

Polytope::Polytope(std::size_t dim) : dim_(dim)
{
    if (dim == 0) throw Error(ErrorKind::input, "polytope dimension must be positive");
}

Polytope::Polytope(std::size_t dim, const std::vector<Halfspace>& rows) : Polytope(dim)
{
    coeffs_.reserve(rows.size() * dim);
    bounds_.reserve(rows.size());
    for (const auto& h : rows) add_row(h);
}

Halfspace Polytope::row(std::size_t i) const
{
    auto view = a(i);
    return {Vector(view.begin(), view.end()), bounds_[i]};
}

void Polytope::add_row(std::span<const double> a, double b)
{
    if (a.size() != dim_) {
        throw Error(ErrorKind::input, "row has " + std::to_string(a.size()) +
                                          " coefficients, polytope dimension is " +
                                          std::to_string(dim_));
    }
    if (std::all_of(a.begin(), a.end(), [](double v) { return v == 0.0; })) {
        throw Error(ErrorKind::input, "zero coefficient row");
    }
    coeffs_.insert(coeffs_.end(), a.begin(), a.end());
    bounds_.push_back(b);
}

double Polytope::dot(std::size_t i, std::span<const double> x) const
{
    const double* row = coeffs_.data() + i * dim_;
    double s = 0.0;
    for (std::size_t j = 0; j < dim_; ++j) s += row[j] * x[j];
    return s;
}

double Polytope::dot(std::size_t i, const LatticePoint& p) const
{
    const double* row = coeffs_.data() + i * dim_;
    double s = 0.0;
    for (std::size_t j = 0; j < dim_; ++j) s += row[j] * static_cast<double>(p.coords[j]);
    return s;
}

bool contains_real(const Polytope& P, std::span<const double> x, double tol)
{
    if (x.size() != P.dim()) throw Error(ErrorKind::input, "contains_real: dimension mismatch");
    for (std::size_t i = 0; i < P.rows(); ++i) {
        const double b = P.b(i);
        if (P.dot(i, x) > b + tol * (1.0 + std::abs(b))) return false;
    }
    return true;
}

bool contains_lattice(const Polytope& P, const LatticePoint& p)
{
    if (p.dim() != P.dim()) throw Error(ErrorKind::input, "contains_lattice: dimension mismatch");
    for (std::size_t i = 0; i < P.rows(); ++i) {
        const double b = P.b(i);
        if (P.dot(i, p) > b + kMembershipTol * (1.0 + std::abs(b))) return false;
    }
    return true;
}

bool satisfies(std::span<const double> a, double b, const LatticePoint& p)
{
    double s = 0.0;
    for (std::size_t j = 0; j < a.size(); ++j) s += a[j] * static_cast<double>(p.coords[j]);
    return s <= b + kMembershipTol * (1.0 + std::abs(b));
}

LatticePoint round_real(std::span<const double> x)
{
    LatticePoint p;
    p.coords.reserve(x.size());
    // std::llround rounds halves away from zero
    for (double v : x) p.coords.push_back(std::llround(v));
    return p;
}

Vector to_real(const LatticePoint& p)
{
    return Vector(p.coords.begin(), p.coords.end());
}

Polytope box_polytope(std::span<const double> lo, std::span<const double> hi)
{
    if (lo.size() != hi.size()) throw Error(ErrorKind::input, "box_polytope: dimension mismatch");
    const std::size_t n = lo.size();
    Polytope P(n);
    Vector a(n, 0.0);
    for (std::size_t j = 0; j < n; ++j) {
        a[j] = 1.0;
        P.add_row(a, hi[j]);
        a[j] = -1.0;
        P.add_row(a, -lo[j]);
        a[j] = 0.0;
    }
    return P;
}

// ---------------------------------------------------------------------------
// Text input

namespace {

struct Line {
    std::size_t number;
    std::vector<std::string_view> tokens;
};

std::vector<Line> tokenize(std::string_view text)
{
    std::vector<Line> lines;
    std::size_t number = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        std::size_t end = text.find('\n', pos);
        if (end == std::string_view::npos) end = text.size();
        std::string_view raw = text.substr(pos, end - pos);
        ++number;
        pos = end + 1;

        if (auto hash = raw.find('#'); hash != std::string_view::npos) raw = raw.substr(0, hash);
        Line line{number, {}};
        std::size_t i = 0;
        while (i < raw.size()) {
            while (i < raw.size() && std::isspace(static_cast<unsigned char>(raw[i]))) ++i;
            std::size_t start = i;
            while (i < raw.size() && !std::isspace(static_cast<unsigned char>(raw[i]))) ++i;
            if (i > start) line.tokens.push_back(raw.substr(start, i - start));
        }
        if (!line.tokens.empty()) lines.push_back(std::move(line));
        if (end == text.size()) break;
    }
    return lines;
}

[[noreturn]] void syntax_error(std::size_t line, const std::string& msg)
{
    throw Error(ErrorKind::input, "line " + std::to_string(line) + ": " + msg);
}

double parse_real(std::string_view tok, std::size_t line)
{
    if (!tok.empty() && tok.front() == '+') tok.remove_prefix(1);
    double value = 0.0;
    auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), value);
    if (ec != std::errc{} || ptr != tok.data() + tok.size() || !std::isfinite(value)) {
        syntax_error(line, "invalid number '" + std::string(tok) + "'");
    }
    return value;
}

std::size_t parse_count(std::string_view tok, std::size_t line, const char* what)
{
    std::size_t value = 0;
    auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), value);
    if (ec != std::errc{} || ptr != tok.data() + tok.size()) {
        syntax_error(line, std::string("invalid ") + what + " '" + std::string(tok) + "'");
    }
    return value;
}

struct Header {
    std::size_t m;
    std::size_t n;
};

Header parse_header(const std::vector<Line>& lines)
{
    if (lines.empty()) throw Error(ErrorKind::input, "empty input: expected header 'm n'");
    const Line& h = lines.front();
    if (h.tokens.size() != 2) syntax_error(h.number, "header must be 'm n'");
    Header hdr{parse_count(h.tokens[0], h.number, "row count"),
               parse_count(h.tokens[1], h.number, "dimension")};
    if (hdr.m < 1) syntax_error(h.number, "row count must be at least 1");
    if (hdr.n < 1) syntax_error(h.number, "dimension must be at least 1");
    if (lines.size() - 1 < hdr.m) {
        throw Error(ErrorKind::input, "expected " + std::to_string(hdr.m) + " rows, found " +
                                          std::to_string(lines.size() - 1));
    }
    if (lines.size() - 1 > hdr.m) syntax_error(lines[hdr.m + 1].number, "unexpected extra row");
    return hdr;
}

void add_checked(Polytope& P, const Vector& a, double b, std::size_t line)
{
    if (std::all_of(a.begin(), a.end(), [](double v) { return v == 0.0; })) {
        throw Error(ErrorKind::input, "zero coefficient row at line " + std::to_string(line));
    }
    P.add_row(a, b);
}

bool is_integral(double v) { return std::isfinite(v) && std::floor(v) == v; }

enum class Op { le, lt, ge, gt, eq };

bool parse_op(std::string_view tok, Op& op)
{
    if (tok == "<=" || tok == "=<") op = Op::le;
    else if (tok == "<") op = Op::lt;
    else if (tok == ">=" || tok == "=>") op = Op::ge;
    else if (tok == ">") op = Op::gt;
    else if (tok == "=" || tok == "==") op = Op::eq;
    else return false;
    return true;
}

}  // namespace

Polytope parse_polytope(std::string_view text, PolytopeFormat format)
{
    const auto lines = tokenize(text);
    const Header hdr = parse_header(lines);
    Polytope P(hdr.n);
    Vector a(hdr.n);
    for (std::size_t r = 1; r <= hdr.m; ++r) {
        const Line& line = lines[r];
        if (line.tokens.size() != hdr.n + 1) {
            syntax_error(line.number, "dimension mismatch: expected " + std::to_string(hdr.n + 1) +
                                          " numbers, found " + std::to_string(line.tokens.size()));
        }
        const std::size_t offset = format == PolytopeFormat::native ? 0 : 1;
        for (std::size_t j = 0; j < hdr.n; ++j) a[j] = parse_real(line.tokens[j + offset], line.number);
        const double b = parse_real(format == PolytopeFormat::native ? line.tokens[hdr.n] : line.tokens[0],
                                    line.number);
        add_checked(P, a, b, line.number);
    }
    return P;
}

ParsedConstraints parse_constraints(std::string_view text)
{
    const auto lines = tokenize(text);
    const Header hdr = parse_header(lines);
    ParsedConstraints out{Polytope(hdr.n), {}};
    Vector a(hdr.n);
    Vector neg(hdr.n);
    for (std::size_t r = 1; r <= hdr.m; ++r) {
        const Line& line = lines[r];
        if (line.tokens.size() != hdr.n + 2) {
            syntax_error(line.number, "dimension mismatch: expected " + std::to_string(hdr.n) +
                                          " coefficients, an operator and a bound");
        }
        Op op{};
        if (!parse_op(line.tokens[hdr.n], op)) {
            syntax_error(line.number, "unknown operator '" + std::string(line.tokens[hdr.n]) + "'");
        }
        for (std::size_t j = 0; j < hdr.n; ++j) a[j] = parse_real(line.tokens[j], line.number);
        double b = parse_real(line.tokens[hdr.n + 1], line.number);

        if (op == Op::ge || op == Op::gt) {
            for (auto& v : a) v = -v;
            b = -b;
            op = op == Op::ge ? Op::le : Op::lt;
        }
        if (op == Op::lt) {
            if (std::all_of(a.begin(), a.end(), is_integral)) {
                // a.x is an integer on Z^n, so a.x < b  <=>  a.x <= ceil(b) - 1
                b = std::ceil(b) - 1.0;
            } else {
                out.warnings.push_back("line " + std::to_string(line.number) +
                                       ": strict inequality with non-integer coefficients treated as non-strict");
            }
            op = Op::le;
        }
        add_checked(out.polytope, a, b, line.number);
        if (op == Op::eq) {
            for (std::size_t j = 0; j < hdr.n; ++j) neg[j] = -a[j];
            out.polytope.add_row(neg, -b);
        }
    }
    return out;
}

ParsedConstraints parse_any(std::string_view text)
{
    for (const auto& line : tokenize(text)) {
        for (auto tok : line.tokens) {
            Op op{};
            if (parse_op(tok, op)) return parse_constraints(text);
        }
    }
    return {parse_polytope(text, PolytopeFormat::native), {}};
}

std::string serialize_polytope(const Polytope& P)
{
    std::string out = std::to_string(P.rows()) + " " + std::to_string(P.dim()) + "\n";
    char buf[64];
    auto put = [&](double v) {
        auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
        out.append(buf, ptr);
    };
    for (std::size_t i = 0; i < P.rows(); ++i) {
        for (double v : P.a(i)) {
            put(v);
            out.push_back(' ');
        }
        put(P.b(i));
        out.push_back('\n');
    }
    return out;
}

std::string read_file(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorKind::input, "cannot open '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace latcount

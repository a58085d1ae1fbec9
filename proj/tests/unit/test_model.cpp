#include "latcount/error.hpp"
#include "latcount/model.hpp"
#include "latcount/rng.hpp"

#include "support.hpp"

#include <doctest.h>

#include <cmath>
#include <string>

using namespace latcount;

TEST_CASE("parse native two rows")
{
    const Polytope P = parse_polytope("2 2\n1 0 5\n0 1 5");
    REQUIRE(P.dim() == 2);
    REQUIRE(P.rows() == 2);
    CHECK(P.a(0)[0] == 1);
    CHECK(P.a(0)[1] == 0);
    CHECK(P.b(0) == 5);
    CHECK(P.a(1)[1] == 1);
    CHECK(P.b(1) == 5);
}

TEST_CASE("parse smallest input")
{
    const Polytope P = parse_polytope("1 1\n1 1");
    CHECK(P.dim() == 1);
    CHECK(P.rows() == 1);
    CHECK(P.b(0) == 1);
}

TEST_CASE("parse rejects zero row with its line")
{
    try {
        parse_polytope("1 2\n0 0 3");
        FAIL("expected an error");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::input);
        CHECK(std::string(e.what()).find("zero coefficient row at line 2") != std::string::npos);
    }
}

TEST_CASE("parse errors name the line")
{
    try {
        parse_polytope("2 2\n1 0 5\n0 1\n");
        FAIL("expected an error");
    } catch (const Error& e) {
        CHECK(std::string(e.what()).find("line 3") != std::string::npos);
    }
    try {
        parse_polytope("1 2\n1 x 3\n");
        FAIL("expected an error");
    } catch (const Error& e) {
        CHECK(std::string(e.what()).find("line 2") != std::string::npos);
    }
    CHECK_THROWS_AS(parse_polytope(""), Error);
    CHECK_THROWS_AS(parse_polytope("3 2\n1 0 5\n0 1 5\n"), Error);
}

TEST_CASE("comments and CRLF")
{
    const Polytope P = parse_polytope("# header\r\n2 1 # m n\r\n1 4\r\n\r\n-1 0 # lower\r\n");
    CHECK(P.rows() == 2);
    CHECK(P.b(0) == 4);
    CHECK(P.a(1)[0] == -1);
}

TEST_CASE("dense matrix puts b first")
{
    const Polytope P = parse_polytope("2 2\n5 1 0\n7 0 1\n", PolytopeFormat::dense_matrix);
    CHECK(P.b(0) == 5);
    CHECK(P.a(0)[0] == 1);
    CHECK(P.b(1) == 7);
    CHECK(P.a(1)[1] == 1);
}

TEST_CASE("relational rows are rewritten to <=")
{
    const auto pc = parse_constraints("2 2\n1 1 >= 2\n1 -1 = 0\n");
    const Polytope& P = pc.polytope;
    REQUIRE(P.rows() == 3);
    CHECK(P.a(0)[0] == -1);
    CHECK(P.a(0)[1] == -1);
    CHECK(P.b(0) == -2);
    CHECK(P.a(1)[0] == 1);
    CHECK(P.a(1)[1] == -1);
    CHECK(P.b(1) == 0);
    CHECK(P.a(2)[0] == -1);
    CHECK(P.a(2)[1] == 1);
    CHECK(pc.warnings.empty());
}

TEST_CASE("strict rows over integers")
{
    const auto tight = parse_constraints("2 1\n1 < 3\n-1 > -2.5\n");
    REQUIRE(tight.polytope.rows() == 2);
    CHECK(tight.polytope.b(0) == 2);
    CHECK(tight.polytope.a(1)[0] == 1);
    CHECK(tight.polytope.b(1) == 2);  // x < 2.5 -> x <= 2
    CHECK(tight.warnings.empty());

    const auto loose = parse_constraints("1 1\n0.5 < 3\n");
    CHECK(loose.polytope.b(0) == 3);
    REQUIRE(loose.warnings.size() == 1);
    CHECK(loose.warnings[0].find("non-strict") != std::string::npos);
}

TEST_CASE("parse_any picks the right grammar")
{
    CHECK(parse_any("2 1\n1 4\n-1 0\n").polytope.rows() == 2);
    const auto rel = parse_any("1 1\n1 > -4\n");
    REQUIRE(rel.polytope.rows() == 1);
    CHECK(rel.polytope.a(0)[0] == -1);
    CHECK(rel.polytope.b(0) == 3);
}

TEST_CASE("contains_real")
{
    const Polytope P = parse_polytope("2 2\n1 0 5\n0 1 5");
    CHECK(contains_real(P, std::vector<double>{5, 5}, 0));
    CHECK_FALSE(contains_real(P, std::vector<double>{5.0000001, 0}, 1e-9));
    CHECK(contains_real(P, std::vector<double>{5 + 1e-12, 0}, 1e-9));
    CHECK_THROWS_AS(contains_real(P, std::vector<double>{1}, 0), Error);
}

TEST_CASE("contains_lattice")
{
    const Polytope P = parse_polytope("3 2\n1 1 2\n-1 0 0\n0 -1 0");
    CHECK(contains_lattice(P, LatticePoint{{1, 1}}));
    CHECK_FALSE(contains_lattice(P, LatticePoint{{2, 1}}));
    CHECK(contains_lattice(P, LatticePoint{{0, 0}}));
    CHECK_THROWS_AS(contains_lattice(P, LatticePoint{{0}}), Error);
}

TEST_CASE("round_real")
{
    CHECK(round_real(std::vector<double>{0.4, -0.4}) == LatticePoint{{0, 0}});
    CHECK(round_real(std::vector<double>{0.5, -0.5}) == LatticePoint{{1, -1}});
    CHECK(round_real(std::vector<double>{2.0, 3.0}) == LatticePoint{{2, 3}});
    CHECK(round_real(std::vector<double>{-2.5, 1e15 + 0.5}) == LatticePoint{{-3, 1000000000000001}});
}

TEST_CASE("round_real is idempotent")
{
    Rng rng(5);
    for (int t = 0; t < 1000; ++t) {
        std::vector<double> x{rng.uniform(-1e6, 1e6), rng.uniform(-3, 3), rng.uniform(-0.6, 0.6)};
        const LatticePoint p = round_real(x);
        CHECK(round_real(to_real(p)) == p);
    }
}

TEST_CASE("serialize then parse is the identity")
{
    Rng rng(9);
    for (int t = 0; t < 50; ++t) {
        const std::size_t n = 1 + rng.below(6), m = 1 + rng.below(10);
        Polytope P(n);
        std::vector<double> a(n);
        for (std::size_t i = 0; i < m; ++i) {
            for (auto& v : a) v = rng.normal() * std::pow(10.0, rng.integer(-5, 5));
            P.add_row(a, rng.normal() * 1e3);
        }
        CHECK(parse_polytope(serialize_polytope(P)) == P);
    }
}

TEST_CASE("real and lattice membership agree away from the band")
{
    Rng rng(11);
    for (int t = 0; t < 100; ++t) {
        Polytope P(3);
        std::vector<double> a(3);
        for (int i = 0; i < 6; ++i) {
            do {
                for (auto& v : a) v = static_cast<double>(rng.integer(-5, 5));
            } while (a[0] == 0 && a[1] == 0 && a[2] == 0);
            P.add_row(a, static_cast<double>(rng.integer(1, 20)) + 0.5);  // lattice dot products never hit b
        }
        for (int k = 0; k < 50; ++k) {
            LatticePoint p{{rng.integer(-5, 5), rng.integer(-5, 5), rng.integer(-5, 5)}};
            CHECK(contains_real(P, to_real(p), 0) == contains_lattice(P, p));
            CHECK(contains_lattice(P, p) == support::inside(P, p.coords));
        }
    }
}

TEST_CASE("add_row validates")
{
    Polytope P(2);
    CHECK_THROWS_AS(P.add_row(std::vector<double>{0, 0}, 1), Error);
    CHECK_THROWS_AS(P.add_row(std::vector<double>{1, 0, 0}, 1), Error);
    CHECK_THROWS_AS(Polytope(0), Error);
}

TEST_CASE("box_polytope row order")
{
    const std::vector<double> lo{0, -1}, hi{9, 2};
    const Polytope P = box_polytope(lo, hi);
    REQUIRE(P.rows() == 4);
    CHECK(P.a(0)[0] == 1);
    CHECK(P.b(0) == 9);
    CHECK(P.a(1)[0] == -1);
    CHECK(P.b(1) == 0);
    CHECK(P.a(3)[1] == -1);
    CHECK(P.b(3) == 1);
}

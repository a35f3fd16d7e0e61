#include "doctest.h"

#include "deform/linalg.hpp"

using namespace deform;

TEST_CASE("rank and kernel on a rectangular matrix")
{
    // [1 2 3; 2 4 6; 0 1 1] has rank 2, kernel dim 1.
    SparseMatrix m(3, 3);
    m.set(0, 0, rat(1));
    m.set(0, 1, rat(2));
    m.set(0, 2, rat(3));
    m.set(1, 0, rat(2));
    m.set(1, 1, rat(4));
    m.set(1, 2, rat(6));
    m.set(2, 1, rat(1));
    m.set(2, 2, rat(1));
    CHECK(rank(m) == 2);
    auto ker = kernel_basis(m);
    REQUIRE(ker.size() == 1);
    CHECK(sv_is_zero(m.apply(ker[0])));
}

TEST_CASE("solve returns exact rational solutions and detects inconsistency")
{
    SparseMatrix m(2, 2);
    m.set(0, 0, rat(2));
    m.set(0, 1, rat(1));
    m.set(1, 0, rat(4));
    m.set(1, 1, rat(3));
    SparseVector b{{0, rat(1)}, {1, rat(1)}};
    auto x = solve(m, b);
    REQUIRE(x.has_value());
    CHECK(sv_is_zero(sv_sub(m.apply(*x), b)));
    CHECK((*x)[0] == Rational(1));
    CHECK((*x)[1] == Rational(-1));

    SparseMatrix s(2, 1);
    s.set(0, 0, rat(1));
    s.set(1, 0, rat(2));
    SparseVector bad{{0, rat(1)}, {1, rat(3)}};
    CHECK(!solve(s, bad).has_value());
}

TEST_CASE("row_reduce is deterministic and fraction-exact")
{
    SparseMatrix m(2, 3);
    m.set(0, 0, Rational(1, 3));
    m.set(0, 2, rat(7));
    m.set(1, 1, Rational(2, 5));
    auto e1 = row_reduce(m);
    auto e2 = row_reduce(m);
    CHECK(e1.rank == 2);
    CHECK(e1.rref == e2.rref);
    CHECK(e1.pivot_cols == e2.pivot_cols);
    CHECK(e1.rref[0][2] == Rational(21));
}

TEST_CASE("rank_increase detects span membership")
{
    SparseMatrix a(3, 2);
    a.set(0, 0, rat(1));
    a.set(1, 1, rat(1));
    SparseMatrix inside(3, 1), outside(3, 1);
    inside.set(0, 0, rat(5));
    inside.set(1, 0, rat(-2));
    outside.set(2, 0, rat(1));
    CHECK(rank_increase(a, inside) == 0);
    CHECK(rank_increase(a, outside) == 1);
}

TEST_CASE("kernel of the empty matrix is the full space")
{
    SparseMatrix m(0, 4);
    CHECK(kernel_basis(m).size() == 4);
}

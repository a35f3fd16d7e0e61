#include "doctest.h"

#include "deform/errors.hpp"
#include "deform/graded.hpp"

using namespace deform;

namespace {

CochainComplex small_complex()
{
    // K^2 -> K^2 -> K with d0 = [[1,0],[0,0]] and d1 = 0:
    // H^0 = span{a1}, H^1 = span{b1}, H^2 = span{c0}.
    GradedVectorSpace v;
    v.components[0] = {"a0", "a1"};
    v.components[1] = {"b0", "b1"};
    v.components[2] = {"c0"};
    GradedMap d(v, v, 1);
    SparseMatrix d0(2, 2);
    d0.set(0, 0, rat(1));
    d.set_block(0, d0);
    return CochainComplex{v, d};
}

} // namespace

TEST_CASE("cohomology of a three-term complex")
{
    auto c = small_complex();
    REQUIRE(check_complex(c));
    auto h = cohomology(c);
    CHECK(h[0].dim == 1);
    CHECK(h[1].dim == 1);
    CHECK(h[2].dim == 1);
}

TEST_CASE("class_in_basis recognizes coboundaries and scales")
{
    auto c = small_complex();
    auto h = cohomology(c);
    // b0 = d(a0) is a coboundary.
    SparseVector cob{{0, rat(1)}};
    auto cls = class_in_basis(c, h, 1, cob);
    REQUIRE(cls.has_value());
    CHECK(sv_is_zero(*cls));
    // 3*c0 is closed with class 3 * [rep].
    SparseVector top{{0, rat(3)}};
    auto cls2 = class_in_basis(c, h, 2, top);
    REQUIRE(cls2.has_value());
    CHECK(!sv_is_zero(*cls2));
    // a0 is not closed.
    SparseVector open{{0, rat(1)}};
    CHECK(!class_in_basis(c, h, 0, open).has_value());
}

TEST_CASE("induced_map of the identity is the identity on H")
{
    auto c = small_complex();
    auto h = cohomology(c);
    GradedMap id(c.space, c.space, 0);
    for (int n : c.space.degrees())
        id.set_block(n, SparseMatrix::identity(c.space.dim(n)));
    CHECK(induced_map(c, h, c, h, id, 0) == SparseMatrix::identity(1));
    CHECK(induced_map(c, h, c, h, id, 2) == SparseMatrix::identity(1));
}

TEST_CASE("cohomology refuses d^2 != 0")
{
    GradedVectorSpace v;
    v.components[0] = {"x"};
    v.components[1] = {"y"};
    v.components[2] = {"z"};
    GradedMap d(v, v, 1);
    SparseMatrix one(1, 1);
    one.set(0, 0, rat(1));
    d.set_block(0, one);
    d.set_block(1, one);
    CochainComplex c{v, d};
    CHECK(!check_complex(c));
    CHECK_THROWS_AS(cohomology(c), NotAComplex);
}

TEST_CASE("GradedMap compose respects shifts")
{
    auto c = small_complex();
    auto dd = c.differential.compose(c.differential);
    CHECK(dd.degree_shift == 2);
    CHECK(dd.is_zero());
}

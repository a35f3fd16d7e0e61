#include "doctest.h"

#include "deform/artin.hpp"
#include "deform/errors.hpp"
#include "helpers.hpp"

using namespace deform;

namespace {

bool ne_eq(const NilpotentElement& a, const NilpotentElement& b)
{
    return ne_sub(a, b).is_zero();
}

// d = 0, [u,u] = 2v: every first-order deformation along u is obstructed.
DGLAPtr obstructed_dgla()
{
    auto L = std::make_shared<DGLA>();
    L->space.components[1] = {"u"};
    L->space.components[2] = {"v"};
    L->d = GradedMap(L->space, L->space, 1);
    L->set_bracket(1, 0, 1, 0, SparseVector{{0, rat(2)}});
    return L;
}

NilpotentElement random_ne(const DGLAPtr& L, const ArtinPtr& A, int degree, std::mt19937& rng)
{
    NilpotentElement out = ne_zero(L, A, degree);
    for (int i = 0; i < L->space.dim(degree); ++i)
        for (int m = 0; m < A->dim(); ++m)
            out = ne_add(out, ne_term(L, A, degree, i, m, random_rat(rng)));
    return out;
}

} // namespace

TEST_CASE("shipped Artin algebras validate")
{
    CHECK(validate_artin(*make_artin(ArtinKind::dual_numbers)).ok());
    CHECK(validate_artin(*make_artin(ArtinKind::truncated_poly, 4)).ok());
    CHECK(validate_artin(*make_artin(ArtinKind::truncated_two_vars, 3)).ok());
}

TEST_CASE("primary obstruction: nonzero class, no second-order lift")
{
    auto L = obstructed_dgla();
    REQUIRE(validate_dgla(*L).ok());
    auto A = make_artin(ArtinKind::dual_numbers);
    auto x1 = ne_from_element(L, A, L->basis_element(1, 0), 0);
    CHECK(mc_residual(x1).is_zero()); // eps^2 = 0 kills the quadratic term
    auto ob = primary_obstruction(x1);
    CHECK(!ob.vanishes);
    CHECK(!sv_is_zero(ob.cohomology_class));
    CHECK(!ob.second_order_lift.has_value());
    CHECK(first_order_classes(L).dim == 1);
}

TEST_CASE("unobstructed direction lifts to second order")
{
    auto L = make_three_term_end_dgla();
    auto A = make_artin(ArtinKind::dual_numbers);
    // z: V^1 -> V^2 hitting the column killed by sigma_0, so dz = 0 and z.z = 0.
    Element z = L->basis_element(1, L->space.index_of(1, "H12_01"));
    auto x1 = ne_from_element(L, A, z, 0);
    auto ob = primary_obstruction(x1);
    CHECK(ob.vanishes);
    CHECK(ob.second_order_lift.has_value());
}

TEST_CASE("gauge preserves Maurer-Cartan and composes through BCH")
{
    auto L = make_three_term_end_dgla();
    auto A = make_artin(ArtinKind::truncated_poly, 3);
    std::mt19937 rng(7);
    Element z = L->basis_element(1, L->space.index_of(1, "H12_01"));
    auto x = ne_from_element(L, A, z, 0); // z (x) t
    REQUIRE(mc_residual(x).is_zero());
    for (int trial = 0; trial < 10; ++trial) {
        auto a = random_ne(L, A, 0, rng);
        auto b = random_ne(L, A, 0, rng);
        auto y = gauge(a, x);
        CHECK(mc_residual(y).is_zero());
        CHECK(ne_eq(gauge(a, gauge(b, x)), gauge(bch(a, b), x)));
    }
}

TEST_CASE("BCH is associative and inverts")
{
    auto L = make_three_term_end_dgla();
    auto A = make_artin(ArtinKind::truncated_poly, 4);
    std::mt19937 rng(11);
    for (int trial = 0; trial < 10; ++trial) {
        auto a = random_ne(L, A, 0, rng);
        auto b = random_ne(L, A, 0, rng);
        auto c = random_ne(L, A, 0, rng);
        CHECK(ne_eq(bch(bch(a, b), c), bch(a, bch(b, c))));
        CHECK(bch(a, ne_scale(rat(-1), a)).is_zero());
    }
}

TEST_CASE("gauge_equivalent recovers a witness and re-verifies it")
{
    auto L = make_three_term_end_dgla();
    auto A = make_artin(ArtinKind::truncated_poly, 3);
    std::mt19937 rng(3);
    Element z = L->basis_element(1, L->space.index_of(1, "H12_01"));
    auto x = ne_from_element(L, A, z, 0);
    auto a = random_ne(L, A, 0, rng);
    auto y = gauge(a, x);
    auto w = gauge_equivalent(x, y);
    REQUIRE(w.has_value());
    CHECK(ne_eq(gauge(*w, x), y));
}

TEST_CASE("gauge_equivalent returns nullopt across distinct classes")
{
    // Abelian with d = 0: the gauge action is trivial, so eps*u and 2*eps*u
    // are inequivalent.
    GradedVectorSpace v;
    v.components[0] = {"w"};
    v.components[1] = {"u"};
    auto L = make_abelian_dgla(v, GradedMap(v, v, 1));
    auto A = make_artin(ArtinKind::dual_numbers);
    auto x = ne_from_element(L, A, L->basis_element(1, 0), 0);
    auto y = ne_scale(rat(2), x);
    CHECK(!gauge_equivalent(x, y).has_value());
    CHECK(gauge_equivalent(x, x).has_value());
}

TEST_CASE("irrelevant stabilizer fixes the deformation")
{
    // Abelian span{u_-1, w_0, z_1} with d(u) = w.
    GradedVectorSpace v;
    v.components[-1] = {"u"};
    v.components[0] = {"w"};
    v.components[1] = {"z"};
    GradedMap d(v, v, 1);
    SparseMatrix one(1, 1);
    one.set(0, 0, rat(1));
    d.set_block(-1, one);
    auto L = make_abelian_dgla(v, d);
    auto A = make_artin(ArtinKind::dual_numbers);
    auto x = ne_from_element(L, A, L->basis_element(1, 0), 0);
    auto u = ne_from_element(L, A, L->basis_element(-1, 0), 0);
    auto a = irrelevant_stabilizer(x, u);
    CHECK(ne_eq(a, ne_from_element(L, A, L->basis_element(0, 0), 0)));
    CHECK(ne_eq(gauge(a, x), x));
}

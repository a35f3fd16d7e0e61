#include "doctest.h"

#include "deform/polyform.hpp"
#include "helpers.hpp"

using namespace deform;

namespace {

PolyFormElement random_poly(const DGLAPtr& L, int degree, std::mt19937& rng)
{
    PolyFormElement out{L, degree, {}, {}};
    for (int k = 0; k <= 2; ++k) {
        Element t{degree, {}};
        Element dt{degree - 1, {}};
        for (int i = 0; i < L->space.dim(degree); ++i)
            t.c[i] = random_rat(rng);
        for (int i = 0; i < L->space.dim(degree - 1); ++i)
            dt.c[i] = random_rat(rng);
        out = poly_add(out, poly_t_term(L, k, t));
        out = poly_add(out, poly_dt_term(L, k, dt));
    }
    return out;
}

bool poly_eq(const PolyFormElement& a, const PolyFormElement& b)
{
    return poly_add(a, poly_scale(rat(-1), b)).is_zero();
}

} // namespace

TEST_CASE("Koszul sign makes d^2 = 0 on L[t,dt]")
{
    auto L = make_three_term_end_dgla();
    std::mt19937 rng(23);
    for (int deg = 0; deg <= 2; ++deg)
        for (int trial = 0; trial < 5; ++trial) {
            auto x = random_poly(L, deg, rng);
            CHECK(poly_d(poly_d(x)).is_zero());
        }
}

TEST_CASE("poly_d is a derivation for poly_bracket")
{
    auto L = make_three_term_end_dgla();
    std::mt19937 rng(29);
    for (int trial = 0; trial < 5; ++trial) {
        auto x = random_poly(L, 1, rng);
        auto y = random_poly(L, 1, rng);
        auto lhs = poly_d(poly_bracket(x, y));
        auto rhs = poly_add(poly_bracket(poly_d(x), y),
                            poly_scale(rat(-1), poly_bracket(x, poly_d(y))));
        CHECK(poly_eq(lhs, rhs));
    }
}

TEST_CASE("poly_eval commutes with d at dt = 0 data")
{
    auto L = make_three_term_end_dgla();
    Element z = L->basis_element(1, 0);
    auto x = poly_t_term(L, 2, z); // z t^2
    CHECK(el_sub(poly_eval(x, rat(3)), el_scale(rat(9), z)).is_zero());
    // eval of d picks up only the t-part of dx.
    auto dx = poly_d(x);
    CHECK(el_sub(poly_eval(dx, rat(1)), L->diff(z)).is_zero());
}

TEST_CASE("homotopy fibre boundary conditions")
{
    auto L = make_three_term_end_dgla();
    auto id = identity_morphism(L);
    Element a = L->basis_element(0, 0);
    // constant path: m(t) = a, endpoints h(l) = g(n) = a.
    HtpyFiberElement good{a, a, poly_constant(L, a)};
    CHECK(htpy_fiber_check(id, id, good));
    // linear path a t fails at t = 0 against l = a.
    HtpyFiberElement bad{a, a, poly_t_term(L, 1, a)};
    CHECK(!htpy_fiber_check(id, id, bad));
    // but matches l = 0, n = a.
    HtpyFiberElement fixed{L->zero(0), a, poly_t_term(L, 1, a)};
    CHECK(htpy_fiber_check(id, id, fixed));
}

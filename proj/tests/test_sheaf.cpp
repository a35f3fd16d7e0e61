#include "doctest.h"

#include "deform/errors.hpp"
#include "deform/sheaf.hpp"

using namespace deform;

TEST_CASE("line bundle cohomology on P^1 matches the closed form")
{
    auto cover = make_p1_cover(6);
    for (int d = -4; d <= 4; ++d) {
        auto e = make_line_bundle(d, cover);
        REQUIRE(validate_sheaf(e).ok());
        auto h = cech_cohomology(e);
        CHECK(h.h0 == std::max(d + 1, 0));
        CHECK(h.h1 == std::max(-d - 1, 0));
        CHECK(h.stable);
    }
}

TEST_CASE("global sections of O(2) are 1, z, z^2 with matching chart data")
{
    auto e = make_line_bundle(2, make_p1_cover(4));
    auto secs = global_sections(e);
    REQUIRE(secs.size() == 3);
    for (const auto& s : secs) {
        // s0 = g01 s1 = z^2 s1
        auto lhs = s.s0[0];
        auto rhs = lp_mul(lp_monomial(2), s.s1[0]);
        CHECK(sv_is_zero(sv_sub(lhs, rhs)));
    }
}

TEST_CASE("hom and end sheaves twist correctly")
{
    auto cover = make_p1_cover(5);
    auto f = make_line_bundle(1, cover);
    auto g = make_line_bundle(-2, cover);
    auto hom = hom_sheaf(f, g); // = O(-3)
    auto h = cech_cohomology(hom);
    CHECK(h.h0 == 0);
    CHECK(h.h1 == 2);
    auto endo = end_sheaf(sheaf_direct_sum(f, g)); // h0(End) = 2 + h0(O(3)) = 6
    auto he = cech_cohomology(endo);
    CHECK(he.h0 == 6);
    CHECK(he.h1 == 2); // h1(O(-3))
}

TEST_CASE("direct sum adds cohomology")
{
    auto cover = make_p1_cover(4);
    auto e = sheaf_direct_sum(make_line_bundle(0, cover), make_line_bundle(-2, cover));
    auto h = cech_cohomology(e);
    CHECK(h.h0 == 1);
    CHECK(h.h1 == 1);
}

TEST_CASE("encode/decode round-trips kept sections and rejects out-of-window data")
{
    auto e = make_line_bundle(1, make_p1_cover(3));
    auto m = cech_model(e, 3);
    RingMatrix s = rm_zero(1, 1);
    s[0][0] = lp_monomial(1, rat(5));
    auto v = encode_section(m.basis[2], 1, s);
    REQUIRE(v.has_value());
    auto back = decode_section(m.basis[2], 1, 1, *v);
    CHECK(sv_is_zero(sv_sub(back[0][0], s[0][0])));
    RingMatrix far = rm_zero(1, 1);
    far[0][0] = lp_monomial(9);
    CHECK(!encode_section(m.basis[2], 1, far).has_value());
}

TEST_CASE("sheaf morphism compatibility is checked on the overlap")
{
    auto cover = make_p1_cover(4);
    SheafMorphismPresentation ok{make_line_bundle(0, cover), make_line_bundle(1, cover),
                                 rm_zero(1, 1), rm_zero(1, 1)};
    ok.a0[0][0] = lp_monomial(0);     // a0 = 1
    ok.a1[0][0] = lp_monomial(-1);    // a1 = z^{-1}: a0 g01^F = g01^G a1
    CHECK(validate_sheaf_morphism(ok).ok());
    SheafMorphismPresentation bad = ok;
    bad.a1[0][0] = lp_monomial(0);
    CHECK(!validate_sheaf_morphism(bad).ok());
}

TEST_CASE("cup cochain pairs a deformation direction with a section")
{
    GlobalSection s{{lp_monomial(1)}, {lp_monomial(0)}}; // z in H^0(O(1))
    RingMatrix a01 = rm_zero(1, 1);
    a01[0][0] = lp_monomial(-1); // End(O(1)) overlap direction z^{-1}
    auto cup = cup_cochain(a01, s);
    REQUIRE(cup.size() == 1);
    CHECK(sv_is_zero(sv_sub(cup[0], lp_monomial(0))));
}

TEST_CASE("End sc dgLa validates and totalizes to the Cech dimensions")
{
    auto e = sheaf_direct_sum(make_line_bundle(0, make_p1_cover(4)),
                              make_line_bundle(-2, make_p1_cover(4)));
    auto sc = build_end_sc(e, 4);
    auto rep = validate_scdgla(sc.sc);
    CHECK(rep.ok());
    auto t = total_complex(sc.sc);
    auto h = cohomology(t);
    auto dims = cech_dims(end_sheaf(e), 4);
    CHECK(h[0].dim == dims.first);
    CHECK(h[1].dim == dims.second);
}

TEST_CASE("coherent systems demand independent gluing sections")
{
    auto e = make_line_bundle(1, make_p1_cover(4));
    auto secs = global_sections(e);
    REQUIRE(secs.size() == 2);
    CHECK(validate_coherent_system(CoherentSystem{e, secs}).ok());
    CHECK(!validate_coherent_system(CoherentSystem{e, {secs[0], secs[0]}}).ok());
}

TEST_CASE("graph subalgebra of a morphism has the kernel dimension")
{
    auto cover = make_p1_cover(4);
    SheafMorphismPresentation alpha{make_line_bundle(0, cover), make_line_bundle(1, cover),
                                    rm_zero(1, 1), rm_zero(1, 1)};
    alpha.a0[0][0] = lp_monomial(0);
    alpha.a1[0][0] = lp_monomial(-1);
    auto gr = graph_subalgebra_L(alpha, 4);
    // L(alpha) = ker of a surjection End(F+G) -> Hom(F,G) on each simplex.
    for (int lev = 0; lev < 3; ++lev) {
        int amb = gr.ambient.basis[lev].dim();
        CHECK(static_cast<int>(gr.basis[lev].size()) < amb);
        CHECK(!gr.basis[lev].empty());
    }
}

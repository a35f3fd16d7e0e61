#include "deform/pipelines.hpp"

#include <algorithm>

#include "deform/errors.hpp"

namespace deform {

namespace {

int hdim(const std::map<int, CohomologyDegree>& h, int n)
{
    auto it = h.find(n);
    return it == h.end() ? 0 : it->second.dim;
}

const std::vector<SparseVector>& hreps(const std::map<int, CohomologyDegree>& h, int n)
{
    static const std::vector<SparseVector> empty;
    auto it = h.find(n);
    return it == h.end() ? empty : it->second.representatives;
}

SequenceNode make_node(const std::string& name, int dim, const SparseMatrix& in,
                       const SparseMatrix& out)
{
    SequenceNode n;
    n.name = name;
    n.dim = dim;
    n.rank_in = rank(in);
    n.ker_out = dim - rank(out);
    n.composite_zero = (out * in).is_zero();
    return n;
}

bool maps_equal(const GradedMap& a, const GradedMap& b)
{
    return (a + b.scaled(rat(-1))).is_zero();
}

// Everything the cone-model pipelines share: total complexes of L, N, M,
// the chain maps h and g, the cone, the coker-h model and its maps, and the
// cohomologies with representatives.
struct MorphismCore {
    MorphismModel mm;
    TotalComplex tL, tN, tM;
    GradedMap h_tot, g_tot;
    CochainComplex cone;
    GradedMap pig_map, cembed_map;
    std::map<int, CohomologyDegree> hC, hN, hK;
};

MorphismCore make_core(const SheafMorphismPresentation& alpha, int D)
{
    MorphismCore c;
    c.mm = build_morphism_model(alpha, D);
    c.tL = total_complex_full(c.mm.scL);
    c.tN = total_complex_full(c.mm.scN);
    c.tM = total_complex_full(c.mm.scM);
    c.h_tot = total_map(c.mm.scL, c.tL, c.mm.scM, c.tM, c.mm.h_levels);
    c.g_tot = total_map(c.mm.scN, c.tN, c.mm.scM, c.tM, c.mm.g_levels);
    if (!maps_equal(c.tM.cx.differential.compose(c.h_tot), c.h_tot.compose(c.tL.cx.differential)))
        throw InternalCheckFailure("h is not a chain map on total complexes");
    if (!maps_equal(c.tM.cx.differential.compose(c.g_tot), c.g_tot.compose(c.tN.cx.differential)))
        throw InternalCheckFailure("g is not a chain map on total complexes");
    c.cone = mapping_cone(c.tL.cx, c.tN.cx, c.tM.cx, c.h_tot, c.g_tot);
    if (!check_complex(c.cone))
        throw InternalCheckFailure("cone differential does not square to zero");

    c.pig_map = GradedMap(c.tN.cx.space, c.mm.hom_complex.space, 0);
    if (c.tN.cx.space.dim(0) > 0 || c.mm.hom_complex.space.dim(0) > 0)
        c.pig_map.set_block(0, c.mm.pig[0]);
    if (c.tN.cx.space.dim(1) > 0 || c.mm.hom_complex.space.dim(1) > 0)
        c.pig_map.set_block(1, c.mm.pig[1]);
    if (!maps_equal(c.mm.hom_complex.differential.compose(c.pig_map),
                    c.pig_map.compose(c.tN.cx.differential)))
        throw InternalCheckFailure("pi.g is not a chain map");

    c.cembed_map = GradedMap(c.mm.hom_complex.space, c.tM.cx.space, 0);
    if (c.mm.hom_complex.space.dim(0) > 0 || c.tM.cx.space.dim(0) > 0)
        c.cembed_map.set_block(0, c.mm.cembed[0]);
    if (c.mm.hom_complex.space.dim(1) > 0 || c.tM.cx.space.dim(1) > 0)
        c.cembed_map.set_block(1, c.mm.cembed[1]);
    if (!maps_equal(c.tM.cx.differential.compose(c.cembed_map),
                    c.cembed_map.compose(c.mm.hom_complex.differential)))
        throw InternalCheckFailure("c-embedding is not a chain map");

    c.hC = cohomology(c.cone);
    c.hN = cohomology(c.tN.cx);
    c.hK = cohomology(c.mm.hom_complex);
    return c;
}

// Projection cone -> Tot N, a degree-0 chain map.
GradedMap cone_to_n(const MorphismCore& c)
{
    GradedMap p(c.cone.space, c.tN.cx.space, 0);
    for (int n : c.cone.space.degrees()) {
        SparseMatrix blk(c.tN.cx.space.dim(n), c.cone.space.dim(n));
        blk.insert_block(0, c.tL.cx.space.dim(n), SparseMatrix::identity(c.tN.cx.space.dim(n)));
        p.set_block(n, std::move(blk));
    }
    return p;
}

// Connecting construction: a coker-h cocycle q in degree p lifts to
// m = c(q) in M; dm lies in the image of the injective h, and
// (l', 0, m) with h(l') = dm is a cone cocycle in degree p + 1.
SparseVector connecting_class(const MorphismCore& c, int p, const SparseVector& q)
{
    if (!c.mm.hom_complex.differential.block(p).apply(q).empty())
        throw InternalCheckFailure("connecting applied to a non-cocycle");
    SparseVector m = c.cembed_map.block(p).apply(q);
    SparseVector dm = c.tM.cx.differential.block(p).apply(m);
    auto l = solve(c.h_tot.block(p + 1), dm);
    if (!l)
        throw InternalCheckFailure("boundary of the c-lift misses the subalgebra image");
    if (!c.tL.cx.differential.block(p + 1).apply(*l).empty())
        throw InternalCheckFailure("connecting lift is not closed");
    SparseVector v = *l;
    const int off = c.tL.cx.space.dim(p + 1) + c.tN.cx.space.dim(p + 1);
    for (const auto& [i, x] : m)
        v[off + i] = x;
    auto cls = class_in_basis(c.cone, c.hC, p + 1, v);
    if (!cls)
        throw InternalCheckFailure("connecting image is not a cone class");
    return *cls;
}

SparseMatrix connecting_matrix(const MorphismCore& c, int p)
{
    std::vector<SparseVector> cols;
    for (const auto& q : hreps(c.hK, p))
        cols.push_back(connecting_class(c, p, q));
    return SparseMatrix::from_columns(cols, hdim(c.hC, p + 1));
}

MorphismReport morphism_report_at(const SheafMorphismPresentation& alpha, int D)
{
    MorphismCore c = make_core(alpha, D);
    MorphismReport r;
    r.D = D;
    for (int p = 0; p < 3; ++p) {
        r.h_tot[p] = hdim(c.hC, p);
        r.h_n[p] = hdim(c.hN, p);
    }
    for (int p = 0; p < 2; ++p)
        r.h_coker[p] = hdim(c.hK, p);

    GradedMap pn = cone_to_n(c);
    std::array<SparseMatrix, 3> i{};
    for (int p = 0; p < 3; ++p)
        i[p] = induced_map(c.cone, c.hC, c.tN.cx, c.hN, pn, p);
    std::array<SparseMatrix, 2> f{};
    for (int p = 0; p < 2; ++p)
        f[p] = induced_map(c.tN.cx, c.hN, c.mm.hom_complex, c.hK, c.pig_map, p);
    SparseMatrix d0 = connecting_matrix(c, 0);
    SparseMatrix d1 = connecting_matrix(c, 1);

    r.sequence = {
        make_node("H0(Tot)", r.h_tot[0], SparseMatrix(r.h_tot[0], 0), i[0]),
        make_node("H0(N)", r.h_n[0], i[0], f[0]),
        make_node("H0(coker h)", r.h_coker[0], f[0], d0),
        make_node("H1(Tot)", r.h_tot[1], d0, i[1]),
        make_node("H1(N)", r.h_n[1], i[1], f[1]),
        make_node("H1(coker h)", r.h_coker[1], f[1], d1),
        make_node("H2(Tot)", r.h_tot[2], d1, i[2]),
        make_node("H2(N)", r.h_n[2], i[2], SparseMatrix(0, r.h_n[2])),
    };
    r.exact = std::all_of(r.sequence.begin(), r.sequence.end(),
                          [](const SequenceNode& n) { return n.exact(); });
    return r;
}

SheafPresentation at_window(const SheafPresentation& e, int D)
{
    SheafPresentation out = e;
    out.cover = make_p1_cover(D);
    return out;
}

void check_structure_sheaf(int D)
{
    auto [h0, h1] = cech_dims(trivial_sheaf(1, make_p1_cover(D)), D);
    if (h0 != 1 || h1 != 0)
        throw HypothesisViolated("structure sheaf has h0 = " + std::to_string(h0)
                                 + ", h1 = " + std::to_string(h1) + " on this model");
}

// C^0 coordinates of a global section in a rank-r Cech model.
SparseVector encode_c0(const CechModel& m, const GlobalSection& s)
{
    RingMatrix m0 = rm_zero(m.sheaf.rank, 1), m1 = rm_zero(m.sheaf.rank, 1);
    for (int i = 0; i < m.sheaf.rank; ++i) {
        m0[i][0] = s.s0[i];
        m1[i][0] = s.s1[i];
    }
    auto e0 = encode_section(m.basis[0], 1, m0);
    auto e1 = encode_section(m.basis[1], 1, m1);
    if (!e0 || !e1)
        throw WindowOverflow("section does not fit the kept chart bases");
    SparseVector out = *e0;
    const int off = m.basis[0].dim();
    for (const auto& [i, c] : *e1)
        out[off + i] = c;
    return out;
}

GlobalSection decode_global(const CechModel& m, const SparseVector& c0)
{
    GlobalSection s;
    s.s0.assign(m.sheaf.rank, {});
    s.s1.assign(m.sheaf.rank, {});
    const int off = m.basis[0].dim();
    for (const auto& [idx, v] : c0) {
        if (idx < off) {
            auto [comp, exp] = m.basis[0].vecs[idx];
            s.s0[comp][exp] += v;
        } else {
            auto [comp, exp] = m.basis[1].vecs[idx - off];
            s.s1[comp][exp] += v;
        }
    }
    return s;
}

// r x r chart matrix from coordinates in an End-model section basis
// (components flattened as p * r + q).
RingMatrix decode_end(const SectionBasis& b, int r, const SparseVector& v)
{
    RingMatrix out = rm_zero(r, r);
    for (const auto& [idx, c] : v) {
        auto [comp, exp] = b.vecs.at(idx);
        out[comp / r][comp % r][exp] += c;
    }
    return out;
}

SparseVector lincomb(const std::vector<SparseVector>& basis, const SparseVector& coeffs)
{
    SparseVector out;
    for (const auto& [i, c] : coeffs)
        out = sv_add(out, sv_scale(c, basis.at(i)));
    return out;
}

// Class coordinates of an overlap section of E in the H^1(E) basis.
SparseVector h1_class(const CechModel& em, const std::map<int, CohomologyDegree>& h,
                      const std::vector<LaurentPoly>& sec)
{
    RingMatrix col = rm_zero(em.sheaf.rank, 1);
    for (size_t i = 0; i < sec.size(); ++i)
        col[i][0] = sec[i];
    auto enc = encode_section(em.basis[2], 1, col);
    if (!enc)
        throw WindowOverflow("overlap section leaves the window");
    auto cls = class_in_basis(em.complex, h, 1, *enc);
    if (!cls)
        throw InternalCheckFailure("overlap section has no class in the chosen basis");
    return *cls;
}

struct PairData {
    MorphismCore core;
    CechCohomology ce, cend;
    std::map<int, CohomologyDegree> hE, hEnd;
    std::vector<GlobalSection> sections; // basis of H0(E)
    SparseMatrix h0mat;                  // H0(E) representatives as columns
    SparseMatrix umat;                   // U in H0(E) coordinates
    SparseMatrix p;                      // functionals cutting out H0(E)/U
};

PairData make_pair_data(const CoherentSystem& sys, int D)
{
    check_structure_sheaf(D);
    ValidationReport v = validate_coherent_system(sys);
    if (!v.ok())
        throw BadParams("invalid coherent system: " + v.issues.front().identity);

    PairData d;
    const int k = static_cast<int>(sys.u.size());
    SheafPresentation E = at_window(sys.e, D);
    SheafMorphismPresentation alpha{trivial_sheaf(k, E.cover), E, system_s0(sys), system_s1(sys)};
    d.core = make_core(alpha, D);
    d.ce = cech_cohomology(E);
    d.cend = cech_cohomology(end_sheaf(E));
    d.hE = cohomology(d.ce.model.complex);
    d.hEnd = cohomology(d.cend.model.complex);
    for (const auto& rep : d.ce.h0_reps)
        d.sections.push_back(decode_global(d.ce.model, rep));
    d.h0mat = SparseMatrix::from_columns(d.ce.h0_reps, d.ce.model.complex.space.dim(0));

    std::vector<SparseVector> ucols;
    for (const auto& u : sys.u) {
        auto c = solve(d.h0mat, encode_c0(d.ce.model, u));
        if (!c)
            throw InternalCheckFailure("section of U is not in the H0 span");
        ucols.push_back(*c);
    }
    d.umat = SparseMatrix::from_columns(ucols, d.ce.h0);
    std::vector<SparseVector> functionals = kernel_basis(d.umat.transpose());
    if (static_cast<int>(functionals.size()) != d.ce.h0 - k)
        throw InternalCheckFailure("quotient by U has the wrong dimension");
    d.p = SparseMatrix(d.ce.h0 - k, d.ce.h0);
    for (size_t t = 0; t < functionals.size(); ++t)
        for (const auto& [i, c] : functionals[t])
            d.p.set(static_cast<int>(t), i, c);
    return d;
}

// Inclusion of the End(E) summand of Tot N into the standalone End(E) model
// (the morphism-model kept bases are contained in the standalone ones).
GradedMap n_to_end(const PairData& d)
{
    const MorphismModel& mm = d.core.mm;
    const CechModel& em = d.cend.model;
    GradedMap f(d.core.tN.cx.space, em.complex.space, 0);
    const int nf0 = mm.nf_basis[0].dim(), ng0 = mm.ng_basis[0].dim();
    const int nf1 = mm.nf_basis[1].dim();
    SparseMatrix b0(em.complex.space.dim(0), d.core.tN.cx.space.dim(0));
    for (int i = 0; i < ng0; ++i) {
        auto it = em.basis[0].pos.find(mm.ng_basis[0].vecs[i]);
        if (it == em.basis[0].pos.end())
            throw InternalCheckFailure("model basis vector missing from the standalone model");
        b0.set(it->second, nf0 + i, rat(1));
    }
    for (int i = 0; i < mm.ng_basis[1].dim(); ++i) {
        auto it = em.basis[1].pos.find(mm.ng_basis[1].vecs[i]);
        if (it == em.basis[1].pos.end())
            throw InternalCheckFailure("model basis vector missing from the standalone model");
        b0.set(em.basis[0].dim() + it->second, nf0 + ng0 + nf1 + i, rat(1));
    }
    f.set_block(0, std::move(b0));
    SparseMatrix b1(em.complex.space.dim(1), d.core.tN.cx.space.dim(1));
    const int nf2 = mm.nf_basis[2].dim();
    for (int i = 0; i < mm.ng_basis[2].dim(); ++i) {
        auto it = em.basis[2].pos.find(mm.ng_basis[2].vecs[i]);
        if (it == em.basis[2].pos.end())
            throw InternalCheckFailure("model basis vector missing from the standalone model");
        b1.set(it->second, nf2 + i, rat(1));
    }
    f.set_block(1, std::move(b1));
    if (!maps_equal(em.complex.differential.compose(f), f.compose(d.core.tN.cx.differential)))
        throw InternalCheckFailure("End(E) projection is not a chain map");
    return f;
}

// psi |-> (u_j |-> psi(u_j) mod U), rows indexed t * k + j.
SparseMatrix end_to_quot(const PairData& d, int k)
{
    const int r = d.ce.model.sheaf.rank;
    const int rows = d.p.rows() * k;
    std::vector<SparseVector> cols;
    for (const auto& rep : hreps(d.hEnd, 0)) {
        SparseVector c0, c1;
        const int off = d.cend.model.basis[0].dim();
        for (const auto& [idx, v] : rep)
            (idx < off ? c0[idx] : c1[idx - off]) = v;
        RingMatrix psi0 = decode_end(d.cend.model.basis[0], r, c0);
        RingMatrix psi1 = decode_end(d.cend.model.basis[1], r, c1);
        SparseVector col;
        for (int j = 0; j < k; ++j) {
            GlobalSection w;
            w.s0.assign(r, {});
            w.s1.assign(r, {});
            RingMatrix u0 = rm_zero(r, 1), u1 = rm_zero(r, 1);
            for (int i = 0; i < r; ++i) {
                u0[i][0] = d.core.mm.alpha.a0[i][j];
                u1[i][0] = d.core.mm.alpha.a1[i][j];
            }
            RingMatrix w0 = rm_mul(psi0, u0), w1 = rm_mul(psi1, u1);
            for (int i = 0; i < r; ++i) {
                w.s0[i] = w0[i][0];
                w.s1[i] = w1[i][0];
            }
            SparseVector enc = encode_c0(d.ce.model, w);
            if (!d.ce.model.complex.differential.block(0).apply(enc).empty())
                throw InternalCheckFailure("endomorphism image of a section is not global");
            auto gamma = solve(d.h0mat, enc);
            if (!gamma)
                throw InternalCheckFailure("global section outside the H0 span");
            SparseVector q = d.p.apply(*gamma);
            for (const auto& [t, c] : q)
                col[t * k + j] = c;
        }
        cols.push_back(std::move(col));
    }
    return SparseMatrix::from_columns(cols, rows);
}

// Hom 0-cochain with prescribed column j = the given global section, encoded
// in the coker-h model coordinates.
SparseVector hom_c0_cochain(const MorphismCore& core, int k, int j, const GlobalSection& sec)
{
    const int r = static_cast<int>(sec.s0.size());
    RingMatrix m0 = rm_zero(r, k), m1 = rm_zero(r, k);
    for (int i = 0; i < r; ++i) {
        m0[i][j] = sec.s0[i];
        m1[i][j] = sec.s1[i];
    }
    auto e0 = encode_section(core.mm.hom_basis[0], k, m0);
    auto e1 = encode_section(core.mm.hom_basis[1], k, m1);
    if (!e0 || !e1)
        throw WindowOverflow("Hom cochain leaves the kept bases");
    SparseVector out = *e0;
    const int off = core.mm.hom_basis[0].dim();
    for (const auto& [i, c] : *e1)
        out[off + i] = c;
    return out;
}

PairEUReport pair_report_at(const CoherentSystem& sys, int D)
{
    PairData d = make_pair_data(sys, D);
    const int k = static_cast<int>(sys.u.size());
    const int r = sys.e.rank;
    PairEUReport rep;
    rep.D = D;
    rep.k = k;
    rep.h0_e = d.ce.h0;
    rep.h1_e = d.ce.h1;
    rep.h0_end = d.cend.h0;
    rep.h1_end = d.cend.h1;
    for (int p2 = 0; p2 < 3; ++p2)
        rep.h_tot[p2] = hdim(d.core.hC, p2);
    rep.tangent = rep.h_tot[1];
    rep.dim_hom_u_quot = k * (rep.h0_e - k);
    rep.dim_hom_u_h1 = k * rep.h1_e;

    GradedMap toEnd = n_to_end(d).compose(cone_to_n(d.core));
    std::array<SparseMatrix, 3> j{};
    for (int p2 = 0; p2 < 3; ++p2)
        j[p2] = induced_map(d.core.cone, d.core.hC, d.cend.model.complex, d.hEnd, toEnd, p2);

    SparseMatrix fmat = end_to_quot(d, k);

    // delta1 on the basis of Hom(U, H0(E)/U): lift each functional to a
    // complement section and push through the connecting construction.
    std::vector<SparseVector> d1cols;
    for (int t = 0; t < d.p.rows(); ++t) {
        SparseVector et;
        et[t] = rat(1);
        auto vt = solve(d.p, et);
        if (!vt)
            throw InternalCheckFailure("quotient functionals are not independent");
        GlobalSection lift = decode_global(d.ce.model, lincomb(d.ce.h0_reps, *vt));
        for (int jj = 0; jj < k; ++jj) {
            SparseVector q = hom_c0_cochain(d.core, k, jj, lift);
            d1cols.push_back(connecting_class(d.core, 0, q));
        }
    }
    SparseMatrix d1 = SparseMatrix::from_columns(d1cols, hdim(d.core.hC, 1));
    // reorder: columns were built (t, j); the row/column convention is t * k + j
    // which matches the construction order, so d1 columns align with fmat rows.

    // alpha: H1(End E) -> Hom(U, H1(E)) by cup products against the basis of U
    std::vector<SparseVector> acols;
    for (const auto& arep : hreps(d.hEnd, 1)) {
        RingMatrix a01 = decode_end(d.cend.model.basis[2], r, arep);
        SparseVector col;
        for (int jj = 0; jj < k; ++jj) {
            SparseVector cls = h1_class(d.ce.model, d.hE, cup_cochain(a01, sys.u[jj]));
            for (const auto& [m2, c] : cls)
                col[m2 * k + jj] = c;
        }
        acols.push_back(std::move(col));
    }
    rep.alpha_matrix = SparseMatrix::from_columns(acols, rep.h1_e * k);

    // delta2 on the basis of Hom(U, H1(E))
    std::vector<SparseVector> d2cols;
    for (int m2 = 0; m2 < rep.h1_e; ++m2) {
        GlobalSection ov; // overlap section of E stored in the chart-0 slots
        ov.s0.assign(r, {});
        ov.s1.assign(r, {});
        RingMatrix dec = decode_section(d.ce.model.basis[2], r, 1, hreps(d.hE, 1)[m2]);
        for (int i = 0; i < r; ++i)
            ov.s0[i] = dec[i][0];
        for (int jj = 0; jj < k; ++jj) {
            RingMatrix q = rm_zero(r, k);
            for (int i = 0; i < r; ++i)
                q[i][jj] = ov.s0[i];
            auto enc = encode_section(d.core.mm.hom_basis[2], k, q);
            if (!enc)
                throw WindowOverflow("Hom 1-cochain leaves the kept bases");
            d2cols.push_back(connecting_class(d.core, 1, *enc));
        }
    }
    SparseMatrix d2 = SparseMatrix::from_columns(d2cols, hdim(d.core.hC, 2));

    const int quot = rep.dim_hom_u_quot, homh1 = rep.dim_hom_u_h1;
    rep.sequence = {
        make_node("H0(Tot)", rep.h_tot[0], SparseMatrix(rep.h_tot[0], 0), j[0]),
        make_node("H0(End E)", rep.h0_end, j[0], fmat),
        make_node("Hom(U, H0(E)/U)", quot, fmat, d1),
        make_node("H1(Tot)", rep.h_tot[1], d1, j[1]),
        make_node("H1(End E)", rep.h1_end, j[1], rep.alpha_matrix),
        make_node("Hom(U, H1(E))", homh1, rep.alpha_matrix, d2),
        make_node("H2(Tot)", rep.h_tot[2], d2, j[2]),
        make_node("H2(End E)", 0, j[2], SparseMatrix(0, 0)),
        make_node("Hom(U, H2(E))", 0, SparseMatrix(0, 0), SparseMatrix(0, 0)),
    };
    rep.exact = std::all_of(rep.sequence.begin(), rep.sequence.end(),
                            [](const SequenceNode& n) { return n.exact(); });
    return rep;
}

} // namespace

MorphismReport deform_morphism_report(const SheafMorphismPresentation& alpha, int D)
{
    MorphismReport r = morphism_report_at(alpha, D);
    MorphismReport next = morphism_report_at(alpha, D + 1);
    if (r.h_tot != next.h_tot || r.h_n != next.h_n || r.h_coker != next.h_coker)
        throw WindowUnstable("cone dimensions move between windows D=" + std::to_string(D)
                             + " and D=" + std::to_string(D + 1));
    r.stable = true;
    return r;
}

PairEUReport pair_EU_report(const CoherentSystem& sys, int D)
{
    PairEUReport r = pair_report_at(sys, D);
    PairEUReport next = pair_report_at(sys, D + 1);
    if (r.h_tot != next.h_tot || r.h0_e != next.h0_e || r.h1_e != next.h1_e
        || r.h0_end != next.h0_end || r.h1_end != next.h1_end)
        throw WindowUnstable("pair dimensions move between windows D=" + std::to_string(D)
                             + " and D=" + std::to_string(D + 1));
    r.stable = true;
    return r;
}

MDeltaReport m_delta_check(const CoherentSystem& sys, int D)
{
    check_structure_sheaf(D);
    auto dims_at = [&](int w) {
        MDeltaModel md = build_mdelta_sc(sys, w);
        TotalComplex t = total_complex_full(md.sc);
        auto h = cohomology(t.cx);
        return std::array<int, 3>{hdim(h, 0), hdim(h, 1), hdim(h, 2)};
    };
    MDeltaReport r;
    r.D = D;
    r.h = dims_at(D);
    if (r.h != dims_at(D + 1))
        throw WindowUnstable("m^Delta dimensions move between windows D=" + std::to_string(D)
                             + " and D=" + std::to_string(D + 1));
    r.stable = true;
    const int k = static_cast<int>(sys.u.size());
    CechCohomology ce = cech_cohomology(at_window(sys.e, D));
    r.expected = {0, k * (ce.h0 - k), k * ce.h1};
    return r;
}

SectionExtension section_extension(const SheafPresentation& e, const RingMatrix& a01,
                                   const GlobalSection& s, int D)
{
    SheafPresentation E = at_window(e, D);
    if (static_cast<int>(a01.size()) != E.rank
        || (!a01.empty() && static_cast<int>(a01[0].size()) != E.rank))
        throw ShapeMismatch("deformation direction must be rank x rank");
    CechCohomology ce = cech_cohomology(E);
    auto hE = cohomology(ce.model.complex);

    std::vector<LaurentPoly> cup = cup_cochain(a01, s);
    RingMatrix col = rm_zero(E.rank, 1);
    for (int i = 0; i < E.rank; ++i)
        col[i][0] = cup[i];
    auto enc = encode_section(ce.model.basis[2], 1, col);
    if (!enc)
        throw WindowOverflow("cup product leaves the window");
    auto cls = class_in_basis(ce.model.complex, hE, 1, *enc);
    if (!cls)
        throw InternalCheckFailure("cup cochain has no class in the chosen basis");

    SectionExtension out;
    if (cls->empty()) {
        // solve d(sigma) = -cup so that sigma_0 - g01 sigma_1 = a cup s
        auto sigma = solve(ce.model.complex.differential.block(0), sv_scale(rat(-1), *enc));
        if (!sigma)
            throw InternalCheckFailure("trivial class admits no bounding cochain");
        GlobalSection sg = decode_global(ce.model, *sigma);
        out.sigma0 = sg.s0;
        out.sigma1 = sg.s1;
        out.lifts = true;
        // substitution check in the ring, exact and unbounded
        RingMatrix s1col = rm_zero(E.rank, 1);
        for (int i = 0; i < E.rank; ++i)
            s1col[i][0] = out.sigma1[i];
        RingMatrix glued = rm_mul(E.g01, s1col);
        bool ok = true;
        for (int i = 0; i < E.rank; ++i) {
            LaurentPoly lhs = sv_sub(out.sigma0[i], glued[i][0]);
            if (!sv_is_zero(sv_sub(lhs, cup[i])))
                ok = false;
        }
        out.verified = ok;
        if (!ok)
            throw InternalCheckFailure("constructed lift fails the gluing equation");
    } else {
        out.obstruction_class = *cls;
        // certificate check: cup minus its class representative must bound
        SparseVector residue = sv_sub(*enc, lincomb(hreps(hE, 1), *cls));
        auto bound = solve(ce.model.complex.differential.block(0), residue);
        if (!bound)
            throw InternalCheckFailure("obstruction certificate fails to reduce");
        out.verified = true;
    }
    return out;
}

DefkResult defk_tangent(const SheafPresentation& e, int k,
                        const std::optional<RingMatrix>& probe_a01, int D)
{
    if (k < 1)
        throw BadParams("k must be at least 1");
    SheafPresentation E = at_window(e, D);
    CechCohomology ce = cech_cohomology(E);
    if (ce.h0 < k)
        throw KTooLarge("h0 = " + std::to_string(ce.h0) + " < k = " + std::to_string(k));
    CechCohomology cend = cech_cohomology(end_sheaf(E));
    auto hE = cohomology(ce.model.complex);

    DefkResult out;
    out.k = k;
    out.h0 = ce.h0;
    out.h1_end = cend.h1;
    out.exact_case = (ce.h0 == k);
    out.span_dim = cend.h1;

    std::vector<GlobalSection> sections;
    for (const auto& rep : ce.h0_reps)
        sections.push_back(decode_global(ce.model, rep));

    auto cup_classes = [&](const RingMatrix& a01) {
        // columns of the pairing H0(E) -> H1(E) for one direction
        std::vector<SparseVector> cols;
        for (const auto& s : sections)
            cols.push_back(h1_class(ce.model, hE, cup_cochain(a01, s)));
        return SparseMatrix::from_columns(cols, ce.h1);
    };

    if (out.exact_case) {
        // rows (j, m): class coordinate m of rep_t cup s_j
        std::vector<SparseVector> cols;
        for (const auto& rep : cend.h1_reps) {
            RingMatrix a01 = decode_end(cend.model.basis[2], E.rank, rep);
            SparseMatrix m = cup_classes(a01);
            SparseVector col;
            for (const auto& [rc, c] : m.entries())
                col[rc.second * ce.h1 + rc.first] = c;
            cols.push_back(std::move(col));
        }
        SparseMatrix big = SparseMatrix::from_columns(cols, ce.h0 * ce.h1);
        out.tangent_basis = kernel_basis(big);
        out.tangent_dim = static_cast<int>(out.tangent_basis.size());
    }
    if (probe_a01) {
        out.probe_given = true;
        SparseMatrix m = cup_classes(*probe_a01);
        out.probe_kernel_dim = ce.h0 - rank(m);
        out.probe_in_cone = out.probe_kernel_dim >= k;
    }
    return out;
}

SmoothnessFlags smoothness_flags(const CoherentSystem& sys, int D)
{
    check_structure_sheaf(D);
    ValidationReport v = validate_coherent_system(sys);
    if (!v.ok())
        throw BadParams("invalid coherent system: " + v.issues.front().identity);
    const int k = static_cast<int>(sys.u.size());
    SheafPresentation E = at_window(sys.e, D);
    CechCohomology ce = cech_cohomology(E);
    SheafMorphismPresentation alpha{trivial_sheaf(k, E.cover), E, system_s0(sys), system_s1(sys)};
    MorphismCore core = make_core(alpha, D);

    SmoothnessFlags out;
    out.D = D;
    out.hom_u_h1_vanishes = (k * ce.h1 == 0);
    out.h2_tot_vanishes = (hdim(core.hC, 2) == 0);
    out.r_u = out.hom_u_h1_vanishes ? "smooth" : "criterion inapplicable";
    out.def_pair = out.h2_tot_vanishes ? "smooth" : "criterion inapplicable";
    out.def_e = out.h2_tot_vanishes ? "smooth" : "criterion inapplicable";
    return out;
}

} // namespace deform

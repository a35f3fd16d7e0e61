#include "deform/dgla.hpp"

#include "deform/errors.hpp"

namespace deform {

Element el_add(const Element& a, const Element& b)
{
    if (a.is_zero())
        return b;
    if (b.is_zero())
        return a;
    if (a.degree != b.degree)
        throw DegreeError("sum of elements of degrees " + std::to_string(a.degree) + " and " + std::to_string(b.degree));
    return Element{a.degree, sv_add(a.c, b.c)};
}

Element el_sub(const Element& a, const Element& b) { return el_add(a, el_scale(rat(-1), b)); }

Element el_scale(const Rational& s, const Element& a) { return Element{a.degree, sv_scale(s, a.c)}; }

namespace {

// (da,ia) <= (db,ib) in lexicographic order
bool ordered(int da, int ia, int db, int ib)
{
    return da < db || (da == db && ia <= ib);
}

// [a,b] = -(-1)^{da db} [b,a]
Rational swap_sign(int da, int db)
{
    return (da * db) % 2 == 0 ? rat(-1) : rat(1);
}

} // namespace

void DGLA::set_bracket(int da, int ia, int db, int ib, const SparseVector& value)
{
    if (ia >= space.dim(da) || ib >= space.dim(db))
        throw UnknownLabel("bracket references basis outside the space");
    Key k{da, ia, db, ib};
    SparseVector v = value;
    if (!ordered(da, ia, db, ib)) {
        k = Key{db, ib, da, ia};
        v = sv_scale(swap_sign(da, db), v);
    }
    if (v.empty())
        structure_.erase(k);
    else
        structure_[k] = std::move(v);
}

void DGLA::mark_bracket_undefined(int da, int ia, int db, int ib)
{
    if (ordered(da, ia, db, ib))
        undefined_.insert(Key{da, ia, db, ib});
    else
        undefined_.insert(Key{db, ib, da, ia});
}

std::optional<SparseVector> DGLA::bracket_basis(int da, int ia, int db, int ib) const
{
    bool swapped = !ordered(da, ia, db, ib);
    Key k = swapped ? Key{db, ib, da, ia} : Key{da, ia, db, ib};
    if (undefined_.count(k))
        return std::nullopt;
    auto it = structure_.find(k);
    if (it == structure_.end())
        return SparseVector{};
    return swapped ? sv_scale(swap_sign(da, db), it->second) : it->second;
}

Element DGLA::basis_element(int degree, int index) const
{
    if (index >= space.dim(degree))
        throw UnknownLabel("basis index out of range in degree " + std::to_string(degree));
    Element e{degree, {}};
    e.c[index] = rat(1);
    return e;
}

Element DGLA::diff(const Element& a) const
{
    return Element{a.degree + 1, d.apply(a.degree, a.c)};
}

Element DGLA::bracket(const Element& a, const Element& b) const
{
    Element out = zero(a.degree + b.degree);
    for (const auto& [ia, ca] : a.c) {
        for (const auto& [ib, cb] : b.c) {
            auto br = bracket_basis(a.degree, ia, b.degree, ib);
            if (!br)
                throw WindowOverflow("bracket of basis pair (" + std::to_string(a.degree) + "," + std::to_string(ia) + ")x(" + std::to_string(b.degree) + "," + std::to_string(ib) + ") leaves the window");
            out.c = sv_add(out.c, sv_scale(ca * cb, *br));
        }
    }
    return out;
}

namespace {

std::string tuple_name(const DGLA& g, int da, int ia)
{
    return g.space.label(da, ia) + "(deg " + std::to_string(da) + ")";
}

} // namespace

ValidationReport validate_dgla(const DGLA& g)
{
    ValidationReport rep;

    for (int n : g.space.degrees()) {
        if (!(g.d.block(n + 1) * g.d.block(n)).is_zero())
            rep.issues.push_back({"d_squared", "degree " + std::to_string(n)});
    }

    struct B {
        int deg, idx;
    };
    std::vector<B> basis;
    for (int n : g.space.degrees())
        for (int i = 0; i < g.space.dim(n); ++i)
            basis.push_back({n, i});

    // diagonal skew cases: [a,a] = 0 forced for even degree
    for (const B& a : basis) {
        if (a.deg % 2 != 0)
            continue;
        auto br = g.bracket_basis(a.deg, a.idx, a.deg, a.idx);
        if (!br) {
            ++rep.skipped_overflow;
            continue;
        }
        if (!br->empty())
            rep.issues.push_back({"skew", "[" + tuple_name(g, a.deg, a.idx) + ", same]"});
    }

    // Leibniz on ordered pairs
    for (size_t i = 0; i < basis.size(); ++i) {
        for (size_t j = i; j < basis.size(); ++j) {
            const B &a = basis[i], &b = basis[j];
            try {
                Element ea = g.basis_element(a.deg, a.idx);
                Element eb = g.basis_element(b.deg, b.idx);
                Element lhs = g.diff(g.bracket(ea, eb));
                Element rhs = el_add(g.bracket(g.diff(ea), eb),
                                     el_scale(a.deg % 2 == 0 ? rat(1) : rat(-1), g.bracket(ea, g.diff(eb))));
                if (!el_sub(lhs, rhs).is_zero())
                    rep.issues.push_back({"leibniz", "[" + tuple_name(g, a.deg, a.idx) + ", " + tuple_name(g, b.deg, b.idx) + "]"});
            } catch (const WindowOverflow&) {
                ++rep.skipped_overflow;
            }
        }
    }

    // Jacobi on ordered triples
    for (size_t i = 0; i < basis.size(); ++i) {
        for (size_t j = i; j < basis.size(); ++j) {
            for (size_t k = j; k < basis.size(); ++k) {
                const B &a = basis[i], &b = basis[j], &c = basis[k];
                try {
                    Element ea = g.basis_element(a.deg, a.idx);
                    Element eb = g.basis_element(b.deg, b.idx);
                    Element ec = g.basis_element(c.deg, c.idx);
                    Element lhs = g.bracket(ea, g.bracket(eb, ec));
                    Element rhs = el_add(g.bracket(g.bracket(ea, eb), ec),
                                         el_scale((a.deg * b.deg) % 2 == 0 ? rat(1) : rat(-1),
                                                  g.bracket(eb, g.bracket(ea, ec))));
                    if (!el_sub(lhs, rhs).is_zero())
                        rep.issues.push_back({"jacobi", "[" + tuple_name(g, a.deg, a.idx) + ", [" + tuple_name(g, b.deg, b.idx) + ", " + tuple_name(g, c.deg, c.idx) + "]]"});
                } catch (const WindowOverflow&) {
                    ++rep.skipped_overflow;
                }
            }
        }
    }
    return rep;
}

ValidationReport validate_morphism(const DGLAMorphism& f)
{
    ValidationReport rep;
    if (f.map.degree_shift != 0)
        rep.issues.push_back({"shift", "morphism must have degree shift 0"});

    const DGLA& S = *f.source;
    const DGLA& T = *f.target;
    for (int n : S.space.degrees()) {
        if (T.d.block(n) * f.map.block(n) != f.map.block(n + 1) * S.d.block(n))
            rep.issues.push_back({"differential", "degree " + std::to_string(n)});
    }

    struct B {
        int deg, idx;
    };
    std::vector<B> basis;
    for (int n : S.space.degrees())
        for (int i = 0; i < S.space.dim(n); ++i)
            basis.push_back({n, i});
    for (size_t i = 0; i < basis.size(); ++i) {
        for (size_t j = i; j < basis.size(); ++j) {
            const B &a = basis[i], &b = basis[j];
            try {
                Element ea = S.basis_element(a.deg, a.idx);
                Element eb = S.basis_element(b.deg, b.idx);
                Element lhs = f.apply(S.bracket(ea, eb));
                Element rhs = T.bracket(f.apply(ea), f.apply(eb));
                if (!el_sub(lhs, rhs).is_zero())
                    rep.issues.push_back({"bracket", "[" + tuple_name(S, a.deg, a.idx) + ", " + tuple_name(S, b.deg, b.idx) + "]"});
            } catch (const WindowOverflow&) {
                ++rep.skipped_overflow;
            }
        }
    }
    return rep;
}

DGLAMorphism identity_morphism(const DGLAPtr& g)
{
    GradedMap m(g->space, g->space, 0);
    for (int n : g->space.degrees())
        m.set_block(n, SparseMatrix::identity(g->space.dim(n)));
    return DGLAMorphism{g, g, std::move(m)};
}

DGLAMorphism zero_morphism(const DGLAPtr& src, const DGLAPtr& tgt)
{
    return DGLAMorphism{src, tgt, GradedMap(src->space, tgt->space, 0)};
}

CochainComplex complex_of(const DGLA& g)
{
    return CochainComplex{g.space, g.d};
}

CochainComplex complex_direct_sum(const CochainComplex& a, const CochainComplex& b)
{
    CochainComplex out;
    std::set<int> degs;
    for (int n : a.space.degrees())
        degs.insert(n);
    for (int n : b.space.degrees())
        degs.insert(n);
    for (int n : degs) {
        std::vector<std::string> labels;
        for (int i = 0; i < a.space.dim(n); ++i)
            labels.push_back("a:" + a.space.label(n, i));
        for (int i = 0; i < b.space.dim(n); ++i)
            labels.push_back("b:" + b.space.label(n, i));
        out.space.components[n] = std::move(labels);
    }
    out.differential = GradedMap(out.space, out.space, 1);
    for (int n : out.space.degrees()) {
        SparseMatrix blk(out.space.dim(n + 1), out.space.dim(n));
        blk.insert_block(0, 0, a.differential.block(n));
        blk.insert_block(a.space.dim(n + 1), a.space.dim(n), b.differential.block(n));
        out.differential.set_block(n, std::move(blk));
    }
    return out;
}

CochainComplex mapping_cone(const CochainComplex& L, const CochainComplex& N,
                            const CochainComplex& M, const GradedMap& h, const GradedMap& g)
{
    CochainComplex out;
    std::set<int> degs;
    for (int n : L.space.degrees())
        degs.insert(n);
    for (int n : N.space.degrees())
        degs.insert(n);
    for (int n : M.space.degrees()) {
        degs.insert(n);
        degs.insert(n + 1);
    }
    for (int p : degs) {
        std::vector<std::string> labels;
        for (int i = 0; i < L.space.dim(p); ++i)
            labels.push_back("L:" + L.space.label(p, i));
        for (int i = 0; i < N.space.dim(p); ++i)
            labels.push_back("N:" + N.space.label(p, i));
        for (int i = 0; i < M.space.dim(p - 1); ++i)
            labels.push_back("M:" + M.space.label(p - 1, i));
        if (!labels.empty())
            out.space.components[p] = std::move(labels);
    }
    out.differential = GradedMap(out.space, out.space, 1);
    for (int p : out.space.degrees()) {
        const int lL = L.space.dim(p), lN = N.space.dim(p);
        const int rL = L.space.dim(p + 1), rN = N.space.dim(p + 1);
        SparseMatrix blk(out.space.dim(p + 1), out.space.dim(p));
        blk.insert_block(0, 0, L.differential.block(p));
        blk.insert_block(rL, lL, N.differential.block(p));
        // third component: h(l) - g(n) - dm
        blk.insert_block(rL + rN, 0, h.block(p));
        blk.insert_block(rL + rN, lL, g.block(p).scaled(rat(-1)));
        blk.insert_block(rL + rN, lL + lN, M.differential.block(p - 1).scaled(rat(-1)));
        out.differential.set_block(p, std::move(blk));
    }
    return out;
}

CochainComplex mapping_cone(const DGLAMorphism& h, const DGLAMorphism& g)
{
    if (!(h.target->space == g.target->space))
        throw BaseMismatch("mapping cone of morphisms with different targets");
    return mapping_cone(complex_of(*h.source), complex_of(*g.source), complex_of(*h.target), h.map, g.map);
}

GradedMap cone_projection(const CochainComplex& cone, const CochainComplex& LplusN)
{
    GradedMap p(cone.space, LplusN.space, 0);
    for (int n : cone.space.degrees()) {
        const int ln = LplusN.space.dim(n);
        SparseMatrix blk(ln, cone.space.dim(n));
        blk.insert_block(0, 0, SparseMatrix::identity(ln));
        p.set_block(n, std::move(blk));
    }
    return p;
}

DGLAPtr make_matrix_dgla(int n)
{
    auto g = std::make_shared<DGLA>();
    std::vector<std::string> labels;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            labels.push_back("E" + std::to_string(i) + std::to_string(j));
    g->space.components[0] = labels;
    g->d = GradedMap(g->space, g->space, 1);

    auto idx = [n](int i, int j) { return i * n + j; };
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k)
                for (int l = 0; l < n; ++l) {
                    SparseVector v;
                    if (j == k)
                        v[idx(i, l)] += rat(1);
                    if (l == i) {
                        Rational s = v.count(idx(k, j)) ? v[idx(k, j)] : Rational(0);
                        s -= 1;
                        if (is_zero(s))
                            v.erase(idx(k, j));
                        else
                            v[idx(k, j)] = s;
                    }
                    if (idx(i, j) <= idx(k, l) && !v.empty())
                        g->set_bracket(0, idx(i, j), 0, idx(k, l), v);
                }
    return g;
}

DGLAPtr make_abelian_dgla(GradedVectorSpace space, GradedMap d)
{
    auto g = std::make_shared<DGLA>();
    g->space = std::move(space);
    g->d = std::move(d);
    return g;
}

} // namespace deform

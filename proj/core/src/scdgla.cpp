#include "deform/scdgla.hpp"

#include <algorithm>

#include "deform/errors.hpp"

namespace deform {

namespace {

void require_nonnegative(const ScDGLA& s)
{
    for (const auto& g : s.levels)
        for (const auto& [n, basis] : g->space.components)
            if (n < 0 && !basis.empty())
                throw Unsupported("levels with negative degrees need a degree -1 witness; out of scope");
}

void merge(ValidationReport& into, const ValidationReport& from, const std::string& prefix)
{
    for (const auto& issue : from.issues)
        into.issues.push_back({issue.identity, prefix + issue.where});
    into.skipped_overflow += from.skipped_overflow;
}

} // namespace

const DGLAMorphism& ScDGLA::coface(int k, int i) const
{
    if (i < 1 || i >= static_cast<int>(levels.size()))
        throw BadParams("coface level out of range");
    const auto& row = cofaces.at(i - 1);
    if (k < 0 || k > i)
        throw BadParams("coface index out of range");
    return row.at(k);
}

ValidationReport validate_scdgla(const ScDGLA& s)
{
    ValidationReport rep;
    int N = static_cast<int>(s.levels.size());
    if (static_cast<int>(s.cofaces.size()) != std::max(N - 1, 0)) {
        rep.issues.push_back({"shape", "coface row count"});
        return rep;
    }
    for (int i = 1; i < N; ++i) {
        if (static_cast<int>(s.cofaces[i - 1].size()) != i + 1) {
            rep.issues.push_back({"shape", "coface count at level " + std::to_string(i)});
            continue;
        }
        for (int k = 0; k <= i; ++k) {
            const DGLAMorphism& f = s.coface(k, i);
            std::string name = "del_{" + std::to_string(k) + "," + std::to_string(i) + "}";
            if (f.source != s.levels[i - 1] || f.target != s.levels[i]) {
                rep.issues.push_back({"shape", name + " endpoints"});
                continue;
            }
            merge(rep, validate_morphism(f), name + " ");
        }
    }
    for (int i = 1; i + 1 < N; ++i)
        for (int l = 0; l <= i; ++l)
            for (int k = l; k <= i; ++k) {
                GradedMap lhs = s.coface(k + 1, i + 1).map.compose(s.coface(l, i).map);
                GradedMap rhs = s.coface(l, i + 1).map.compose(s.coface(k, i).map);
                if (!(lhs == rhs))
                    rep.issues.push_back({"cosimplicial",
                        "(k,l,i)=(" + std::to_string(k) + "," + std::to_string(l) + ","
                            + std::to_string(i) + ")"});
            }
    return rep;
}

TotalComplex total_complex_full(const ScDGLA& s)
{
    int N = static_cast<int>(s.levels.size());
    GradedVectorSpace sp;
    std::map<std::pair<int, int>, int> offset; // (total degree, level) -> start index
    for (int n = 0; n < N; ++n)
        for (const auto& [q, basis] : s.levels[n]->space.components) {
            if (basis.empty())
                continue;
            int p = q + n;
            auto& dest = sp.components[p];
            offset[{p, n}] = static_cast<int>(dest.size());
            for (const auto& lab : basis)
                dest.push_back("g" + std::to_string(n) + ":" + lab);
        }

    GradedMap D(sp, sp, 1);
    for (const auto& [p, basis] : sp.components) {
        if (basis.empty())
            continue;
        SparseMatrix blk(sp.dim(p + 1), sp.dim(p));
        for (int n = 0; n < N; ++n) {
            int q = p - n;
            if (s.levels[n]->space.dim(q) == 0)
                continue;
            int col0 = offset.at({p, n});
            // internal differential, sign (-1)^n
            SparseMatrix dn = s.levels[n]->d.block(q);
            if (!dn.is_zero()) {
                int row0 = offset.at({p + 1, n});
                Rational sgn = (n % 2 == 0) ? rat(1) : rat(-1);
                for (const auto& [rc, v] : dn.entries())
                    blk.add_to(row0 + rc.first, col0 + rc.second, sgn * v);
            }
            // cofaces into level n+1, alternating signs
            if (n + 1 < N && s.levels[n + 1]->space.dim(q) > 0) {
                int row0 = offset.at({p + 1, n + 1});
                for (int k = 0; k <= n + 1; ++k) {
                    SparseMatrix fk = s.coface(k, n + 1).map.block(q);
                    Rational sgn = (k % 2 == 0) ? rat(1) : rat(-1);
                    for (const auto& [rc, v] : fk.entries())
                        blk.add_to(row0 + rc.first, col0 + rc.second, sgn * v);
                }
            }
        }
        D.set_block(p, std::move(blk));
    }
    CochainComplex out{sp, D};
    if (!check_complex(out))
        throw InvalidSc("total differential does not square to zero");
    return {out, offset};
}

CochainComplex total_complex(const ScDGLA& s)
{
    return total_complex_full(s).cx;
}

GradedMap total_map(const ScDGLA& src, const TotalComplex& tsrc, const ScDGLA& dst,
                    const TotalComplex& tdst, const std::vector<GradedMap>& level_maps)
{
    int N = static_cast<int>(src.levels.size());
    if (static_cast<int>(dst.levels.size()) != N
        || static_cast<int>(level_maps.size()) != N)
        throw ShapeMismatch("one level map per level required");
    GradedMap f(tsrc.cx.space, tdst.cx.space, 0);
    for (int p : tsrc.cx.space.degrees()) {
        SparseMatrix blk(tdst.cx.space.dim(p), tsrc.cx.space.dim(p));
        for (int n = 0; n < N; ++n) {
            int q = p - n;
            if (src.levels[n]->space.dim(q) == 0)
                continue;
            SparseMatrix fb = level_maps[n].block(q);
            if (fb.is_zero())
                continue;
            if (dst.levels[n]->space.dim(q) == 0)
                throw ShapeMismatch("level map hits an absent target component");
            blk.insert_block(tdst.offset.at({p, n}), tsrc.offset.at({p, n}), fb);
        }
        f.set_block(p, std::move(blk));
    }
    return f;
}

ConditionResult z1sc_check(const ScDGLA& s, const Z1Element& e)
{
    require_nonnegative(s);
    if (e.l.carrier != s.levels.at(0) || e.m.carrier != s.levels.at(1))
        throw CarrierMismatch("Z1 element levels do not match the sc dgLa");
    if (e.l.degree != 1 || e.m.degree != 0)
        throw DegreeError("Z1 element must have degrees (1, 0)");
    if (!mc_residual(e.l).is_zero())
        return {false, "maurer-cartan"};
    NilpotentElement lhs = ne_push(s.coface(1, 1), e.l);
    NilpotentElement rhs = gauge(e.m, ne_push(s.coface(0, 1), e.l));
    if (!ne_sub(lhs, rhs).is_zero())
        return {false, "gauge-compatibility"};
    if (s.levels.size() >= 3) {
        NilpotentElement c = bch(ne_push(s.coface(0, 2), e.m),
            bch(ne_scale(rat(-1), ne_push(s.coface(1, 2), e.m)), ne_push(s.coface(2, 2), e.m)));
        if (!c.is_zero())
            return {false, "cocycle"};
    }
    return {true, ""};
}

ConditionResult z1sc_equiv(const ScDGLA& s, const Z1Element& e0, const Z1Element& e1,
                           const NilpotentElement& a)
{
    require_nonnegative(s);
    if (a.carrier != s.levels.at(0) || a.degree != 0)
        throw CarrierMismatch("equivalence witness must have degree 0 in g_0");
    if (!ne_sub(gauge(a, e0.l), e1.l).is_zero())
        return {false, "gauge-on-l"};
    NilpotentElement c = bch(ne_scale(rat(-1), e0.m),
        bch(ne_scale(rat(-1), ne_push(s.coface(1, 1), a)),
            bch(e1.m, ne_push(s.coface(0, 1), a))));
    if (!c.is_zero())
        return {false, "bch-on-m"};
    return {true, ""};
}

int h1sc_first_order(const ScDGLA& s)
{
    require_nonnegative(s);
    int N = static_cast<int>(s.levels.size());
    const DGLA& g0 = *s.levels[0];
    int n0 = g0.space.dim(0);
    int n1 = g0.space.dim(1);
    int n2 = N >= 2 ? s.levels[1]->space.dim(0) : 0;
    int r1 = g0.space.dim(2);
    int r2 = N >= 2 ? s.levels[1]->space.dim(1) : 0;
    int r3 = N >= 3 ? s.levels[2]->space.dim(0) : 0;

    // cocycle conditions: dl = 0; del_1 l - del_0 l + dm = 0;
    // (del_0 - del_1 + del_2) m = 0
    SparseMatrix M(r1 + r2 + r3, n1 + n2);
    M.insert_block(0, 0, g0.d.block(1));
    if (N >= 2) {
        SparseMatrix c = s.coface(1, 1).map.block(1) - s.coface(0, 1).map.block(1);
        M.insert_block(r1, 0, c);
        M.insert_block(r1, n1, s.levels[1]->d.block(0));
    }
    if (N >= 3) {
        SparseMatrix c = s.coface(0, 2).map.block(0) - s.coface(1, 2).map.block(0)
            + s.coface(2, 2).map.block(0);
        M.insert_block(r1 + r2, n1, c);
    }
    int zdim = n1 + n2 - rank(M);

    // linearized equivalence a |-> (-da, (del_1 - del_0) a)
    SparseMatrix E(n1 + n2, n0);
    E.insert_block(0, 0, g0.d.block(0).scaled(rat(-1)));
    if (N >= 2)
        E.insert_block(n1, 0, s.coface(1, 1).map.block(0) - s.coface(0, 1).map.block(0));
    int dim = zdim - rank(E);

    auto h = cohomology(total_complex(s));
    int via_total = h.count(1) ? h.at(1).dim : 0;
    if (dim != via_total)
        throw InternalCheckFailure("first-order class count disagrees with the total complex");
    return dim;
}

SparseMatrix action_matrix(const ModuleAction& rho, const NilpotentElement& w)
{
    if (w.carrier != rho.algebra)
        throw CarrierMismatch("element does not live in the acting algebra");
    if (w.degree != 0)
        throw DegreeError("module action is defined in degree 0");
    if (static_cast<int>(rho.action.size()) != rho.algebra->space.dim(0))
        throw ShapeMismatch("one action matrix per degree-0 basis element required");
    const ArtinAlgebra& A = *w.algebra;
    int slots = A.dim() + 1; // slot 0 = unit of A
    int dim = rho.module_dim * slots;
    SparseMatrix out(dim, dim);
    for (const auto& [key, c] : w.c) {
        const SparseMatrix& act = rho.action[key.first];
        if (act.rows() != rho.module_dim || act.cols() != rho.module_dim)
            throw ShapeMismatch("action matrix has wrong shape");
        int k = key.second;
        for (const auto& [rc, v] : act.entries()) {
            // on v (x) 1
            out.add_to(rc.first * slots + 1 + k, rc.second * slots, c * v);
            // on v (x) m_j
            for (int j = 0; j < A.dim(); ++j)
                for (const auto& [t, cm] : A.mul(k, j))
                    out.add_to(rc.first * slots + 1 + t, rc.second * slots + 1 + j, c * v * cm);
        }
    }
    return out;
}

SparseMatrix exp_matrix(const SparseMatrix& n)
{
    if (n.rows() != n.cols())
        throw ShapeMismatch("exponential of a non-square matrix");
    SparseMatrix out = SparseMatrix::identity(n.rows());
    SparseMatrix term = n;
    int k = 1;
    while (!term.is_zero()) {
        if (k > n.rows() + 1)
            throw BadParams("matrix exponential of a non-nilpotent matrix");
        out = out + term.scaled(rat(1) / [&] {
            Rational f = rat(1);
            for (int i = 2; i <= k; ++i)
                f *= rat(i);
            return f;
        }());
        term = term * n;
        ++k;
    }
    return out;
}

namespace {

SparseMatrix gamma_span(const ModuleAction& rho, const std::vector<SparseVector>& gamma, int slots)
{
    std::vector<SparseVector> cols;
    for (const auto& g : gamma)
        for (int s = 0; s < slots; ++s) {
            SparseVector v;
            for (const auto& [i, c] : g)
                v[i * slots + s] = c;
            cols.push_back(std::move(v));
        }
    return SparseMatrix::from_columns(cols, rho.module_dim * slots);
}

} // namespace

bool total_groupoid_object_check(const ModuleAction& rho, const std::vector<SparseVector>& gamma,
                                 const NilpotentElement& w)
{
    int slots = w.algebra->dim() + 1;
    SparseMatrix G = gamma_span(rho, gamma, slots);
    SparseMatrix E = exp_matrix(action_matrix(rho, w));
    return rank_increase(G, E * G) == 0;
}

bool total_groupoid_morphism_check(const ModuleAction& rho, const NilpotentElement& w,
                                   const NilpotentElement& t, const NilpotentElement& ha,
                                   const NilpotentElement& ga)
{
    SparseMatrix lhs = exp_matrix(action_matrix(rho, w)) * exp_matrix(action_matrix(rho, ha));
    SparseMatrix rhs = exp_matrix(action_matrix(rho, t)) * exp_matrix(action_matrix(rho, ga));
    return lhs == rhs;
}

} // namespace deform

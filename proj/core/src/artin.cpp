#include "deform/artin.hpp"

#include "deform/errors.hpp"

namespace deform {

namespace {

void require_compatible(const NilpotentElement& a, const NilpotentElement& b)
{
    if (a.carrier != b.carrier)
        throw CarrierMismatch("elements over different dgLas");
    if (a.algebra != b.algebra)
        throw BaseMismatch("elements over different base algebras");
}

// mono -> coefficient in the carrier
std::map<int, Element> by_monomial(const NilpotentElement& a)
{
    std::map<int, Element> out;
    for (const auto& [key, v] : a.c) {
        auto& e = out[key.second];
        if (e.c.empty())
            e.degree = a.degree;
        e.c[key.first] = v;
    }
    return out;
}

void add_term(NilpotentElement& out, int mono, const Element& e)
{
    for (const auto& [i, v] : e.c) {
        auto key = std::make_pair(i, mono);
        auto it = out.c.find(key);
        if (it == out.c.end()) {
            out.c[key] = v;
        } else {
            it->second += v;
            if (is_zero(it->second))
                out.c.erase(it);
        }
    }
}

Rational factorial(int n)
{
    Rational f = rat(1);
    for (int i = 2; i <= n; ++i)
        f *= rat(i);
    return f;
}

} // namespace

SparseVector ArtinAlgebra::mul(int i, int j) const
{
    if (i > j)
        std::swap(i, j);
    auto it = mult.find({i, j});
    return it == mult.end() ? SparseVector{} : it->second;
}

ArtinPtr make_artin(ArtinKind kind, int n)
{
    auto a = std::make_shared<ArtinAlgebra>();
    switch (kind) {
    case ArtinKind::dual_numbers:
        a->name = "K[e]/(e^2)";
        a->m_basis = {"e"};
        a->order = {1};
        a->nilpotency_order = 2;
        break;
    case ArtinKind::truncated_poly: {
        if (n < 2)
            throw BadParams("truncated polynomial algebra needs n >= 2");
        a->name = "K[t]/(t^" + std::to_string(n) + ")";
        for (int k = 1; k < n; ++k) {
            a->m_basis.push_back(k == 1 ? "t" : "t^" + std::to_string(k));
            a->order.push_back(k);
        }
        for (int i = 0; i < n - 1; ++i)
            for (int j = i; j < n - 1; ++j)
                if (i + j + 2 <= n - 1)
                    a->mult[{i, j}] = SparseVector{{i + j + 1, rat(1)}};
        a->nilpotency_order = n;
        break;
    }
    case ArtinKind::truncated_two_vars: {
        if (n < 2)
            throw BadParams("truncated two-variable algebra needs n >= 2");
        a->name = "K[x,y]/(x,y)^" + std::to_string(n);
        // x^p y^q, 1 <= p+q <= n-1, ordered by total degree then x-exponent
        // descending
        std::map<std::pair<int, int>, int> index;
        auto mono_name = [](int p, int q) {
            std::string s;
            if (p == 1)
                s += "x";
            else if (p > 1)
                s += "x^" + std::to_string(p);
            if (q == 1)
                s += "y";
            else if (q > 1)
                s += "y^" + std::to_string(q);
            return s;
        };
        for (int d = 1; d < n; ++d)
            for (int p = d; p >= 0; --p) {
                index[{p, d - p}] = static_cast<int>(a->m_basis.size());
                a->m_basis.push_back(mono_name(p, d - p));
                a->order.push_back(d);
            }
        int m = static_cast<int>(a->m_basis.size());
        std::vector<std::pair<int, int>> exps(m);
        for (const auto& [pq, i] : index)
            exps[i] = pq;
        for (int i = 0; i < m; ++i)
            for (int j = i; j < m; ++j) {
                int p = exps[i].first + exps[j].first;
                int q = exps[i].second + exps[j].second;
                if (p + q <= n - 1)
                    a->mult[{i, j}] = SparseVector{{index.at({p, q}), rat(1)}};
            }
        a->nilpotency_order = n;
        break;
    }
    }
    return a;
}

ValidationReport validate_artin(const ArtinAlgebra& a)
{
    ValidationReport rep;
    int m = a.dim();
    auto mul_vec = [&](const SparseVector& v, int k) {
        SparseVector out;
        for (const auto& [i, c] : v)
            out = sv_add(out, sv_scale(c, a.mul(i, k)));
        return out;
    };
    for (int i = 0; i < m; ++i)
        for (int j = i; j < m; ++j) {
            SparseVector p = a.mul(i, j);
            if (a.order[i] + a.order[j] >= a.nilpotency_order && !sv_is_zero(p))
                rep.issues.push_back({"nilpotency", a.m_basis[i] + "*" + a.m_basis[j]});
            for (const auto& [k, c] : p) {
                (void)c;
                if (a.order[k] != a.order[i] + a.order[j])
                    rep.issues.push_back({"grading", a.m_basis[i] + "*" + a.m_basis[j]});
            }
            for (int k = j; k < m; ++k) {
                // (e_i e_j) e_k = e_i (e_j e_k)
                SparseVector lhs = mul_vec(a.mul(i, j), k);
                SparseVector rhs;
                for (const auto& [l, c] : a.mul(j, k))
                    rhs = sv_add(rhs, sv_scale(c, a.mul(i, l)));
                if (!sv_is_zero(sv_sub(lhs, rhs)))
                    rep.issues.push_back({"associativity",
                        a.m_basis[i] + "," + a.m_basis[j] + "," + a.m_basis[k]});
            }
        }
    return rep;
}

NilpotentElement ne_zero(const DGLAPtr& L, const ArtinPtr& A, int degree)
{
    return NilpotentElement{L, A, degree, {}};
}

NilpotentElement ne_term(const DGLAPtr& L, const ArtinPtr& A, int degree, int l_index, int mono, const Rational& coeff)
{
    NilpotentElement out{L, A, degree, {}};
    if (l_index < 0 || l_index >= L->space.dim(degree))
        throw BadParams("basis index out of range");
    if (mono < 0 || mono >= A->dim())
        throw BadParams("monomial index out of range");
    if (!is_zero(coeff))
        out.c[{l_index, mono}] = coeff;
    return out;
}

NilpotentElement ne_from_element(const DGLAPtr& L, const ArtinPtr& A, const Element& x, int mono)
{
    NilpotentElement out{L, A, x.degree, {}};
    if (mono < 0 || mono >= A->dim())
        throw BadParams("monomial index out of range");
    for (const auto& [i, v] : x.c)
        out.c[{i, mono}] = v;
    return out;
}

NilpotentElement ne_add(const NilpotentElement& a, const NilpotentElement& b)
{
    require_compatible(a, b);
    if (a.is_zero())
        return b;
    if (b.is_zero())
        return a;
    if (a.degree != b.degree)
        throw DegreeError("sum of elements of different degrees");
    NilpotentElement out = a;
    for (const auto& [key, v] : b.c) {
        auto it = out.c.find(key);
        if (it == out.c.end()) {
            out.c[key] = v;
        } else {
            it->second += v;
            if (is_zero(it->second))
                out.c.erase(it);
        }
    }
    return out;
}

NilpotentElement ne_sub(const NilpotentElement& a, const NilpotentElement& b)
{
    return ne_add(a, ne_scale(rat(-1), b));
}

NilpotentElement ne_scale(const Rational& s, const NilpotentElement& a)
{
    NilpotentElement out{a.carrier, a.algebra, a.degree, {}};
    if (is_zero(s))
        return out;
    for (const auto& [key, v] : a.c)
        out.c[key] = s * v;
    return out;
}

NilpotentElement ne_d(const NilpotentElement& a)
{
    NilpotentElement out{a.carrier, a.algebra, a.degree + 1, {}};
    for (const auto& [mono, e] : by_monomial(a))
        add_term(out, mono, a.carrier->diff(e));
    return out;
}

NilpotentElement ne_bracket(const NilpotentElement& a, const NilpotentElement& b)
{
    require_compatible(a, b);
    const ArtinAlgebra& A = *a.algebra;
    NilpotentElement out{a.carrier, a.algebra, a.degree + b.degree, {}};
    auto am = by_monomial(a);
    auto bm = by_monomial(b);
    for (const auto& [m1, ea] : am)
        for (const auto& [m2, eb] : bm) {
            SparseVector prod = A.mul(m1, m2);
            if (sv_is_zero(prod))
                continue;
            Element br = a.carrier->bracket(ea, eb);
            if (br.is_zero())
                continue;
            for (const auto& [m3, cm] : prod)
                add_term(out, m3, el_scale(cm, br));
        }
    return out;
}

NilpotentElement ne_order_part(const NilpotentElement& a, int ord)
{
    NilpotentElement out{a.carrier, a.algebra, a.degree, {}};
    for (const auto& [key, v] : a.c)
        if (a.algebra->order[key.second] == ord)
            out.c[key] = v;
    return out;
}

Element ne_monomial_coefficient(const NilpotentElement& a, int mono)
{
    Element out{a.degree, {}};
    for (const auto& [key, v] : a.c)
        if (key.second == mono)
            out.c[key.first] = v;
    return out;
}

NilpotentElement ne_push(const DGLAMorphism& f, const NilpotentElement& a)
{
    if (f.source != a.carrier)
        throw CarrierMismatch("morphism source does not match the element carrier");
    NilpotentElement out{f.target, a.algebra, a.degree, {}};
    for (const auto& [mono, e] : by_monomial(a))
        add_term(out, mono, f.apply(e));
    return out;
}

NilpotentElement mc_residual(const NilpotentElement& x)
{
    if (x.degree != 1)
        throw DegreeError("Maurer-Cartan elements have degree 1");
    return ne_add(ne_d(x), ne_scale(rat(1, 2), ne_bracket(x, x)));
}

NilpotentElement bch(const NilpotentElement& a, const NilpotentElement& b)
{
    require_compatible(a, b);
    if (a.degree != 0 || b.degree != 0)
        throw DegreeError("bch is defined on degree-0 elements");
    if (a.algebra->nilpotency_order > 5)
        throw UnsupportedOrder("bch supports nilpotency order <= 5");
    NilpotentElement ab = ne_bracket(a, b);
    NilpotentElement out = ne_add(a, b);
    out = ne_add(out, ne_scale(rat(1, 2), ab));
    out = ne_add(out, ne_scale(rat(1, 12), ne_bracket(a, ab)));
    out = ne_sub(out, ne_scale(rat(1, 12), ne_bracket(b, ab)));
    out = ne_sub(out, ne_scale(rat(1, 24), ne_bracket(b, ne_bracket(a, ab))));
    return out;
}

NilpotentElement gauge(const NilpotentElement& a, const NilpotentElement& x)
{
    require_compatible(a, x);
    if (a.degree != 0)
        throw DegreeError("gauge parameter must have degree 0");
    if (x.degree != 1)
        throw DegreeError("gauge acts on degree-1 elements");
    NilpotentElement out = x;
    NilpotentElement z = ne_sub(ne_bracket(a, x), ne_d(a));
    int n = 0;
    while (!z.is_zero()) {
        if (n >= a.algebra->nilpotency_order)
            throw InternalCheckFailure("gauge series failed to terminate");
        out = ne_add(out, ne_scale(rat(1) / factorial(n + 1), z));
        z = ne_bracket(a, z);
        ++n;
    }
    return out;
}

ObstructionResult primary_obstruction(const NilpotentElement& x1)
{
    const ArtinAlgebra& A = *x1.algebra;
    if (A.dim() != 1 || A.nilpotency_order != 2)
        throw BadParams("primary obstruction is taken over the dual numbers");
    if (x1.degree != 1)
        throw DegreeError("first-order deformations have degree 1");
    Element xbar = ne_monomial_coefficient(x1, 0);
    if (!x1.carrier->diff(xbar).is_zero())
        throw NotFirstOrderMC("d x != 0 over the dual numbers");

    ObstructionResult res;
    res.rep = el_scale(rat(1, 2), x1.carrier->bracket(xbar, xbar));
    CochainComplex cx = complex_of(*x1.carrier);
    auto h = cohomology(cx);
    auto cls = class_in_basis(cx, h, 2, res.rep.c);
    if (!cls)
        throw InternalCheckFailure("obstruction cocycle is not closed");
    res.cohomology_class = *cls;
    res.vanishes = sv_is_zero(res.cohomology_class);
    auto lift = solve(cx.differential.block(1), sv_scale(rat(-1), res.rep.c));
    if (lift)
        res.second_order_lift = Element{1, *lift};
    return res;
}

FirstOrderClasses first_order_classes(const DGLAPtr& L)
{
    auto eps = make_artin(ArtinKind::dual_numbers);
    CochainComplex cx = complex_of(*L);
    auto h = cohomology(cx);
    FirstOrderClasses out;
    auto it = h.find(1);
    if (it == h.end())
        return out;
    out.dim = it->second.dim;
    for (const auto& rep : it->second.representatives)
        out.representatives.push_back(ne_from_element(L, eps, Element{1, rep}, 0));
    return out;
}

std::optional<NilpotentElement> gauge_equivalent(const NilpotentElement& x, const NilpotentElement& y)
{
    require_compatible(x, y);
    const ArtinAlgebra& A = *x.algebra;
    if (A.nilpotency_order > 3)
        throw UnsupportedOrder("gauge_equivalent supports nilpotency order <= 3");
    if (x.degree != 1 || y.degree != 1)
        throw DegreeError("gauge equivalence is between degree-1 elements");

    // With m^3 = 0 the condition gauge(a, x) = y is equivalent to the linear
    // system -da + [a, (x + y)/2] = y - x in the unknown a.
    const DGLA& L = *x.carrier;
    int l0 = L.space.dim(0);
    int l1 = L.space.dim(1);
    int m = A.dim();
    NilpotentElement h = ne_scale(rat(1, 2), ne_add(x, y));
    auto linear = [&](const NilpotentElement& a) {
        return ne_add(ne_scale(rat(-1), ne_d(a)), ne_bracket(a, h));
    };
    SparseMatrix mat(l1 * m, l0 * m);
    for (int i = 0; i < l0; ++i)
        for (int mono = 0; mono < m; ++mono) {
            NilpotentElement img = linear(ne_term(x.carrier, x.algebra, 0, i, mono, rat(1)));
            for (const auto& [key, v] : img.c)
                mat.set(key.first * m + key.second, i * m + mono, v);
        }
    SparseVector rhs;
    for (const auto& [key, v] : ne_sub(y, x).c)
        rhs[key.first * m + key.second] = v;
    auto sol = solve(mat, rhs);
    if (!sol)
        return std::nullopt;
    NilpotentElement a{x.carrier, x.algebra, 0, {}};
    for (const auto& [idx, v] : *sol)
        a.c[{idx / m, idx % m}] = v;
    if (!ne_sub(gauge(a, x), y).is_zero())
        throw InternalCheckFailure("gauge witness does not act as computed");
    return a;
}

NilpotentElement irrelevant_stabilizer(const NilpotentElement& x, const NilpotentElement& u)
{
    require_compatible(x, u);
    if (x.degree != 1)
        throw DegreeError("stabilized element must have degree 1");
    if (u.degree != -1)
        throw DegreeError("stabilizer parameter must have degree -1");
    if (!mc_residual(x).is_zero())
        throw HypothesisViolated("irrelevant stabilizer of a non-Maurer-Cartan element");
    NilpotentElement a = ne_add(ne_d(u), ne_bracket(x, u));
    if (!ne_sub(gauge(a, x), x).is_zero())
        throw InternalCheckFailure("du + [x,u] does not stabilize x");
    return a;
}

} // namespace deform

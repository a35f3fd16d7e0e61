#include "deform/polyform.hpp"

#include "deform/errors.hpp"

namespace deform {

namespace {

void add_t(PolyFormElement& x, int k, const Element& a)
{
    if (a.is_zero())
        return;
    auto it = x.t_part.find(k);
    if (it == x.t_part.end())
        x.t_part[k] = a;
    else {
        it->second = el_add(it->second, a);
        if (it->second.is_zero())
            x.t_part.erase(it);
    }
}

void add_dt(PolyFormElement& x, int k, const Element& a)
{
    if (a.is_zero())
        return;
    auto it = x.dt_part.find(k);
    if (it == x.dt_part.end())
        x.dt_part[k] = a;
    else {
        it->second = el_add(it->second, a);
        if (it->second.is_zero())
            x.dt_part.erase(it);
    }
}

void require_same_base(const PolyFormElement& x, const PolyFormElement& y)
{
    if (x.base != y.base)
        throw BaseMismatch("polynomial forms over different dgLas");
}

} // namespace

bool PolyFormElement::is_zero() const
{
    return t_part.empty() && dt_part.empty();
}

PolyFormElement poly_constant(const DGLAPtr& base, const Element& a)
{
    return poly_t_term(base, 0, a);
}

PolyFormElement poly_t_term(const DGLAPtr& base, int k, const Element& a)
{
    PolyFormElement x{base, a.degree, {}, {}};
    add_t(x, k, a);
    return x;
}

PolyFormElement poly_dt_term(const DGLAPtr& base, int k, const Element& a)
{
    PolyFormElement x{base, a.degree + 1, {}, {}};
    add_dt(x, k, a);
    return x;
}

PolyFormElement poly_add(const PolyFormElement& x, const PolyFormElement& y)
{
    require_same_base(x, y);
    if (x.is_zero())
        return y;
    if (y.is_zero())
        return x;
    if (x.degree != y.degree)
        throw DegreeError("sum of polynomial forms of different degrees");
    PolyFormElement out = x;
    for (const auto& [k, a] : y.t_part)
        add_t(out, k, a);
    for (const auto& [k, a] : y.dt_part)
        add_dt(out, k, a);
    return out;
}

PolyFormElement poly_scale(const Rational& c, const PolyFormElement& x)
{
    PolyFormElement out{x.base, x.degree, {}, {}};
    if (is_zero(c))
        return out;
    for (const auto& [k, a] : x.t_part)
        out.t_part[k] = el_scale(c, a);
    for (const auto& [k, a] : x.dt_part)
        out.dt_part[k] = el_scale(c, a);
    return out;
}

Element poly_eval(const PolyFormElement& x, const Rational& t0)
{
    Element out{x.degree, {}};
    for (const auto& [k, a] : x.t_part) {
        Rational p = rat(1);
        for (int i = 0; i < k; ++i)
            p *= t0;
        out = el_add(out, el_scale(p, a));
    }
    return out;
}

PolyFormElement poly_d(const PolyFormElement& x)
{
    const DGLA& L = *x.base;
    PolyFormElement out{x.base, x.degree + 1, {}, {}};
    for (const auto& [k, a] : x.t_part) {
        add_t(out, k, L.diff(a));
        if (k > 0) {
            Rational s = (a.degree % 2 == 0) ? rat(k) : rat(-k);
            add_dt(out, k - 1, el_scale(s, a));
        }
    }
    for (const auto& [k, a] : x.dt_part)
        add_dt(out, k, L.diff(a));
    return out;
}

PolyFormElement poly_bracket(const PolyFormElement& x, const PolyFormElement& y)
{
    require_same_base(x, y);
    const DGLA& L = *x.base;
    PolyFormElement out{x.base, x.degree + y.degree, {}, {}};
    for (const auto& [k, a] : x.t_part)
        for (const auto& [j, b] : y.t_part)
            add_t(out, k + j, L.bracket(a, b));
    for (const auto& [k, a] : x.t_part)
        for (const auto& [j, b] : y.dt_part)
            add_dt(out, k + j, L.bracket(a, b));
    for (const auto& [k, a] : x.dt_part)
        for (const auto& [j, b] : y.t_part) {
            // Koszul sign: t^k dt moved past b
            Rational s = (b.degree % 2 == 0) ? rat(1) : rat(-1);
            add_dt(out, k + j, el_scale(s, L.bracket(a, b)));
        }
    // dt * dt = 0
    return out;
}

bool htpy_fiber_check(const DGLAMorphism& h, const DGLAMorphism& g, const HtpyFiberElement& e)
{
    if (!(h.target->space == g.target->space))
        throw BaseMismatch("morphisms do not share a target");
    if (e.m.base != h.target)
        throw BaseMismatch("polynomial form not over the common target");
    Element at0 = poly_eval(e.m, rat(0));
    Element at1 = poly_eval(e.m, rat(1));
    return el_sub(at0, h.apply(e.l)).is_zero() && el_sub(at1, g.apply(e.n)).is_zero();
}

} // namespace deform

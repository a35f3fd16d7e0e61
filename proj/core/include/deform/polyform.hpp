#ifndef DEFORM_POLYFORM_HPP
#define DEFORM_POLYFORM_HPP

#include "deform/dgla.hpp"

namespace deform {

// Element of L[t,dt] for a dgLa L: finitely many coefficients of t^k and
// t^k dt. The element is homogeneous of `degree`; t coefficients live in
// degree `degree`, dt coefficients in degree `degree - 1` (dt has degree 1).
struct PolyFormElement {
    DGLAPtr base;
    int degree = 0;
    std::map<int, Element> t_part;  // k -> coefficient of t^k
    std::map<int, Element> dt_part; // k -> coefficient of t^k dt

    bool is_zero() const;
};

PolyFormElement poly_constant(const DGLAPtr& base, const Element& a);
PolyFormElement poly_t_term(const DGLAPtr& base, int k, const Element& a);
PolyFormElement poly_dt_term(const DGLAPtr& base, int k, const Element& a);

PolyFormElement poly_add(const PolyFormElement& x, const PolyFormElement& y);
PolyFormElement poly_scale(const Rational& c, const PolyFormElement& x);

// Substitutes t = t0 and dt = 0; linear in x.
Element poly_eval(const PolyFormElement& x, const Rational& t0);

// d(a t^k) = (da) t^k + (-1)^{deg a} k a t^{k-1} dt; the Koszul sign makes
// d^2 = 0 hold (checked by property tests).
PolyFormElement poly_d(const PolyFormElement& x);

PolyFormElement poly_bracket(const PolyFormElement& x, const PolyFormElement& y);

// Element of the homotopy fibre product L x_M N: boundary conditions
// m(0) = h(l), m(1) = g(n).
struct HtpyFiberElement {
    Element l;
    Element n;
    PolyFormElement m;
};

bool htpy_fiber_check(const DGLAMorphism& h, const DGLAMorphism& g, const HtpyFiberElement& e);

} // namespace deform

#endif

#ifndef DEFORM_ARTIN_HPP
#define DEFORM_ARTIN_HPP

#include "deform/dgla.hpp"

namespace deform {

// Finite-dimensional local K-algebra, represented by a basis of its maximal
// ideal and the multiplication table on that basis. The residue field part
// is implicit (monomials of order zero never appear).
struct ArtinAlgebra {
    std::string name;
    std::vector<std::string> m_basis;
    std::vector<int> order; // m-adic order of each monomial
    std::map<std::pair<int, int>, SparseVector> mult; // i <= j -> product (absent = 0)
    int nilpotency_order = 2; // least N with m^N = 0

    int dim() const { return static_cast<int>(m_basis.size()); }
    SparseVector mul(int i, int j) const;
};

using ArtinPtr = std::shared_ptr<const ArtinAlgebra>;

enum class ArtinKind { dual_numbers, truncated_poly, truncated_two_vars };

// dual_numbers: K[e]/(e^2); truncated_poly: K[t]/(t^n);
// truncated_two_vars: K[x,y]/(x,y)^n.
ArtinPtr make_artin(ArtinKind kind, int n = 2);

// Associativity, commutativity and the nilpotency bound, checked on the table.
ValidationReport validate_artin(const ArtinAlgebra& a);

// Homogeneous element of L tensor m_A, keyed by (L basis index, monomial).
struct NilpotentElement {
    DGLAPtr carrier;
    ArtinPtr algebra;
    int degree = 0;
    std::map<std::pair<int, int>, Rational> c;

    bool is_zero() const { return c.empty(); }
};

NilpotentElement ne_zero(const DGLAPtr& L, const ArtinPtr& A, int degree);
NilpotentElement ne_term(const DGLAPtr& L, const ArtinPtr& A, int degree, int l_index, int mono, const Rational& coeff);
// first-order element x (tensor) mono
NilpotentElement ne_from_element(const DGLAPtr& L, const ArtinPtr& A, const Element& x, int mono);

NilpotentElement ne_add(const NilpotentElement& a, const NilpotentElement& b);
NilpotentElement ne_sub(const NilpotentElement& a, const NilpotentElement& b);
NilpotentElement ne_scale(const Rational& s, const NilpotentElement& a);
NilpotentElement ne_d(const NilpotentElement& a);
NilpotentElement ne_bracket(const NilpotentElement& a, const NilpotentElement& b);

// Part of the element supported on monomials of the given m-adic order.
NilpotentElement ne_order_part(const NilpotentElement& a, int ord);
// Coefficient of one monomial, as an element of the carrier.
Element ne_monomial_coefficient(const NilpotentElement& a, int mono);

// Pushes the element through a dgLa morphism (same algebra).
NilpotentElement ne_push(const DGLAMorphism& f, const NilpotentElement& a);

// dx + (1/2)[x,x]; zero iff x is Maurer-Cartan.
NilpotentElement mc_residual(const NilpotentElement& x);

// Baker-Campbell-Hausdorff product, exact through word length 4; supports
// nilpotency order <= 5.
NilpotentElement bch(const NilpotentElement& a, const NilpotentElement& b);

// e^a * x = x + sum ad_a^n/(n+1)! ([a,x] - da); the series terminates by
// nilpotency.
NilpotentElement gauge(const NilpotentElement& a, const NilpotentElement& x);

struct ObstructionResult {
    Element rep;                 // (1/2)[x1,x1] in the carrier, degree 2
    SparseVector cohomology_class; // coordinates in the H^2 representative basis
    bool vanishes = false;
    std::optional<Element> second_order_lift; // x2 with d x2 = -rep, when it exists
};

// Primary obstruction of a first-order deformation (over the dual numbers).
ObstructionResult primary_obstruction(const NilpotentElement& x1);

struct FirstOrderClasses {
    int dim = 0;
    std::vector<NilpotentElement> representatives; // MC over dual numbers
};

FirstOrderClasses first_order_classes(const DGLAPtr& L);

// Order-by-order solve for a with gauge(a, x) = y; supported for nilpotency
// order <= 3. The witness is re-verified before being returned.
std::optional<NilpotentElement> gauge_equivalent(const NilpotentElement& x, const NilpotentElement& y);

// a = du + [x,u]; gauge(a, x) = x is asserted after computation.
NilpotentElement irrelevant_stabilizer(const NilpotentElement& x, const NilpotentElement& u);

} // namespace deform

#endif

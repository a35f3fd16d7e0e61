#ifndef DEFORM_DGLA_HPP
#define DEFORM_DGLA_HPP

#include <memory>
#include <optional>
#include <set>
#include <string>
#include <tuple>
#include <vector>

#include "deform/graded.hpp"

namespace deform {

// Homogeneous element of a graded space: coefficients over the basis of one
// degree component.
struct Element {
    int degree = 0;
    SparseVector c;

    bool is_zero() const { return c.empty(); }
};

Element el_add(const Element& a, const Element& b);
Element el_sub(const Element& a, const Element& b);
Element el_scale(const Rational& s, const Element& a);

// Differential graded Lie algebra given by structure constants. Brackets are
// stored for ordered basis pairs (da,ia) <= (db,ib) only; the other half is
// reconstructed through graded skew-symmetry. A pair may be marked undefined
// (window-truncated sheaf models); using such a pair in an element bracket
// raises WindowOverflow, and identity checks skip (and count) those tuples.
class DGLA {
public:
    GradedVectorSpace space;
    GradedMap d; // shift +1, endomap of `space`

    using Key = std::tuple<int, int, int, int>; // (da, ia, db, ib)

    void set_bracket(int da, int ia, int db, int ib, const SparseVector& value);
    void mark_bracket_undefined(int da, int ia, int db, int ib);

    // nullopt = undefined (truncated); empty vector = zero.
    std::optional<SparseVector> bracket_basis(int da, int ia, int db, int ib) const;

    Element zero(int degree) const { return Element{degree, {}}; }
    Element basis_element(int degree, int index) const;

    Element diff(const Element& a) const;
    Element bracket(const Element& a, const Element& b) const; // throws WindowOverflow

    bool bracket_is_trivial() const { return structure_.empty() && undefined_.empty(); }

    const std::map<Key, SparseVector>& structure() const { return structure_; }
    const std::set<Key>& undefined_pairs() const { return undefined_; }

private:
    std::map<Key, SparseVector> structure_;
    std::set<Key> undefined_;
};

using DGLAPtr = std::shared_ptr<const DGLA>;

struct ValidationIssue {
    std::string identity; // e.g. "jacobi", "leibniz", "skew", "d_squared"
    std::string where;    // offending basis tuple
};

struct ValidationReport {
    std::vector<ValidationIssue> issues;
    int skipped_overflow = 0;

    bool ok() const { return issues.empty(); }
};

// Machine-checks d^2 = 0, graded skew-symmetry (the diagonal cases not fixed
// by storage), the graded Jacobi identity on all basis triples and the graded
// Leibniz rule on all basis pairs.
ValidationReport validate_dgla(const DGLA& g);

struct DGLAMorphism {
    DGLAPtr source;
    DGLAPtr target;
    GradedMap map; // shift 0

    Element apply(const Element& a) const { return Element{a.degree, map.apply(a.degree, a.c)}; }
};

// Commutation with differentials and bracket preservation on basis pairs.
ValidationReport validate_morphism(const DGLAMorphism& f);

DGLAMorphism identity_morphism(const DGLAPtr& g);
DGLAMorphism zero_morphism(const DGLAPtr& src, const DGLAPtr& tgt);

// The underlying cochain complex of a dgLa.
CochainComplex complex_of(const DGLA& g);

// Direct sum of complexes; labels are prefixed "a:" / "b:".
CochainComplex complex_direct_sum(const CochainComplex& a, const CochainComplex& b);

// Mapping cone of (l,n) -> h(l) - g(n) for chain maps h: L -> M, g: N -> M.
// Degree-p component is L^p + N^p + M^{p-1}; differential sends (l,n,m) to
// (dl, dn, h(l) - g(n) - dm). Quasi-isomorphic model for the cohomology of
// the homotopy fibre product of (h, g).
CochainComplex mapping_cone(const CochainComplex& L, const CochainComplex& N,
                            const CochainComplex& M, const GradedMap& h, const GradedMap& g);

// Same, from dgLa morphisms with a common target.
CochainComplex mapping_cone(const DGLAMorphism& h, const DGLAMorphism& g);

// Projection cone -> L + N, a degree-0 chain map.
GradedMap cone_projection(const CochainComplex& cone, const CochainComplex& LplusN);

// gl(n) with the commutator bracket, concentrated in degree 0.
DGLAPtr make_matrix_dgla(int n);

// Abelian dgLa on the given space with the given differential.
DGLAPtr make_abelian_dgla(GradedVectorSpace space, GradedMap d);

} // namespace deform

#endif

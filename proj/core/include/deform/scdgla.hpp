#ifndef DEFORM_SCDGLA_HPP
#define DEFORM_SCDGLA_HPP

#include "deform/artin.hpp"

namespace deform {

// Semicosimplicial dgLa g_0 => g_1 =>> g_2 ...: levels and, for each
// i = 1..N, coface morphisms del_{k,i}: g_{i-1} -> g_i, k = 0..i.
struct ScDGLA {
    std::vector<DGLAPtr> levels;
    std::vector<std::vector<DGLAMorphism>> cofaces; // cofaces[i-1][k] = del_{k,i}

    const DGLAMorphism& coface(int k, int i) const;
};

// Checks each coface is a dgLa morphism with the right endpoints and the
// cosimplicial identities del_{k+1,i+1} del_{l,i} = del_{l,i+1} del_{k,i}
// for k >= l.
ValidationReport validate_scdgla(const ScDGLA& s);

// Total complex: degree-p component (+)_n g_n^{p-n}, differential
// D = sum_n (-1)^n d_n + sum_k (-1)^k del_{k,i}. Throws InvalidSc when the
// result is not a complex. Labels are prefixed "g<n>:".
CochainComplex total_complex(const ScDGLA& s);

// Total complex together with the block layout: (total degree, level) ->
// start index of that level's component.
struct TotalComplex {
    CochainComplex cx;
    std::map<std::pair<int, int>, int> offset;
};

TotalComplex total_complex_full(const ScDGLA& s);

// Chain map between total complexes assembled from levelwise degree-0 maps
// f_n: src level n -> dst level n (one per level, commuting with cofaces).
GradedMap total_map(const ScDGLA& src, const TotalComplex& tsrc, const ScDGLA& dst,
                    const TotalComplex& tdst, const std::vector<GradedMap>& level_maps);

// (l, m) with l of degree 1 in g_0 (x) m_A and m of degree 0 in g_1 (x) m_A.
struct Z1Element {
    NilpotentElement l;
    NilpotentElement m;
};

struct ConditionResult {
    bool ok = true;
    std::string violated; // empty when ok
};

// The three membership conditions for Z^1_sc: Maurer-Cartan for l, the gauge
// compatibility del_{1,1} l = e^m * del_{0,1} l, and the BCH cocycle
// del_{0,2} m . -del_{1,2} m . del_{2,2} m = 0. Requires all levels in
// non-negative degrees (throws Unsupported otherwise).
ConditionResult z1sc_check(const ScDGLA& s, const Z1Element& e);

// Equivalence witness test: e^a * l_0 = l_1 and
// -m_0 . -del_{1,1} a . m_1 . del_{0,1} a = 0, for a of degree 0 in
// g_0 (x) m_A.
ConditionResult z1sc_equiv(const ScDGLA& s, const Z1Element& e0, const Z1Element& e1,
                           const NilpotentElement& a);

// Dimension of Z^1_sc over the dual numbers modulo linearized equivalence,
// computed directly from the coface and differential blocks; asserted equal
// to dim H^1 of the total complex.
int h1sc_first_order(const ScDGLA& s);

// Linear action of a degree-0 dgLa on a finite-dimensional module V: one
// matrix per degree-0 basis element.
struct ModuleAction {
    DGLAPtr algebra;
    int module_dim = 0;
    std::vector<SparseMatrix> action;
};

// Matrix of rho(w) on V (x) A (unit monomial included), for w of degree 0.
SparseMatrix action_matrix(const ModuleAction& rho, const NilpotentElement& w);

// Exponential of a nilpotent matrix; throws BadParams when the series does
// not terminate.
SparseMatrix exp_matrix(const SparseMatrix& n);

// Object condition of the total groupoid for the two-level diagram of a
// morphism of free sheaves: e^w must map the graph module gamma (x) A into
// itself. gamma is given by spanning vectors in V coordinates.
bool total_groupoid_object_check(const ModuleAction& rho, const std::vector<SparseVector>& gamma,
                                 const NilpotentElement& w);

// Morphism condition e^w e^{h(a)} = e^t e^{g(a)}, with h(a), g(a) already
// pushed into the acting algebra.
bool total_groupoid_morphism_check(const ModuleAction& rho, const NilpotentElement& w,
                                   const NilpotentElement& t, const NilpotentElement& ha,
                                   const NilpotentElement& ga);

} // namespace deform

#endif

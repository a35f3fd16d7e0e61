#ifndef DEFORM_SHEAF_HPP
#define DEFORM_SHEAF_HPP

#include <array>
#include <functional>

#include "deform/scdgla.hpp"

namespace deform {

// Laurent polynomial over Q: exponent -> coefficient. Windows truncate the
// exponent range; products leaving a window are hard errors, never silently
// truncated.
using LaurentPoly = SparseVector;

LaurentPoly lp_monomial(int exp, const Rational& c = rat(1));
LaurentPoly lp_mul(const LaurentPoly& a, const LaurentPoly& b); // unbounded
bool lp_in_window(const LaurentPoly& a, int lo, int hi);

// Dense matrix with Laurent entries, used for transition matrices and local
// section computations. All products are exact and unbounded; windows are
// enforced at encode time.
using RingMatrix = std::vector<std::vector<LaurentPoly>>;

RingMatrix rm_zero(int rows, int cols);
RingMatrix rm_identity(int n);
RingMatrix rm_mul(const RingMatrix& a, const RingMatrix& b);
RingMatrix rm_add(const RingMatrix& a, const RingMatrix& b);
RingMatrix rm_sub(const RingMatrix& a, const RingMatrix& b);
RingMatrix rm_scale(const Rational& c, const RingMatrix& a);
bool rm_is_zero(const RingMatrix& a);
int rm_max_abs_exp(const RingMatrix& a);

// Two-chart model of P^1: charts Spec K[z], Spec K[1/z]; every section is
// written in the z coordinate, so chart-1 sections have exponents <= 0 and
// the overlap ring is the Laurent window [-D, D].
struct CoverModel {
    int D = 1;

    int overlap_dim() const { return 2 * D + 1; }
};

CoverModel make_p1_cover(int D); // throws BadWindow for D < 1

// Restriction of an overlap-bound expression into the window [-D, D].
LaurentPoly restrict_to_overlap(const CoverModel& c, const LaurentPoly& a); // throws WindowOverflow

// Locally free sheaf by its transition matrix on the overlap: sections
// satisfy s_0 = g01 s_1 in the z coordinate.
struct SheafPresentation {
    CoverModel cover;
    int rank = 1;
    RingMatrix g01;
    RingMatrix g10; // inverse of g01
    std::string name;
};

// g01 g10 = 1 (exact, unbounded arithmetic).
ValidationReport validate_sheaf(const SheafPresentation& e);

// O(d): g01 = z^d, so global sections are polynomials of degree <= d.
SheafPresentation make_line_bundle(int d, const CoverModel& cover);
SheafPresentation trivial_sheaf(int rank, const CoverModel& cover);
SheafPresentation sheaf_direct_sum(const SheafPresentation& a, const SheafPresentation& b);

// Hom(F, G) with components indexed by (p, q) -> p * rank(F) + q; transitions
// act by phi |-> g01^G phi g10^F.
SheafPresentation hom_sheaf(const SheafPresentation& f, const SheafPresentation& g);
SheafPresentation end_sheaf(const SheafPresentation& e);

// Morphism alpha: F -> G by chart matrices (rank(G) x rank(F)); compatible
// when a0 g01^F = g01^G a1 on the overlap.
struct SheafMorphismPresentation {
    SheafPresentation source;
    SheafPresentation target;
    RingMatrix a0;
    RingMatrix a1;
};

ValidationReport validate_sheaf_morphism(const SheafMorphismPresentation& m);

struct GlobalSection {
    std::vector<LaurentPoly> s0, s1; // chart expressions; s0 = g01 s1
};

// Deterministic basis of H^0 computed from the windowed Cech kernel.
std::vector<GlobalSection> global_sections(const SheafPresentation& e);

// Kept basis of windowed sections over one simplex: pairs (component,
// exponent). Chart bases are pruned so that every restriction into the
// overlap window stays representable.
struct SectionBasis {
    std::vector<std::pair<int, int>> vecs;
    std::map<std::pair<int, int>, int> pos;

    int dim() const { return static_cast<int>(vecs.size()); }
    int index_of(int comp, int exp) const;
};

RingMatrix decode_section(const SectionBasis& b, int rows, int cols, const SparseVector& v);
std::optional<SparseVector> encode_section(const SectionBasis& b, int cols, const RingMatrix& m);

// Windowed Cech complex of a sheaf: degree 0 = chart sections (chart 0 then
// chart 1), degree 1 = overlap sections; differential r(s1) - r(s0).
struct CechModel {
    SheafPresentation sheaf;
    int D = 0;
    std::array<SectionBasis, 3> basis; // chart 0, chart 1, overlap
    CochainComplex complex;
};

CechModel cech_model(const SheafPresentation& e, int D);

struct CechCohomology {
    int h0 = 0, h1 = 0;
    bool stable = false;
    CechModel model; // at window cover.D
    std::vector<SparseVector> h0_reps, h1_reps;
};

// Cohomology at the cover window, with the stability check at D and D+1;
// throws WindowUnstable when the dimensions disagree.
CechCohomology cech_cohomology(const SheafPresentation& e);
std::pair<int, int> cech_dims(const SheafPresentation& e, int D);

// (a cup s)_{01} = a_{01} . s restricted to the overlap, as an overlap
// section of E (unbounded; encode against a model to window it).
std::vector<LaurentPoly> cup_cochain(const RingMatrix& a01, const GlobalSection& s);

// Cech sc dgLa of End(E): two levels (charts, overlap) plus a zero third
// level; brackets are commutators with window-truncated pairs marked
// undefined.
struct EndScModel {
    CechModel model; // End(E)
    int r = 1;       // rank of E
    ScDGLA sc;
};

EndScModel build_end_sc(const SheafPresentation& e, int D);

// Coherent system (E, U): independent gluing global sections.
struct CoherentSystem {
    SheafPresentation e;
    std::vector<GlobalSection> u;
};

ValidationReport validate_coherent_system(const CoherentSystem& sys);

// Chart matrices of s: U (x) O -> E (columns = the sections of u).
RingMatrix system_s0(const CoherentSystem& sys);
RingMatrix system_s1(const CoherentSystem& sys);

// Cech sc dgLa of the two-term sheaf of dgLas Hom(Q, Q) for
// Q: U (x) O -> E: degree 0 = End(U (x) O) + End(E), degree 1 =
// Hom(U (x) O, E), differential (p, q) -> s p - q s.
struct QScModel {
    CoherentSystem sys;
    int D = 0;
    int k = 0; // dim U
    std::array<SectionBasis, 3> u_basis, e_basis, hom_basis;
    ScDGLA sc;
};

QScModel hom_complex_qq(const CoherentSystem& sys, int D);

// The kernel of Hom(Q,Q) -> End(E): degree 0 = End(U (x) O), degree 1 =
// Hom(U (x) O, E), differential p -> s p.
struct MDeltaModel {
    int D = 0;
    std::array<SectionBasis, 3> u_basis, hom_basis;
    ScDGLA sc;
};

MDeltaModel build_mdelta_sc(const CoherentSystem& sys, int D);

// Per-simplex basis of the graph subalgebra L(alpha) = kernel of
// phi = (a,b,c,d) |-> c + d alpha - alpha a - alpha b alpha inside
// End(F + G), in ambient kept-basis coordinates.
struct GraphSubalgebra {
    CechModel ambient; // End(F + G)
    std::array<std::vector<SparseVector>, 3> basis;
};

GraphSubalgebra graph_subalgebra_L(const SheafMorphismPresentation& alpha, int D);

// Everything needed by the morphism-deformation pipeline: the Cech sc dgLas
// of L(alpha), End(F) + End(G) and End(F + G), the levelwise chain maps h
// (inclusion) and g (block diagonal), and the coker-h model Hom(F, G) with
// the maps pi . g and the c-block section of pi.
struct MorphismModel {
    SheafMorphismPresentation alpha;
    int D = 0;
    int rf = 1, rg = 1;
    ScDGLA scL, scN, scM;
    std::array<std::vector<SparseVector>, 3> l_basis; // kernel vectors, M coords
    std::array<SectionBasis, 3> nf_basis, ng_basis, m_basis, hom_basis;
    std::vector<GradedMap> h_levels, g_levels; // between level spaces
    CochainComplex hom_complex;                // coker h model
    std::vector<SparseMatrix> pig;             // per level: N -> Hom, psi a - a phi
    std::vector<SparseMatrix> cembed;          // per level: Hom -> M, c-block
};

MorphismModel build_morphism_model(const SheafMorphismPresentation& alpha, int D);

} // namespace deform

#endif

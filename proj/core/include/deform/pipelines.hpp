#ifndef DEFORM_PIPELINES_HPP
#define DEFORM_PIPELINES_HPP

#include "deform/sheaf.hpp"

namespace deform {

// One node of an exact-sequence verification table: exact iff the incoming
// rank equals the kernel dimension of the outgoing map and the composite
// through the node vanishes.
struct SequenceNode {
    std::string name;
    int dim = 0;
    int rank_in = 0;
    int ker_out = 0;
    bool composite_zero = true;

    bool exact() const { return rank_in == ker_out && composite_zero; }
};

// Controlling cohomology of a morphism alpha: F -> G: the cone model of the
// homotopy fibre of (h, g) on Cech total complexes, the flanking terms, and
// the six-term exactness table.
struct MorphismReport {
    int D = 0;
    std::array<int, 3> h_tot{};   // H^i of the cone
    std::array<int, 3> h_n{};     // H^i(End F + End G)
    std::array<int, 2> h_coker{}; // H^i(coker h) = H^i(Hom(F, G))
    std::vector<SequenceNode> sequence;
    bool exact = true;
    bool stable = true;

    bool pass() const { return exact && stable; }
};

MorphismReport deform_morphism_report(const SheafMorphismPresentation& alpha, int D);

// The nine-term sequence for a pair (E, U):
// 0 -> H0(Tot) -> H0(End E) -> Hom(U, H0(E)/U) -> H1(Tot) -> H1(End E)
//   -> Hom(U, H1(E)) -> H2(Tot) -> H2(End E) -> Hom(U, H2(E)).
struct PairEUReport {
    int D = 0;
    int k = 0;
    int h0_e = 0, h1_e = 0;
    int h0_end = 0, h1_end = 0;
    std::array<int, 3> h_tot{};
    int tangent = 0; // = h_tot[1]
    int dim_hom_u_quot = 0; // dim Hom(U, H0(E)/U)
    int dim_hom_u_h1 = 0;   // dim Hom(U, H1(E))
    SparseMatrix alpha_matrix; // H1(End E) -> Hom(U, H1(E)) by cup products
    std::vector<SequenceNode> sequence;
    bool exact = true;
    bool stable = true;

    bool pass() const { return exact && stable; }
};

PairEUReport pair_EU_report(const CoherentSystem& sys, int D);

// Total cohomology of m^Delta against its closed form
// (0, dim Hom(U, H0(E)/U), dim Hom(U, H1(E))).
struct MDeltaReport {
    int D = 0;
    std::array<int, 3> h{};
    std::array<int, 3> expected{};
    bool stable = true;

    bool pass() const { return h == expected && stable; }
};

MDeltaReport m_delta_check(const CoherentSystem& sys, int D);

// First-order extension of a section along a deformation direction
// a in C^1(End E): a lift exists iff cup(a, s) = 0 in H^1(E), and the
// constructed corrections are re-verified by substitution.
struct SectionExtension {
    bool lifts = false;
    std::vector<LaurentPoly> sigma0, sigma1; // chart corrections (witness)
    SparseVector obstruction_class;          // H^1(E) coordinates (certificate)
    bool verified = false;
};

SectionExtension section_extension(const SheafPresentation& e, const RingMatrix& a01,
                                   const GlobalSection& s, int D);

// Tangent-cone facts for Def^k: for h0 = k the linear tangent space
// {a : a cup s = 0 for all s in H0}; for h0 >= k + 1 the kernel-dimension
// membership criterion for a probe class.
struct DefkResult {
    int k = 0;
    int h0 = 0;
    int h1_end = 0;
    bool exact_case = false; // h0 == k
    int tangent_dim = 0;
    std::vector<SparseVector> tangent_basis; // H^1(End E) coordinates
    bool probe_given = false;
    bool probe_in_cone = false;
    int probe_kernel_dim = 0;
    int span_dim = 0; // span of the cone = H^1(End E) when nonempty
};

DefkResult defk_tangent(const SheafPresentation& e, int k,
                        const std::optional<RingMatrix>& probe_a01, int D);

// Sufficient hypotheses only; no independent smoothness claim.
struct SmoothnessFlags {
    int D = 0;
    bool hom_u_h1_vanishes = false;
    bool h2_tot_vanishes = false;
    std::string r_u;      // "smooth" or "criterion inapplicable"
    std::string def_pair; // likewise
    std::string def_e;    // likewise
};

SmoothnessFlags smoothness_flags(const CoherentSystem& sys, int D);

} // namespace deform

#endif

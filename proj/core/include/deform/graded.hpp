#ifndef DEFORM_GRADED_HPP
#define DEFORM_GRADED_HPP

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "deform/linalg.hpp"

namespace deform {

// Finitely supported degree-indexed basis lists. Basis labels are unique
// within each degree.
struct GradedVectorSpace {
    std::map<int, std::vector<std::string>> components;

    int dim(int n) const
    {
        auto it = components.find(n);
        return it == components.end() ? 0 : static_cast<int>(it->second.size());
    }

    int total_dim() const
    {
        int t = 0;
        for (const auto& [n, b] : components)
            t += static_cast<int>(b.size());
        return t;
    }

    std::vector<int> degrees() const
    {
        std::vector<int> out;
        for (const auto& [n, b] : components)
            if (!b.empty())
                out.push_back(n);
        return out;
    }

    const std::string& label(int n, int i) const;
    int index_of(int n, const std::string& label) const; // throws UnknownLabel

    bool operator==(const GradedVectorSpace& rhs) const { return components == rhs.components; }
};

// Degree-homogeneous linear map: block at source degree n maps into target
// degree n + degree_shift.
struct GradedMap {
    GradedVectorSpace source;
    GradedVectorSpace target;
    int degree_shift = 0;
    std::map<int, SparseMatrix> blocks; // keyed by source degree

    GradedMap() = default;
    GradedMap(GradedVectorSpace src, GradedVectorSpace tgt, int shift)
        : source(std::move(src)), target(std::move(tgt)), degree_shift(shift)
    {
    }

    static GradedMap zero(const GradedVectorSpace& src, const GradedVectorSpace& tgt, int shift)
    {
        return GradedMap(src, tgt, shift);
    }

    SparseMatrix block(int n) const; // zero matrix of the right shape when absent
    void set_block(int n, SparseMatrix m); // shape-checked

    SparseVector apply(int n, const SparseVector& v) const { return block(n).apply(v); }

    // this ∘ inner
    GradedMap compose(const GradedMap& inner) const;

    GradedMap operator+(const GradedMap& rhs) const;
    GradedMap scaled(const Rational& c) const;

    bool is_zero() const;
    bool operator==(const GradedMap& rhs) const;
};

// Cochain complex with a degree +1 differential; d^2 = 0 is checked by
// check_complex, not assumed.
struct CochainComplex {
    GradedVectorSpace space;
    GradedMap differential;
};

// True iff every composite block d_{n+1} d_n vanishes.
bool check_complex(const CochainComplex& c);

struct CohomologyDegree {
    int dim = 0;
    std::vector<SparseVector> representatives; // cocycles in C^n coordinates
};

// Cohomology with deterministic representatives: kernel vectors from the
// echelon rule, taken in order, keeping those that increase rank modulo the
// image of the previous differential. Throws NotAComplex when d^2 != 0.
std::map<int, CohomologyDegree> cohomology(const CochainComplex& c);

// Coordinates of a closed vector's class in the representative basis of
// H^n(c); nullopt when the input is not closed or not expressible.
std::optional<SparseVector> class_in_basis(const CochainComplex& c,
                                           const std::map<int, CohomologyDegree>& h,
                                           int n, const SparseVector& cocycle);

// Matrix of the map induced on H^n by a degree-0 chain map f, in the
// representative bases chosen by cohomology().
SparseMatrix induced_map(const CochainComplex& src, const std::map<int, CohomologyDegree>& hsrc,
                         const CochainComplex& dst, const std::map<int, CohomologyDegree>& hdst,
                         const GradedMap& f, int n);

} // namespace deform

#endif

#include "deform/graded.hpp"

#include <algorithm>

#include "deform/errors.hpp"

namespace deform {

const std::string& GradedVectorSpace::label(int n, int i) const
{
    auto it = components.find(n);
    if (it == components.end() || i < 0 || i >= static_cast<int>(it->second.size()))
        throw UnknownLabel("no basis element " + std::to_string(i) + " in degree " + std::to_string(n));
    return it->second[i];
}

int GradedVectorSpace::index_of(int n, const std::string& lbl) const
{
    auto it = components.find(n);
    if (it != components.end()) {
        auto pos = std::find(it->second.begin(), it->second.end(), lbl);
        if (pos != it->second.end())
            return static_cast<int>(pos - it->second.begin());
    }
    throw UnknownLabel("label '" + lbl + "' not in degree " + std::to_string(n));
}

SparseMatrix GradedMap::block(int n) const
{
    auto it = blocks.find(n);
    if (it != blocks.end())
        return it->second;
    return SparseMatrix(target.dim(n + degree_shift), source.dim(n));
}

void GradedMap::set_block(int n, SparseMatrix m)
{
    if (m.rows() != target.dim(n + degree_shift) || m.cols() != source.dim(n))
        throw ShapeMismatch("block at degree " + std::to_string(n) + " has shape " + std::to_string(m.rows()) + "x" + std::to_string(m.cols()) + ", expected " + std::to_string(target.dim(n + degree_shift)) + "x" + std::to_string(source.dim(n)));
    if (m.is_zero())
        blocks.erase(n);
    else
        blocks[n] = std::move(m);
}

GradedMap GradedMap::compose(const GradedMap& inner) const
{
    if (!(inner.target == source))
        throw ShapeMismatch("composition of maps with mismatched spaces");
    GradedMap out(inner.source, target, degree_shift + inner.degree_shift);
    for (int n : inner.source.degrees()) {
        SparseMatrix m = block(n + inner.degree_shift) * inner.block(n);
        if (!m.is_zero())
            out.set_block(n, std::move(m));
    }
    return out;
}

GradedMap GradedMap::operator+(const GradedMap& rhs) const
{
    if (!(source == rhs.source) || !(target == rhs.target) || degree_shift != rhs.degree_shift)
        throw ShapeMismatch("sum of maps with mismatched spaces or shifts");
    GradedMap out(source, target, degree_shift);
    for (int n : source.degrees()) {
        SparseMatrix m = block(n) + rhs.block(n);
        if (!m.is_zero())
            out.set_block(n, std::move(m));
    }
    return out;
}

GradedMap GradedMap::scaled(const Rational& c) const
{
    GradedMap out(source, target, degree_shift);
    for (const auto& [n, b] : blocks) {
        SparseMatrix m = b.scaled(c);
        if (!m.is_zero())
            out.set_block(n, std::move(m));
    }
    return out;
}

bool GradedMap::is_zero() const
{
    for (const auto& [n, b] : blocks)
        if (!b.is_zero())
            return false;
    return true;
}

bool GradedMap::operator==(const GradedMap& rhs) const
{
    if (!(source == rhs.source) || !(target == rhs.target) || degree_shift != rhs.degree_shift)
        return false;
    for (int n : source.degrees())
        if (block(n) != rhs.block(n))
            return false;
    return true;
}

bool check_complex(const CochainComplex& c)
{
    const GradedMap& d = c.differential;
    if (d.degree_shift != 1)
        throw ShapeMismatch("differential must have degree shift +1");
    for (int n : c.space.degrees()) {
        const SparseMatrix dn = d.block(n);
        if (dn.rows() != c.space.dim(n + 1) || dn.cols() != c.space.dim(n))
            throw ShapeMismatch("differential block at degree " + std::to_string(n));
        if (!(d.block(n + 1) * dn).is_zero())
            return false;
    }
    return true;
}

std::map<int, CohomologyDegree> cohomology(const CochainComplex& c)
{
    if (!check_complex(c))
        throw NotAComplex("d^2 != 0");
    std::map<int, CohomologyDegree> h;
    for (int n : c.space.degrees()) {
        const SparseMatrix dn = c.differential.block(n);
        const SparseMatrix dprev = c.differential.block(n - 1); // image = column span
        std::vector<SparseVector> ker = kernel_basis(dn);
        CohomologyDegree deg;
        // Incremental span: pivot row -> reduced vector. A kernel vector is
        // kept exactly when it increases the rank of [image | kept so far],
        // the same greedy rule as repeated rank computations.
        std::map<int, SparseVector> span;
        auto reduce_into = [&span](SparseVector v) -> bool {
            while (!v.empty()) {
                int lead = v.begin()->first;
                auto it = span.find(lead);
                if (it == span.end()) {
                    Rational inv = 1 / v.begin()->second;
                    span[lead] = sv_scale(inv, v);
                    return true;
                }
                v = sv_sub(v, sv_scale(v.begin()->second, it->second));
            }
            return false;
        };
        for (int col = 0; col < dprev.cols(); ++col)
            reduce_into(dprev.column(col));
        for (const SparseVector& k : ker)
            if (reduce_into(k))
                deg.representatives.push_back(k);
        deg.dim = static_cast<int>(deg.representatives.size());
        if (deg.dim > 0 || c.space.dim(n) > 0)
            h[n] = std::move(deg);
    }
    return h;
}

std::optional<SparseVector> class_in_basis(const CochainComplex& c,
                                           const std::map<int, CohomologyDegree>& h,
                                           int n, const SparseVector& cocycle)
{
    if (!sv_is_zero(c.differential.apply(n, cocycle)))
        return std::nullopt;
    auto it = h.find(n);
    std::vector<SparseVector> reps = it == h.end() ? std::vector<SparseVector>{} : it->second.representatives;
    SparseMatrix r = SparseMatrix::from_columns(reps, c.space.dim(n));
    SparseMatrix sys = SparseMatrix::hconcat(r, c.differential.block(n - 1));
    auto sol = solve(sys, cocycle);
    if (!sol)
        return std::nullopt;
    SparseVector cls;
    for (const auto& [i, v] : *sol)
        if (i < static_cast<int>(reps.size()))
            cls[i] = v;
    return cls;
}

SparseMatrix induced_map(const CochainComplex& src, const std::map<int, CohomologyDegree>& hsrc,
                         const CochainComplex& dst, const std::map<int, CohomologyDegree>& hdst,
                         const GradedMap& f, int n)
{
    auto its = hsrc.find(n);
    auto itd = hdst.find(n);
    const int sdim = its == hsrc.end() ? 0 : its->second.dim;
    const int ddim = itd == hdst.end() ? 0 : itd->second.dim;
    SparseMatrix out(ddim, sdim);
    for (int j = 0; j < sdim; ++j) {
        SparseVector img = f.apply(n, its->second.representatives[j]);
        auto cls = class_in_basis(dst, hdst, n, img);
        if (!cls)
            throw InternalCheckFailure("chain map image is not a cocycle in degree " + std::to_string(n));
        for (const auto& [i, v] : *cls)
            out.set(i, j, v);
    }
    return out;
}

} // namespace deform

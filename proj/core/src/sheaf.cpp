#include "deform/sheaf.hpp"

#include <algorithm>
#include <set>

#include "deform/errors.hpp"

namespace deform {

LaurentPoly lp_monomial(int exp, const Rational& c)
{
    LaurentPoly p;
    if (!is_zero(c))
        p[exp] = c;
    return p;
}

LaurentPoly lp_mul(const LaurentPoly& a, const LaurentPoly& b)
{
    LaurentPoly out;
    for (const auto& [ea, ca] : a)
        for (const auto& [eb, cb] : b)
            out[ea + eb] += ca * cb;
    for (auto it = out.begin(); it != out.end();)
        it = is_zero(it->second) ? out.erase(it) : std::next(it);
    return out;
}

bool lp_in_window(const LaurentPoly& a, int lo, int hi)
{
    for (const auto& [e, c] : a)
        if (!is_zero(c) && (e < lo || e > hi))
            return false;
    return true;
}

RingMatrix rm_zero(int rows, int cols)
{
    return RingMatrix(rows, std::vector<LaurentPoly>(cols));
}

RingMatrix rm_identity(int n)
{
    RingMatrix m = rm_zero(n, n);
    for (int i = 0; i < n; ++i)
        m[i][i] = lp_monomial(0);
    return m;
}

static void rm_shape_check(const RingMatrix& a, const RingMatrix& b, bool product)
{
    int ac = a.empty() ? 0 : static_cast<int>(a[0].size());
    if (product) {
        if (ac != static_cast<int>(b.size()))
            throw ShapeMismatch("ring matrix product shape");
    } else {
        int bc = b.empty() ? 0 : static_cast<int>(b[0].size());
        if (a.size() != b.size() || ac != bc)
            throw ShapeMismatch("ring matrix sum shape");
    }
}

RingMatrix rm_mul(const RingMatrix& a, const RingMatrix& b)
{
    rm_shape_check(a, b, true);
    int rows = static_cast<int>(a.size());
    int mid = static_cast<int>(b.size());
    int cols = b.empty() ? 0 : static_cast<int>(b[0].size());
    RingMatrix out = rm_zero(rows, cols);
    for (int i = 0; i < rows; ++i)
        for (int k = 0; k < mid; ++k) {
            if (a[i][k].empty())
                continue;
            for (int j = 0; j < cols; ++j) {
                if (b[k][j].empty())
                    continue;
                for (const auto& [e, c] : lp_mul(a[i][k], b[k][j]))
                    out[i][j][e] += c;
            }
        }
    for (auto& row : out)
        for (auto& p : row)
            for (auto it = p.begin(); it != p.end();)
                it = is_zero(it->second) ? p.erase(it) : std::next(it);
    return out;
}

RingMatrix rm_add(const RingMatrix& a, const RingMatrix& b)
{
    rm_shape_check(a, b, false);
    RingMatrix out = a;
    for (size_t i = 0; i < b.size(); ++i)
        for (size_t j = 0; j < b[i].size(); ++j) {
            for (const auto& [e, c] : b[i][j])
                out[i][j][e] += c;
            for (auto it = out[i][j].begin(); it != out[i][j].end();)
                it = is_zero(it->second) ? out[i][j].erase(it) : std::next(it);
        }
    return out;
}

RingMatrix rm_sub(const RingMatrix& a, const RingMatrix& b)
{
    return rm_add(a, rm_scale(rat(-1), b));
}

RingMatrix rm_scale(const Rational& c, const RingMatrix& a)
{
    RingMatrix out = a;
    for (auto& row : out)
        for (auto& p : row) {
            LaurentPoly q;
            for (const auto& [e, v] : p)
                if (!is_zero(c * v))
                    q[e] = c * v;
            p = std::move(q);
        }
    return out;
}

bool rm_is_zero(const RingMatrix& a)
{
    for (const auto& row : a)
        for (const auto& p : row)
            for (const auto& [e, c] : p)
                if (!is_zero(c))
                    return false;
    return true;
}

int rm_max_abs_exp(const RingMatrix& a)
{
    int m = 0;
    for (const auto& row : a)
        for (const auto& p : row)
            for (const auto& [e, c] : p)
                if (!is_zero(c))
                    m = std::max(m, std::abs(e));
    return m;
}

CoverModel make_p1_cover(int D)
{
    if (D < 1)
        throw BadWindow("overlap window requires D >= 1");
    return CoverModel{D};
}

LaurentPoly restrict_to_overlap(const CoverModel& c, const LaurentPoly& a)
{
    if (!lp_in_window(a, -c.D, c.D))
        throw WindowOverflow("section leaves the overlap window [-D, D]");
    return a;
}

ValidationReport validate_sheaf(const SheafPresentation& e)
{
    ValidationReport rep;
    if (e.cover.D < 1)
        rep.issues.push_back({"window", "D >= 1 required"});
    auto square = [&](const RingMatrix& m) {
        return static_cast<int>(m.size()) == e.rank
            && (m.empty() || static_cast<int>(m[0].size()) == e.rank);
    };
    if (e.rank < 1 || !square(e.g01) || !square(e.g10)) {
        rep.issues.push_back({"shape", "transition matrices must be rank x rank"});
        return rep;
    }
    RingMatrix id = rm_identity(e.rank);
    if (!rm_is_zero(rm_sub(rm_mul(e.g01, e.g10), id)))
        rep.issues.push_back({"inverse", "g01 g10"});
    if (!rm_is_zero(rm_sub(rm_mul(e.g10, e.g01), id)))
        rep.issues.push_back({"inverse", "g10 g01"});
    return rep;
}

SheafPresentation make_line_bundle(int d, const CoverModel& cover)
{
    SheafPresentation e;
    e.cover = cover;
    e.rank = 1;
    e.g01 = {{lp_monomial(d)}};
    e.g10 = {{lp_monomial(-d)}};
    e.name = "O(" + std::to_string(d) + ")";
    return e;
}

SheafPresentation trivial_sheaf(int rank, const CoverModel& cover)
{
    if (rank < 1)
        throw BadParams("sheaf rank must be positive");
    SheafPresentation e;
    e.cover = cover;
    e.rank = rank;
    e.g01 = rm_identity(rank);
    e.g10 = rm_identity(rank);
    e.name = rank == 1 ? "O" : "O^" + std::to_string(rank);
    return e;
}

SheafPresentation sheaf_direct_sum(const SheafPresentation& a, const SheafPresentation& b)
{
    if (a.cover.D != b.cover.D)
        throw CoverMismatch("direct sum over different covers");
    SheafPresentation e;
    e.cover = a.cover;
    e.rank = a.rank + b.rank;
    e.g01 = rm_zero(e.rank, e.rank);
    e.g10 = rm_zero(e.rank, e.rank);
    for (int i = 0; i < a.rank; ++i)
        for (int j = 0; j < a.rank; ++j) {
            e.g01[i][j] = a.g01[i][j];
            e.g10[i][j] = a.g10[i][j];
        }
    for (int i = 0; i < b.rank; ++i)
        for (int j = 0; j < b.rank; ++j) {
            e.g01[a.rank + i][a.rank + j] = b.g01[i][j];
            e.g10[a.rank + i][a.rank + j] = b.g10[i][j];
        }
    e.name = a.name + "+" + b.name;
    return e;
}

SheafPresentation hom_sheaf(const SheafPresentation& f, const SheafPresentation& g)
{
    if (f.cover.D != g.cover.D)
        throw CoverMismatch("Hom of sheaves over different covers");
    SheafPresentation e;
    e.cover = f.cover;
    e.rank = f.rank * g.rank;
    e.g01 = rm_zero(e.rank, e.rank);
    e.g10 = rm_zero(e.rank, e.rank);
    // phi_0 = g01^G phi_1 g10^F on components phi[p][q], p in G, q in F
    for (int p = 0; p < g.rank; ++p)
        for (int q = 0; q < f.rank; ++q)
            for (int p2 = 0; p2 < g.rank; ++p2)
                for (int q2 = 0; q2 < f.rank; ++q2) {
                    e.g01[p * f.rank + q][p2 * f.rank + q2] = lp_mul(g.g01[p][p2], f.g10[q2][q]);
                    e.g10[p * f.rank + q][p2 * f.rank + q2] = lp_mul(g.g10[p][p2], f.g01[q2][q]);
                }
    e.name = "Hom(" + f.name + "," + g.name + ")";
    return e;
}

SheafPresentation end_sheaf(const SheafPresentation& e)
{
    SheafPresentation h = hom_sheaf(e, e);
    h.name = "End(" + e.name + ")";
    return h;
}

ValidationReport validate_sheaf_morphism(const SheafMorphismPresentation& m)
{
    ValidationReport rep;
    if (m.source.cover.D != m.target.cover.D) {
        rep.issues.push_back({"cover", "source and target covers differ"});
        return rep;
    }
    auto shaped = [&](const RingMatrix& a) {
        return static_cast<int>(a.size()) == m.target.rank
            && (a.empty() || static_cast<int>(a[0].size()) == m.source.rank);
    };
    if (!shaped(m.a0) || !shaped(m.a1)) {
        rep.issues.push_back({"shape", "chart matrices must be rank(G) x rank(F)"});
        return rep;
    }
    if (!rm_is_zero(rm_sub(rm_mul(m.a0, m.source.g01), rm_mul(m.target.g01, m.a1))))
        rep.issues.push_back({"compatibility", "a0 g01^F != g01^G a1"});
    return rep;
}

int SectionBasis::index_of(int comp, int exp) const
{
    auto it = pos.find({comp, exp});
    return it == pos.end() ? -1 : it->second;
}

RingMatrix decode_section(const SectionBasis& b, int rows, int cols, const SparseVector& v)
{
    RingMatrix out = rm_zero(rows, cols);
    for (const auto& [idx, c] : v) {
        if (idx < 0 || idx >= b.dim())
            throw ShapeMismatch("section coordinate outside the kept basis");
        auto [comp, exp] = b.vecs[idx];
        out[comp / cols][comp % cols][exp] += c;
    }
    return out;
}

std::optional<SparseVector> encode_section(const SectionBasis& b, int cols, const RingMatrix& m)
{
    SparseVector out;
    for (size_t p = 0; p < m.size(); ++p)
        for (size_t q = 0; q < m[p].size(); ++q)
            for (const auto& [e, c] : m[p][q]) {
                if (is_zero(c))
                    continue;
                int idx = b.index_of(static_cast<int>(p) * cols + static_cast<int>(q), e);
                if (idx < 0)
                    return std::nullopt;
                out[idx] = c;
            }
    return out;
}

namespace {

std::string vec_label(const std::pair<int, int>& v)
{
    return "c" + std::to_string(v.first) + "z" + std::to_string(v.second);
}

struct BPiece {
    SheafPresentation sh;
    int rows = 1, cols = 1; // component index = p * cols + q
};

struct BMap {
    int src = 0, dst = 0;
    // concrete image at one simplex (0, 1 = charts, 2 = overlap), unbounded
    std::function<RingMatrix(int, const RingMatrix&)> f;
};

// Kept-basis fixpoint over the two-chart cover: candidate monomial sections
// are pruned until every restriction into the overlap window and every
// registered structural map stays inside the kept bases. Brackets are not
// constraints; they stay partial.
class Builder {
public:
    Builder(const CoverModel& cover, int pad) : cover_(cover), pad_(pad) {}

    int add_piece(const SheafPresentation& sh, int rows, int cols)
    {
        if (rows * cols != sh.rank)
            throw ShapeMismatch("piece shape does not match the sheaf rank");
        pieces_.push_back({sh, rows, cols});
        return static_cast<int>(pieces_.size()) - 1;
    }

    void add_map(int src, int dst, std::function<RingMatrix(int, const RingMatrix&)> f)
    {
        maps_.push_back({src, dst, std::move(f)});
    }

    const BPiece& piece(int p) const { return pieces_.at(p); }

    void run()
    {
        int D = cover_.D;
        keep_.assign(pieces_.size(), {});
        for (size_t p = 0; p < pieces_.size(); ++p)
            for (int comp = 0; comp < pieces_[p].sh.rank; ++comp) {
                for (int e = 0; e <= D + pad_; ++e)
                    keep_[p][0].insert({comp, e});
                for (int e = -D - pad_; e <= 0; ++e)
                    keep_[p][1].insert({comp, e});
                for (int e = -D; e <= D; ++e)
                    keep_[p][2].insert({comp, e});
            }
        bool changed = true;
        while (changed) {
            changed = false;
            for (size_t p = 0; p < pieces_.size(); ++p)
                for (int chart = 0; chart < 2; ++chart) {
                    auto snapshot = keep_[p][chart];
                    for (const auto& v : snapshot)
                        if (!terms_kept(restrict_terms(static_cast<int>(p), chart, v), p, 2)) {
                            keep_[p][chart].erase(v);
                            changed = true;
                        }
                }
            for (const BMap& m : maps_)
                for (int s = 0; s < 3; ++s) {
                    auto snapshot = keep_[m.src][s];
                    for (const auto& v : snapshot)
                        if (!terms_kept(map_terms(m, s, v), m.dst, s)) {
                            keep_[m.src][s].erase(v);
                            changed = true;
                        }
                }
        }
        basis_.assign(pieces_.size(), {});
        for (size_t p = 0; p < pieces_.size(); ++p)
            for (int s = 0; s < 3; ++s) {
                SectionBasis& b = basis_[p][s];
                for (const auto& v : keep_[p][s]) {
                    b.pos[v] = static_cast<int>(b.vecs.size());
                    b.vecs.push_back(v);
                }
            }
    }

    const SectionBasis& basis(int p, int s) const { return basis_.at(p).at(s); }

    SparseMatrix restriction_matrix(int p, int chart) const
    {
        const SectionBasis& src = basis(p, chart);
        const SectionBasis& dst = basis(p, 2);
        SparseMatrix out(dst.dim(), src.dim());
        for (int j = 0; j < src.dim(); ++j)
            for (const auto& [key, c] : restrict_terms(p, chart, src.vecs[j])) {
                int row = dst.index_of(key.first, key.second);
                if (row < 0)
                    throw InternalCheckFailure("kept section restricts outside the window");
                out.add_to(row, j, c);
            }
        return out;
    }

    SparseMatrix map_matrix(int mapIdx, int s) const
    {
        const BMap& m = maps_.at(mapIdx);
        const SectionBasis& src = basis(m.src, s);
        const SectionBasis& dst = basis(m.dst, s);
        SparseMatrix out(dst.dim(), src.dim());
        for (int j = 0; j < src.dim(); ++j)
            for (const auto& [key, c] : map_terms(m, s, src.vecs[j])) {
                int row = dst.index_of(key.first, key.second);
                if (row < 0)
                    throw InternalCheckFailure("kept section maps outside the kept basis");
                out.add_to(row, j, c);
            }
        return out;
    }

    // two-term Cech complex of one piece: charts in degree 0, overlap in 1
    CochainComplex cech_complex(int p) const
    {
        CochainComplex out;
        std::vector<std::string> c0;
        for (const auto& v : basis(p, 0).vecs)
            c0.push_back("V0:" + vec_label(v));
        for (const auto& v : basis(p, 1).vecs)
            c0.push_back("V1:" + vec_label(v));
        std::vector<std::string> c1;
        for (const auto& v : basis(p, 2).vecs)
            c1.push_back(vec_label(v));
        if (!c0.empty())
            out.space.components[0] = std::move(c0);
        if (!c1.empty())
            out.space.components[1] = std::move(c1);
        out.differential = GradedMap(out.space, out.space, 1);
        SparseMatrix d0 = SparseMatrix::hconcat(restriction_matrix(p, 0).scaled(rat(-1)),
                                                restriction_matrix(p, 1));
        if (out.space.dim(0) > 0)
            out.differential.set_block(0, std::move(d0));
        return out;
    }

    const CoverModel& cover() const { return cover_; }

private:
    using Terms = std::map<std::pair<int, int>, Rational>; // (comp, exp) -> coeff

    Terms restrict_terms(int p, int chart, const std::pair<int, int>& v) const
    {
        Terms out;
        if (chart == 0) {
            out[{v.first, v.second}] = rat(1);
            return out;
        }
        const SheafPresentation& sh = pieces_[p].sh;
        for (int c2 = 0; c2 < sh.rank; ++c2)
            for (const auto& [e, c] : sh.g01[c2][v.first])
                if (!is_zero(c))
                    out[{c2, v.second + e}] += c;
        return out;
    }

    Terms map_terms(const BMap& m, int s, const std::pair<int, int>& v) const
    {
        const BPiece& src = pieces_[m.src];
        const BPiece& dst = pieces_[m.dst];
        RingMatrix unit = rm_zero(src.rows, src.cols);
        unit[v.first / src.cols][v.first % src.cols] = lp_monomial(v.second);
        RingMatrix img = m.f(s, unit);
        if (static_cast<int>(img.size()) != dst.rows
            || (!img.empty() && static_cast<int>(img[0].size()) != dst.cols))
            throw ShapeMismatch("structural map image has the wrong shape");
        Terms out;
        for (int pp = 0; pp < dst.rows; ++pp)
            for (int q = 0; q < dst.cols; ++q)
                for (const auto& [e, c] : img[pp][q])
                    if (!is_zero(c))
                        out[{pp * dst.cols + q, e}] += c;
        return out;
    }

    bool terms_kept(const Terms& t, size_t p, int s) const
    {
        for (const auto& [key, c] : t)
            if (!is_zero(c) && keep_[p][s].find(key) == keep_[p][s].end())
                return false;
        return true;
    }

    CoverModel cover_;
    int pad_ = 0;
    std::vector<BPiece> pieces_;
    std::vector<BMap> maps_;
    std::vector<std::array<std::set<std::pair<int, int>>, 3>> keep_;
    std::vector<std::array<SectionBasis, 3>> basis_;
};

int transition_pad(const SheafPresentation& e)
{
    return std::max(rm_max_abs_exp(e.g01), rm_max_abs_exp(e.g10));
}

} // namespace

CechModel cech_model(const SheafPresentation& e, int D)
{
    ValidationReport v = validate_sheaf(e);
    if (!v.ok())
        throw BadParams("invalid sheaf presentation: " + v.issues.front().identity);
    CoverModel cover = make_p1_cover(D);
    Builder b(cover, transition_pad(e));
    int p = b.add_piece(e, e.rank, 1);
    b.run();
    CechModel out;
    out.sheaf = e;
    out.sheaf.cover = cover;
    out.D = D;
    out.basis = {b.basis(p, 0), b.basis(p, 1), b.basis(p, 2)};
    out.complex = b.cech_complex(p);
    return out;
}

std::pair<int, int> cech_dims(const SheafPresentation& e, int D)
{
    CechModel m = cech_model(e, D);
    int r = rank(m.complex.differential.block(0));
    return {m.complex.space.dim(0) - r, m.complex.space.dim(1) - r};
}

CechCohomology cech_cohomology(const SheafPresentation& e)
{
    int D = e.cover.D;
    auto here = cech_dims(e, D);
    auto next = cech_dims(e, D + 1);
    CechCohomology out;
    out.stable = here == next;
    if (!out.stable)
        throw WindowUnstable("cech dimensions move between windows D=" + std::to_string(D)
                             + " and D=" + std::to_string(D + 1));
    out.model = cech_model(e, D);
    auto h = cohomology(out.model.complex);
    out.h0 = h.count(0) ? h.at(0).dim : 0;
    out.h1 = h.count(1) ? h.at(1).dim : 0;
    if (std::pair<int, int>{out.h0, out.h1} != here)
        throw InternalCheckFailure("cohomology dims disagree with rank counts");
    if (h.count(0))
        out.h0_reps = h.at(0).representatives;
    if (h.count(1))
        out.h1_reps = h.at(1).representatives;
    return out;
}

std::vector<GlobalSection> global_sections(const SheafPresentation& e)
{
    CechCohomology c = cech_cohomology(e);
    const SectionBasis& b0 = c.model.basis[0];
    const SectionBasis& b1 = c.model.basis[1];
    std::vector<GlobalSection> out;
    for (const auto& rep : c.h0_reps) {
        GlobalSection s;
        s.s0.assign(e.rank, {});
        s.s1.assign(e.rank, {});
        for (const auto& [idx, v] : rep) {
            if (idx < b0.dim()) {
                auto [comp, exp] = b0.vecs[idx];
                s.s0[comp][exp] += v;
            } else {
                auto [comp, exp] = b1.vecs[idx - b0.dim()];
                s.s1[comp][exp] += v;
            }
        }
        out.push_back(std::move(s));
    }
    return out;
}

std::vector<LaurentPoly> cup_cochain(const RingMatrix& a01, const GlobalSection& s)
{
    RingMatrix col = rm_zero(static_cast<int>(s.s0.size()), 1);
    for (size_t i = 0; i < s.s0.size(); ++i)
        col[i][0] = s.s0[i];
    RingMatrix prod = rm_mul(a01, col);
    std::vector<LaurentPoly> out;
    for (const auto& row : prod)
        out.push_back(row[0]);
    return out;
}

ValidationReport validate_coherent_system(const CoherentSystem& sys)
{
    ValidationReport rep = validate_sheaf(sys.e);
    if (!rep.ok())
        return rep;
    if (sys.u.empty()) {
        rep.issues.push_back({"sections", "U must contain at least one section"});
        return rep;
    }
    for (size_t j = 0; j < sys.u.size(); ++j) {
        const GlobalSection& s = sys.u[j];
        if (static_cast<int>(s.s0.size()) != sys.e.rank
            || static_cast<int>(s.s1.size()) != sys.e.rank) {
            rep.issues.push_back({"shape", "section " + std::to_string(j)});
            return rep;
        }
        RingMatrix s1col = rm_zero(sys.e.rank, 1);
        for (int i = 0; i < sys.e.rank; ++i)
            s1col[i][0] = s.s1[i];
        RingMatrix glued = rm_mul(sys.e.g01, s1col);
        for (int i = 0; i < sys.e.rank; ++i)
            if (!rm_is_zero({{sv_sub(s.s0[i], glued[i][0])}}))
                rep.issues.push_back({"gluing", "section " + std::to_string(j)});
    }
    // independence of the chart-0 expressions over (component, exponent)
    std::map<std::pair<int, int>, int> rows;
    for (const GlobalSection& s : sys.u)
        for (int i = 0; i < sys.e.rank; ++i)
            for (const auto& [e2, c] : s.s0[i])
                if (!is_zero(c))
                    rows.emplace(std::pair<int, int>{i, e2}, 0);
    int nrows = 0;
    for (auto& [key, idx] : rows)
        idx = nrows++;
    SparseMatrix mat(nrows, static_cast<int>(sys.u.size()));
    for (size_t j = 0; j < sys.u.size(); ++j)
        for (int i = 0; i < sys.e.rank; ++i)
            for (const auto& [e2, c] : sys.u[j].s0[i])
                if (!is_zero(c))
                    mat.add_to(rows.at({i, e2}), static_cast<int>(j), c);
    if (rank(mat) != static_cast<int>(sys.u.size()))
        rep.issues.push_back({"independent", "sections of U are linearly dependent"});
    return rep;
}

RingMatrix system_s0(const CoherentSystem& sys)
{
    RingMatrix out = rm_zero(sys.e.rank, static_cast<int>(sys.u.size()));
    for (size_t j = 0; j < sys.u.size(); ++j)
        for (int i = 0; i < sys.e.rank; ++i)
            out[i][j] = sys.u[j].s0[i];
    return out;
}

RingMatrix system_s1(const CoherentSystem& sys)
{
    RingMatrix out = rm_zero(sys.e.rank, static_cast<int>(sys.u.size()));
    for (size_t j = 0; j < sys.u.size(); ++j)
        for (int i = 0; i < sys.e.rank; ++i)
            out[i][j] = sys.u[j].s1[i];
    return out;
}

namespace {

// Layout of an sc dgLa level built from graded pieces: level 0 concatenates
// chart 0 then chart 1 segments of every part, level 1 uses the overlap.
struct Part {
    int piece = 0;
    int degree = 0;
    std::string name;
};

struct ScLayout {
    const Builder* b = nullptr;
    std::vector<Part> parts;
    GradedVectorSpace sp0, sp1;
    std::map<std::tuple<int, int, int>, int> off0; // (degree, chart, part)
    std::map<std::pair<int, int>, int> off1;       // (degree, part)
    // reverse: degree -> flat index -> (chart, part, local index); chart 2 = overlap
    std::map<int, std::vector<std::tuple<int, int, int>>> rev0, rev1;

    void build()
    {
        std::set<int> degs;
        for (const auto& p : parts)
            degs.insert(p.degree);
        for (int n : degs) {
            std::vector<std::string> l0, l1;
            for (int chart = 0; chart < 2; ++chart)
                for (size_t pi = 0; pi < parts.size(); ++pi) {
                    if (parts[pi].degree != n)
                        continue;
                    off0[{n, chart, static_cast<int>(pi)}] = static_cast<int>(l0.size());
                    const SectionBasis& sb = b->basis(parts[pi].piece, chart);
                    for (int j = 0; j < sb.dim(); ++j) {
                        l0.push_back("V" + std::to_string(chart) + ":" + parts[pi].name + ":"
                                     + vec_label(sb.vecs[j]));
                        rev0[n].push_back({chart, static_cast<int>(pi), j});
                    }
                }
            for (size_t pi = 0; pi < parts.size(); ++pi) {
                if (parts[pi].degree != n)
                    continue;
                off1[{n, static_cast<int>(pi)}] = static_cast<int>(l1.size());
                const SectionBasis& sb = b->basis(parts[pi].piece, 2);
                for (int j = 0; j < sb.dim(); ++j) {
                    l1.push_back(parts[pi].name + ":" + vec_label(sb.vecs[j]));
                    rev1[n].push_back({2, static_cast<int>(pi), j});
                }
            }
            if (!l0.empty())
                sp0.components[n] = std::move(l0);
            if (!l1.empty())
                sp1.components[n] = std::move(l1);
        }
    }
};

struct DiffEntry {
    int mapIdx = 0;
    int srcPart = 0, dstPart = 0;
};

// concrete bracket of single parts; results in degree da + db
using BracketFn = std::function<std::vector<std::pair<int, RingMatrix>>(
    int partA, const RingMatrix& ma, int partB, const RingMatrix& mb)>;

RingMatrix unit_section(const Builder& b, int piece, int simplex, int vecIdx)
{
    const BPiece& bp = b.piece(piece);
    const auto& v = b.basis(piece, simplex).vecs.at(vecIdx);
    RingMatrix m = rm_zero(bp.rows, bp.cols);
    m[v.first / bp.cols][v.first % bp.cols] = lp_monomial(v.second);
    return m;
}

void fill_brackets(DGLA& g, const Builder& b, const ScLayout& lay, int level, const BracketFn& fn)
{
    const auto& rev = level == 0 ? lay.rev0 : lay.rev1;
    struct Flat {
        int deg, idx, chart, part, local;
    };
    std::vector<Flat> flat;
    for (const auto& [n, entries] : rev)
        for (size_t i = 0; i < entries.size(); ++i)
            flat.push_back({n, static_cast<int>(i), std::get<0>(entries[i]),
                            std::get<1>(entries[i]), std::get<2>(entries[i])});
    for (size_t i = 0; i < flat.size(); ++i)
        for (size_t j = i; j < flat.size(); ++j) {
            const Flat &a = flat[i], &bx = flat[j];
            if (a.chart != bx.chart)
                continue; // different charts: the bracket vanishes
            int simplex = level == 0 ? a.chart : 2;
            RingMatrix ma = unit_section(b, lay.parts[a.part].piece, simplex, a.local);
            RingMatrix mb = unit_section(b, lay.parts[bx.part].piece, simplex, bx.local);
            auto terms = fn(a.part, ma, bx.part, mb);
            SparseVector value;
            bool overflow = false;
            for (const auto& [pc, mat] : terms) {
                const Part& tp = lay.parts[pc];
                if (tp.degree != a.deg + bx.deg)
                    throw InternalCheckFailure("bracket term lands in the wrong degree");
                auto enc = encode_section(b.basis(tp.piece, simplex), b.piece(tp.piece).cols, mat);
                if (!enc) {
                    overflow = true;
                    break;
                }
                int off = level == 0 ? lay.off0.at({tp.degree, a.chart, pc})
                                     : lay.off1.at({tp.degree, pc});
                for (const auto& [k, c] : *enc)
                    value[off + k] += c;
            }
            if (overflow) {
                g.mark_bracket_undefined(a.deg, a.idx, bx.deg, bx.idx);
                continue;
            }
            for (auto it = value.begin(); it != value.end();)
                it = is_zero(it->second) ? value.erase(it) : std::next(it);
            if (!value.empty())
                g.set_bracket(a.deg, a.idx, bx.deg, bx.idx, value);
        }
}

GradedMap level_diff(const Builder& b, const ScLayout& lay, int level,
                     const std::vector<DiffEntry>& entries)
{
    const GradedVectorSpace& sp = level == 0 ? lay.sp0 : lay.sp1;
    GradedMap d(sp, sp, 1);
    for (int n : sp.degrees()) {
        SparseMatrix blk(sp.dim(n + 1), sp.dim(n));
        bool any = false;
        for (const DiffEntry& e : entries) {
            if (lay.parts[e.srcPart].degree != n)
                continue;
            any = true;
            if (level == 0) {
                for (int chart = 0; chart < 2; ++chart)
                    blk.insert_block(lay.off0.at({n + 1, chart, e.dstPart}),
                                     lay.off0.at({n, chart, e.srcPart}),
                                     b.map_matrix(e.mapIdx, chart));
            } else {
                blk.insert_block(lay.off1.at({n + 1, e.dstPart}), lay.off1.at({n, e.srcPart}),
                                 b.map_matrix(e.mapIdx, 2));
            }
        }
        if (any)
            d.set_block(n, std::move(blk));
    }
    return d;
}

// coface del_k: k = 0 restricts the chart-1 segments, k = 1 the chart-0 ones
GradedMap coface_map(const Builder& b, const ScLayout& lay, int k)
{
    int chart = k == 0 ? 1 : 0;
    GradedMap f(lay.sp0, lay.sp1, 0);
    for (int n : lay.sp0.degrees()) {
        SparseMatrix blk(lay.sp1.dim(n), lay.sp0.dim(n));
        for (size_t pi = 0; pi < lay.parts.size(); ++pi) {
            if (lay.parts[pi].degree != n)
                continue;
            blk.insert_block(lay.off1.at({n, static_cast<int>(pi)}),
                             lay.off0.at({n, chart, static_cast<int>(pi)}),
                             b.restriction_matrix(lay.parts[pi].piece, chart));
        }
        f.set_block(n, std::move(blk));
    }
    return f;
}

DGLAPtr zero_level()
{
    auto g = std::make_shared<DGLA>();
    g->d = GradedMap(g->space, g->space, 1);
    return g;
}

ScDGLA assemble_sc(const Builder& b, const ScLayout& lay, const std::vector<DiffEntry>& diffs,
                   const BracketFn& fn)
{
    auto g0 = std::make_shared<DGLA>();
    g0->space = lay.sp0;
    g0->d = level_diff(b, lay, 0, diffs);
    fill_brackets(*g0, b, lay, 0, fn);
    auto g1 = std::make_shared<DGLA>();
    g1->space = lay.sp1;
    g1->d = level_diff(b, lay, 1, diffs);
    fill_brackets(*g1, b, lay, 1, fn);
    DGLAPtr l0 = g0, l1 = g1, l2 = zero_level();
    ScDGLA sc;
    sc.levels = {l0, l1, l2};
    sc.cofaces = {{DGLAMorphism{l0, l1, coface_map(b, lay, 0)},
                   DGLAMorphism{l0, l1, coface_map(b, lay, 1)}},
                  {zero_morphism(l1, l2), zero_morphism(l1, l2), zero_morphism(l1, l2)}};
    return sc;
}

RingMatrix commutator(const RingMatrix& a, const RingMatrix& b)
{
    return rm_sub(rm_mul(a, b), rm_mul(b, a));
}

} // namespace

EndScModel build_end_sc(const SheafPresentation& e, int D)
{
    CoverModel cover = make_p1_cover(D);
    SheafPresentation w = end_sheaf(e);
    Builder b(cover, transition_pad(w));
    int pw = b.add_piece(w, e.rank, e.rank);
    b.run();
    ScLayout lay;
    lay.b = &b;
    lay.parts = {{pw, 0, "e"}};
    lay.build();
    BracketFn fn = [](int, const RingMatrix& ma, int, const RingMatrix& mb) {
        return std::vector<std::pair<int, RingMatrix>>{{0, commutator(ma, mb)}};
    };
    EndScModel out;
    out.r = e.rank;
    out.model.sheaf = w;
    out.model.sheaf.cover = cover;
    out.model.D = D;
    out.model.basis = {b.basis(pw, 0), b.basis(pw, 1), b.basis(pw, 2)};
    out.model.complex = b.cech_complex(pw);
    out.sc = assemble_sc(b, lay, {}, fn);
    return out;
}

QScModel hom_complex_qq(const CoherentSystem& sys, int D)
{
    ValidationReport v = validate_coherent_system(sys);
    if (!v.ok())
        throw BadParams("invalid coherent system: " + v.issues.front().identity);
    int k = static_cast<int>(sys.u.size());
    int r = sys.e.rank;
    CoverModel cover = make_p1_cover(D);
    SheafPresentation E = sys.e;
    E.cover = cover;
    SheafPresentation U = trivial_sheaf(k, cover);
    SheafPresentation endU = end_sheaf(U);
    SheafPresentation endE = end_sheaf(E);
    SheafPresentation homUE = hom_sheaf(U, E);
    RingMatrix s0 = system_s0(sys), s1 = system_s1(sys);
    auto s_at = [s0, s1](int simplex) { return simplex == 1 ? s1 : s0; };

    Builder b(cover, std::max(transition_pad(endE), rm_max_abs_exp(s0) + rm_max_abs_exp(s1)));
    int pu = b.add_piece(endU, k, k);
    int pe = b.add_piece(endE, r, r);
    int ph = b.add_piece(homUE, r, k);
    int mu = 0, me = 1;
    b.add_map(pu, ph, [s_at](int s, const RingMatrix& m) { return rm_mul(s_at(s), m); });
    b.add_map(pe, ph,
              [s_at](int s, const RingMatrix& m) { return rm_scale(rat(-1), rm_mul(m, s_at(s))); });
    b.run();

    ScLayout lay;
    lay.b = &b;
    lay.parts = {{pu, 0, "u"}, {pe, 0, "e"}, {ph, 1, "h"}};
    lay.build();
    BracketFn fn = [](int pa, const RingMatrix& ma, int pb, const RingMatrix& mb)
        -> std::vector<std::pair<int, RingMatrix>> {
        if (pa == pb && pa != 2)
            return {{pa, commutator(ma, mb)}};
        if (pa == 0 && pb == 2) // [(p, 0), l] = -l p
            return {{2, rm_scale(rat(-1), rm_mul(mb, ma))}};
        if (pa == 1 && pb == 2) // [(0, q), l] = q l
            return {{2, rm_mul(ma, mb)}};
        return {};
    };
    QScModel out;
    out.sys = sys;
    out.D = D;
    out.k = k;
    out.u_basis = {b.basis(pu, 0), b.basis(pu, 1), b.basis(pu, 2)};
    out.e_basis = {b.basis(pe, 0), b.basis(pe, 1), b.basis(pe, 2)};
    out.hom_basis = {b.basis(ph, 0), b.basis(ph, 1), b.basis(ph, 2)};
    out.sc = assemble_sc(b, lay, {{mu, 0, 2}, {me, 1, 2}}, fn);
    return out;
}

MDeltaModel build_mdelta_sc(const CoherentSystem& sys, int D)
{
    ValidationReport v = validate_coherent_system(sys);
    if (!v.ok())
        throw BadParams("invalid coherent system: " + v.issues.front().identity);
    int k = static_cast<int>(sys.u.size());
    int r = sys.e.rank;
    CoverModel cover = make_p1_cover(D);
    SheafPresentation E = sys.e;
    E.cover = cover;
    SheafPresentation U = trivial_sheaf(k, cover);
    SheafPresentation endU = end_sheaf(U);
    SheafPresentation homUE = hom_sheaf(U, E);
    RingMatrix s0 = system_s0(sys), s1 = system_s1(sys);
    auto s_at = [s0, s1](int simplex) { return simplex == 1 ? s1 : s0; };

    Builder b(cover, std::max(transition_pad(homUE), rm_max_abs_exp(s0) + rm_max_abs_exp(s1)));
    int pu = b.add_piece(endU, k, k);
    int ph = b.add_piece(homUE, r, k);
    b.add_map(pu, ph, [s_at](int s, const RingMatrix& m) { return rm_mul(s_at(s), m); });
    b.run();

    ScLayout lay;
    lay.b = &b;
    lay.parts = {{pu, 0, "u"}, {ph, 1, "h"}};
    lay.build();
    BracketFn fn = [](int pa, const RingMatrix& ma, int pb, const RingMatrix& mb)
        -> std::vector<std::pair<int, RingMatrix>> {
        if (pa == 0 && pb == 0)
            return {{0, commutator(ma, mb)}};
        if (pa == 0 && pb == 1)
            return {{1, rm_scale(rat(-1), rm_mul(mb, ma))}};
        return {};
    };
    MDeltaModel out;
    out.D = D;
    out.u_basis = {b.basis(pu, 0), b.basis(pu, 1), b.basis(pu, 2)};
    out.hom_basis = {b.basis(ph, 0), b.basis(ph, 1), b.basis(ph, 2)};
    out.sc = assemble_sc(b, lay, {{0, 0, 1}}, fn);
    return out;
}

namespace {

// pi(phi) = c + d a - a a_FF - a a_GF a for phi = [[a_FF, a_GF], [c, d]]
// blocks of End(F + G); a is the chart matrix of alpha.
RingMatrix graph_membership(const RingMatrix& phi, const RingMatrix& a, int rf, int rg)
{
    auto block = [&](int r0, int c0, int nr, int nc) {
        RingMatrix m = rm_zero(nr, nc);
        for (int i = 0; i < nr; ++i)
            for (int j = 0; j < nc; ++j)
                m[i][j] = phi[r0 + i][c0 + j];
        return m;
    };
    RingMatrix aFF = block(0, 0, rf, rf);
    RingMatrix bGF = block(0, rf, rf, rg);
    RingMatrix c = block(rf, 0, rg, rf);
    RingMatrix d = block(rf, rf, rg, rg);
    return rm_sub(rm_add(c, rm_mul(d, a)), rm_add(rm_mul(a, aFF), rm_mul(rm_mul(a, bGF), a)));
}

} // namespace

MorphismModel build_morphism_model(const SheafMorphismPresentation& alpha, int D)
{
    ValidationReport va = validate_sheaf_morphism(alpha);
    if (!va.ok())
        throw BadParams("invalid sheaf morphism: " + va.issues.front().identity);
    int rf = alpha.source.rank, rg = alpha.target.rank;
    CoverModel cover = make_p1_cover(D);
    SheafPresentation F = alpha.source, G = alpha.target;
    F.cover = cover;
    G.cover = cover;
    SheafPresentation endF = end_sheaf(F);
    SheafPresentation endG = end_sheaf(G);
    SheafPresentation sum = sheaf_direct_sum(F, G);
    SheafPresentation endSum = end_sheaf(sum);
    SheafPresentation homFG = hom_sheaf(F, G);
    RingMatrix a0 = alpha.a0, a1 = alpha.a1;
    auto a_at = [a0, a1](int simplex) { return simplex == 1 ? a1 : a0; };

    int pad = std::max({transition_pad(endSum), rm_max_abs_exp(a0) + rm_max_abs_exp(a1)});
    Builder b(cover, pad);
    int pf = b.add_piece(endF, rf, rf);
    int pg = b.add_piece(endG, rg, rg);
    int pm = b.add_piece(endSum, rf + rg, rf + rg);
    int ph = b.add_piece(homFG, rg, rf);
    int mf = 0, mg = 1, mc = 2;
    b.add_map(pf, ph,
              [a_at](int s, const RingMatrix& m) { return rm_scale(rat(-1), rm_mul(a_at(s), m)); });
    b.add_map(pg, ph, [a_at](int s, const RingMatrix& m) { return rm_mul(m, a_at(s)); });
    b.add_map(ph, pm, [rf, rg](int, const RingMatrix& m) {
        RingMatrix out = rm_zero(rf + rg, rf + rg);
        for (int i = 0; i < rg; ++i)
            for (int j = 0; j < rf; ++j)
                out[rf + i][j] = m[i][j];
        return out;
    });
    b.run();

    MorphismModel out;
    out.alpha = alpha;
    out.D = D;
    out.rf = rf;
    out.rg = rg;
    out.nf_basis = {b.basis(pf, 0), b.basis(pf, 1), b.basis(pf, 2)};
    out.ng_basis = {b.basis(pg, 0), b.basis(pg, 1), b.basis(pg, 2)};
    out.m_basis = {b.basis(pm, 0), b.basis(pm, 1), b.basis(pm, 2)};
    out.hom_basis = {b.basis(ph, 0), b.basis(ph, 1), b.basis(ph, 2)};
    out.hom_complex = b.cech_complex(ph);

    // N = End(F) + End(G), M = End(F + G)
    ScLayout layN;
    layN.b = &b;
    layN.parts = {{pf, 0, "f"}, {pg, 0, "g"}};
    layN.build();
    BracketFn fnN = [](int pa, const RingMatrix& ma, int pb, const RingMatrix& mb)
        -> std::vector<std::pair<int, RingMatrix>> {
        if (pa == pb)
            return {{pa, commutator(ma, mb)}};
        return {};
    };
    out.scN = assemble_sc(b, layN, {}, fnN);

    ScLayout layM;
    layM.b = &b;
    layM.parts = {{pm, 0, "m"}};
    layM.build();
    BracketFn fnM = [](int, const RingMatrix& ma, int, const RingMatrix& mb) {
        return std::vector<std::pair<int, RingMatrix>>{{0, commutator(ma, mb)}};
    };
    out.scM = assemble_sc(b, layM, {}, fnM);

    // graph subalgebra: kernel of the membership map on kept ambient bases
    for (int s = 0; s < 3; ++s) {
        const SectionBasis& amb = b.basis(pm, s);
        RingMatrix a = a_at(s);
        std::map<std::pair<int, int>, int> rowidx;
        std::vector<std::map<std::pair<int, int>, Rational>> cols;
        for (int j = 0; j < amb.dim(); ++j) {
            RingMatrix phi = unit_section(b, pm, s, j);
            RingMatrix img = graph_membership(phi, a, rf, rg);
            std::map<std::pair<int, int>, Rational> terms;
            for (int p = 0; p < rg; ++p)
                for (int q = 0; q < rf; ++q)
                    for (const auto& [e, c] : img[p][q])
                        if (!is_zero(c)) {
                            terms[{p * rf + q, e}] += c;
                            rowidx.emplace(std::pair<int, int>{p * rf + q, e}, 0);
                        }
            cols.push_back(std::move(terms));
        }
        int nrows = 0;
        for (auto& [key, idx] : rowidx)
            idx = nrows++;
        SparseMatrix mat(nrows, amb.dim());
        for (int j = 0; j < amb.dim(); ++j)
            for (const auto& [key, c] : cols[j])
                mat.add_to(rowidx.at(key), j, c);
        out.l_basis[s] = kernel_basis(mat);
    }

    // L as a dgLa in kernel coordinates, with ambient brackets
    std::array<SparseMatrix, 3> K;
    for (int s = 0; s < 3; ++s)
        K[s] = SparseMatrix::from_columns(out.l_basis[s], b.basis(pm, s).dim());
    int n = rf + rg;
    auto l_dim = [&](int s) { return static_cast<int>(out.l_basis[s].size()); };

    auto gl0 = std::make_shared<DGLA>();
    {
        std::vector<std::string> labels;
        for (int i = 0; i < l_dim(0); ++i)
            labels.push_back("V0:L" + std::to_string(i));
        for (int i = 0; i < l_dim(1); ++i)
            labels.push_back("V1:L" + std::to_string(i));
        if (!labels.empty())
            gl0->space.components[0] = std::move(labels);
    }
    gl0->d = GradedMap(gl0->space, gl0->space, 1);
    auto gl1 = std::make_shared<DGLA>();
    {
        std::vector<std::string> labels;
        for (int i = 0; i < l_dim(2); ++i)
            labels.push_back("L" + std::to_string(i));
        if (!labels.empty())
            gl1->space.components[0] = std::move(labels);
    }
    gl1->d = GradedMap(gl1->space, gl1->space, 1);

    std::array<FactoredSolver, 3> Ksolve{FactoredSolver(K[0]), FactoredSolver(K[1]),
                                         FactoredSolver(K[2])};
    auto fill_l_brackets = [&](DGLA& g, int chartA, int offA, int chartB, int offB, int simplex) {
        std::vector<RingMatrix> decA, decB;
        for (int i = 0; i < l_dim(chartA); ++i)
            decA.push_back(decode_section(b.basis(pm, simplex), n, n, out.l_basis[chartA][i]));
        for (int j = 0; j < l_dim(chartB); ++j)
            decB.push_back(decode_section(b.basis(pm, simplex), n, n, out.l_basis[chartB][j]));
        for (int i = 0; i < l_dim(chartA); ++i)
            for (int j = (chartA == chartB ? i : 0); j < l_dim(chartB); ++j) {
                auto enc = encode_section(b.basis(pm, simplex), n, commutator(decA[i], decB[j]));
                if (!enc) {
                    g.mark_bracket_undefined(0, offA + i, 0, offB + j);
                    continue;
                }
                if (enc->empty())
                    continue;
                auto sol = Ksolve[simplex].solve(*enc);
                if (!sol)
                    throw InternalCheckFailure("graph bracket leaves the subalgebra");
                SparseVector value;
                for (const auto& [k2, c] : *sol)
                    value[offA + k2] = c;
                g.set_bracket(0, offA + i, 0, offB + j, value);
            }
    };
    fill_l_brackets(*gl0, 0, 0, 0, 0, 0);
    fill_l_brackets(*gl0, 1, l_dim(0), 1, l_dim(0), 1);
    fill_l_brackets(*gl1, 2, 0, 2, 0, 2);

    DGLAPtr L0 = gl0, L1 = gl1, L2 = zero_level();
    auto l_coface = [&](int chart) {
        GradedMap f(L0->space, L1->space, 0);
        SparseMatrix blk(l_dim(2), l_dim(0) + l_dim(1));
        SparseMatrix R = b.restriction_matrix(pm, chart);
        int off = chart == 0 ? 0 : l_dim(0);
        for (int i = 0; i < l_dim(chart); ++i) {
            SparseVector w = R.apply(out.l_basis[chart][i]);
            auto sol = Ksolve[2].solve(w);
            if (!sol)
                throw InternalCheckFailure("restricted graph section leaves the subalgebra");
            for (const auto& [k2, c] : *sol)
                blk.add_to(k2, off + i, c);
        }
        if (blk.rows() > 0 || blk.cols() > 0)
            f.set_block(0, std::move(blk));
        return f;
    };
    ScDGLA scl;
    scl.levels = {L0, L1, L2};
    scl.cofaces = {{DGLAMorphism{L0, L1, l_coface(1)}, DGLAMorphism{L0, L1, l_coface(0)}},
                   {zero_morphism(L1, L2), zero_morphism(L1, L2), zero_morphism(L1, L2)}};
    out.scL = scl;

    // levelwise chain maps h: L -> M and g: N -> M
    int n0m = b.basis(pm, 0).dim();
    const GradedVectorSpace& spM0 = out.scM.levels[0]->space;
    const GradedVectorSpace& spM1 = out.scM.levels[1]->space;
    {
        GradedMap h0(L0->space, spM0, 0);
        SparseMatrix blk(spM0.dim(0), l_dim(0) + l_dim(1));
        for (int i = 0; i < l_dim(0); ++i)
            for (const auto& [k2, c] : out.l_basis[0][i])
                blk.add_to(k2, i, c);
        for (int i = 0; i < l_dim(1); ++i)
            for (const auto& [k2, c] : out.l_basis[1][i])
                blk.add_to(n0m + k2, l_dim(0) + i, c);
        h0.set_block(0, std::move(blk));
        GradedMap h1(L1->space, spM1, 0);
        h1.set_block(0, SparseMatrix::from_columns(out.l_basis[2], spM1.dim(0)));
        out.h_levels = {h0, h1,
                        GradedMap(L2->space, out.scM.levels[2]->space, 0)};
    }
    {
        auto embed = [&](int simplex, int piece, bool gblock, SparseMatrix& blk, int colOff,
                         int rowOff) {
            const SectionBasis& src = b.basis(piece, simplex);
            const SectionBasis& dst = b.basis(pm, simplex);
            int r = gblock ? rg : rf;
            for (int i = 0; i < src.dim(); ++i) {
                auto [comp, exp] = src.vecs[i];
                int p = comp / r, q = comp % r;
                int tcomp = gblock ? (rf + p) * n + (rf + q) : p * n + q;
                int row = dst.index_of(tcomp, exp);
                if (row < 0)
                    throw InternalCheckFailure("diagonal embedding misses the kept basis");
                blk.add_to(rowOff + row, colOff + i, rat(1));
            }
        };
        const GradedVectorSpace& spN0 = out.scN.levels[0]->space;
        const GradedVectorSpace& spN1 = out.scN.levels[1]->space;
        GradedMap g0(spN0, spM0, 0);
        SparseMatrix blk0(spM0.dim(0), spN0.dim(0));
        int nf0 = b.basis(pf, 0).dim(), ng0 = b.basis(pg, 0).dim();
        int nf1 = b.basis(pf, 1).dim();
        embed(0, pf, false, blk0, 0, 0);
        embed(0, pg, true, blk0, nf0, 0);
        embed(1, pf, false, blk0, nf0 + ng0, n0m);
        embed(1, pg, true, blk0, nf0 + ng0 + nf1, n0m);
        g0.set_block(0, std::move(blk0));
        GradedMap g1(spN1, spM1, 0);
        SparseMatrix blk1(spM1.dim(0), spN1.dim(0));
        embed(2, pf, false, blk1, 0, 0);
        embed(2, pg, true, blk1, b.basis(pf, 2).dim(), 0);
        g1.set_block(0, std::move(blk1));
        out.g_levels = {g0, g1,
                        GradedMap(out.scN.levels[2]->space, out.scM.levels[2]->space, 0)};
    }

    // pi . g : N -> Hom complex, and the c-block section Hom -> M
    {
        int h0dim = b.basis(ph, 0).dim();
        int nf0 = b.basis(pf, 0).dim(), ng0 = b.basis(pg, 0).dim();
        int nf1 = b.basis(pf, 1).dim(), ng1 = b.basis(pg, 1).dim();
        SparseMatrix p0(out.hom_complex.space.dim(0), nf0 + ng0 + nf1 + ng1);
        p0.insert_block(0, 0, b.map_matrix(mf, 0));
        p0.insert_block(0, nf0, b.map_matrix(mg, 0));
        p0.insert_block(h0dim, nf0 + ng0, b.map_matrix(mf, 1));
        p0.insert_block(h0dim, nf0 + ng0 + nf1, b.map_matrix(mg, 1));
        SparseMatrix p1 = SparseMatrix::hconcat(b.map_matrix(mf, 2), b.map_matrix(mg, 2));
        out.pig = {p0, p1};

        SparseMatrix c0(spM0.dim(0), out.hom_complex.space.dim(0));
        c0.insert_block(0, 0, b.map_matrix(mc, 0));
        c0.insert_block(n0m, h0dim, b.map_matrix(mc, 1));
        out.cembed = {c0, b.map_matrix(mc, 2)};
    }
    return out;
}

GraphSubalgebra graph_subalgebra_L(const SheafMorphismPresentation& alpha, int D)
{
    MorphismModel m = build_morphism_model(alpha, D);
    GraphSubalgebra out;
    out.ambient.sheaf = end_sheaf(sheaf_direct_sum(m.alpha.source, m.alpha.target));
    out.ambient.sheaf.cover = make_p1_cover(D);
    out.ambient.D = D;
    out.ambient.basis = m.m_basis;
    // rebuild the two-term complex from the kept bases
    {
        CochainComplex cx;
        std::vector<std::string> c0, c1;
        for (const auto& v : m.m_basis[0].vecs)
            c0.push_back("V0:" + vec_label(v));
        for (const auto& v : m.m_basis[1].vecs)
            c0.push_back("V1:" + vec_label(v));
        for (const auto& v : m.m_basis[2].vecs)
            c1.push_back(vec_label(v));
        if (!c0.empty())
            cx.space.components[0] = std::move(c0);
        if (!c1.empty())
            cx.space.components[1] = std::move(c1);
        cx.differential = GradedMap(cx.space, cx.space, 1);
        // the scM coface maps carry the same restriction blocks
        const GradedMap& d0 = m.scM.coface(0, 1).map; // chart 1
        const GradedMap& d1 = m.scM.coface(1, 1).map; // chart 0
        SparseMatrix blk = d0.block(0) - d1.block(0);
        if (cx.space.dim(0) > 0)
            cx.differential.set_block(0, std::move(blk));
        out.ambient.complex = std::move(cx);
    }
    out.basis = m.l_basis;
    return out;
}

} // namespace deform

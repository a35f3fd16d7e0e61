#include "deform/linalg.hpp"

#include <algorithm>

#include "deform/errors.hpp"

namespace deform {

SparseVector sv_add(const SparseVector& a, const SparseVector& b)
{
    SparseVector r = a;
    for (const auto& [i, c] : b) {
        Rational s = r.count(i) ? r[i] + c : c;
        if (is_zero(s))
            r.erase(i);
        else
            r[i] = s;
    }
    return r;
}

SparseVector sv_sub(const SparseVector& a, const SparseVector& b)
{
    return sv_add(a, sv_scale(rat(-1), b));
}

SparseVector sv_scale(const Rational& c, const SparseVector& v)
{
    SparseVector r;
    if (is_zero(c))
        return r;
    for (const auto& [i, x] : v)
        r[i] = c * x;
    return r;
}

bool sv_is_zero(const SparseVector& v) { return v.empty(); }

SparseMatrix SparseMatrix::identity(int n)
{
    SparseMatrix m(n, n);
    for (int i = 0; i < n; ++i)
        m.set(i, i, rat(1));
    return m;
}

void SparseMatrix::set(int r, int c, const Rational& v)
{
    if (r < 0 || r >= rows_ || c < 0 || c >= cols_)
        throw ShapeMismatch("entry (" + std::to_string(r) + "," + std::to_string(c) + ") outside " + std::to_string(rows_) + "x" + std::to_string(cols_));
    if (deform::is_zero(v))
        entries_.erase({r, c});
    else
        entries_[{r, c}] = v;
}

void SparseMatrix::add_to(int r, int c, const Rational& v)
{
    set(r, c, at(r, c) + v);
}

Rational SparseMatrix::at(int r, int c) const
{
    auto it = entries_.find({r, c});
    return it == entries_.end() ? Rational(0) : it->second;
}

SparseMatrix SparseMatrix::operator*(const SparseMatrix& rhs) const
{
    if (cols_ != rhs.rows_)
        throw ShapeMismatch("product " + std::to_string(rows_) + "x" + std::to_string(cols_) + " * " + std::to_string(rhs.rows_) + "x" + std::to_string(rhs.cols_));
    // rhs entries grouped by row for the inner loop
    std::map<int, std::vector<std::pair<int, Rational>>> rhs_rows;
    for (const auto& [rc, v] : rhs.entries_)
        rhs_rows[rc.first].emplace_back(rc.second, v);
    SparseMatrix out(rows_, rhs.cols_);
    std::map<std::pair<int, int>, Rational> acc;
    for (const auto& [rc, v] : entries_) {
        auto it = rhs_rows.find(rc.second);
        if (it == rhs_rows.end())
            continue;
        for (const auto& [c2, w] : it->second)
            acc[{rc.first, c2}] += v * w;
    }
    for (const auto& [rc, v] : acc)
        if (!deform::is_zero(v))
            out.entries_[rc] = v;
    return out;
}

SparseMatrix SparseMatrix::operator+(const SparseMatrix& rhs) const
{
    if (rows_ != rhs.rows_ || cols_ != rhs.cols_)
        throw ShapeMismatch("sum of unequal shapes");
    SparseMatrix out = *this;
    for (const auto& [rc, v] : rhs.entries_)
        out.add_to(rc.first, rc.second, v);
    return out;
}

SparseMatrix SparseMatrix::operator-(const SparseMatrix& rhs) const
{
    return *this + rhs.scaled(rat(-1));
}

SparseMatrix SparseMatrix::scaled(const Rational& c) const
{
    SparseMatrix out(rows_, cols_);
    if (deform::is_zero(c))
        return out;
    for (const auto& [rc, v] : entries_)
        out.entries_[rc] = c * v;
    return out;
}

SparseMatrix SparseMatrix::transpose() const
{
    SparseMatrix out(cols_, rows_);
    for (const auto& [rc, v] : entries_)
        out.entries_[{rc.second, rc.first}] = v;
    return out;
}

bool SparseMatrix::operator==(const SparseMatrix& rhs) const
{
    return rows_ == rhs.rows_ && cols_ == rhs.cols_ && entries_ == rhs.entries_;
}

SparseVector SparseMatrix::apply(const SparseVector& v) const
{
    SparseVector out;
    for (const auto& [rc, a] : entries_) {
        auto it = v.find(rc.second);
        if (it == v.end())
            continue;
        Rational s = (out.count(rc.first) ? out[rc.first] : Rational(0)) + a * it->second;
        if (deform::is_zero(s))
            out.erase(rc.first);
        else
            out[rc.first] = s;
    }
    return out;
}

void SparseMatrix::insert_block(int r0, int c0, const SparseMatrix& b)
{
    for (const auto& [rc, v] : b.entries_)
        set(r0 + rc.first, c0 + rc.second, v);
}

SparseMatrix SparseMatrix::hconcat(const SparseMatrix& a, const SparseMatrix& b)
{
    if (a.rows() != b.rows())
        throw ShapeMismatch("hconcat with different row counts");
    SparseMatrix out(a.rows(), a.cols() + b.cols());
    out.insert_block(0, 0, a);
    out.insert_block(0, a.cols(), b);
    return out;
}

SparseMatrix SparseMatrix::from_columns(const std::vector<SparseVector>& cols, int rows)
{
    SparseMatrix out(rows, static_cast<int>(cols.size()));
    for (int c = 0; c < static_cast<int>(cols.size()); ++c)
        for (const auto& [r, v] : cols[c])
            out.set(r, c, v);
    return out;
}

SparseVector SparseMatrix::column(int c) const
{
    SparseVector out;
    for (const auto& [rc, v] : entries_)
        if (rc.second == c)
            out[rc.first] = v;
    return out;
}

namespace {

// Fraction-free forward elimination (Bareiss). Returns the echelon matrix
// over the integers together with the pivot column list. Rows are first
// scaled by the lcm of their denominators; this changes neither the row
// space nor the null space.
struct IntEchelon {
    std::vector<std::vector<Integer>> mat;
    std::vector<int> pivot_cols;
    std::vector<int> pivot_rows; // pivot_rows[k] = row index of k-th pivot after swaps
};

IntEchelon bareiss(const SparseMatrix& m)
{
    const int nr = m.rows(), nc = m.cols();
    std::vector<std::vector<Rational>> q(nr, std::vector<Rational>(nc, Rational(0)));
    for (const auto& [rc, v] : m.entries())
        q[rc.first][rc.second] = v;

    IntEchelon e;
    e.mat.assign(nr, std::vector<Integer>(nc, Integer(0)));
    for (int r = 0; r < nr; ++r) {
        Integer l(1);
        for (int c = 0; c < nc; ++c)
            if (!is_zero(q[r][c]))
                mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), q[r][c].get_den_mpz_t());
        for (int c = 0; c < nc; ++c) {
            Rational s = q[r][c] * Rational(l);
            e.mat[r][c] = s.get_num(); // denominator is 1 after scaling
        }
    }

    Integer prev(1);
    int row = 0;
    for (int col = 0; col < nc && row < nr; ++col) {
        // minimal-bit-length pivot, ties by row index
        int best = -1;
        size_t best_bits = 0;
        for (int r = row; r < nr; ++r) {
            if (sgn(e.mat[r][col]) == 0)
                continue;
            size_t bits = bit_length(e.mat[r][col]);
            if (best < 0 || bits < best_bits) {
                best = r;
                best_bits = bits;
            }
        }
        if (best < 0)
            continue;
        std::swap(e.mat[row], e.mat[best]);
        const Integer piv = e.mat[row][col];
        for (int r = row + 1; r < nr; ++r) {
            const Integer lead = e.mat[r][col];
            for (int c = col; c < nc; ++c) {
                Integer t = piv * e.mat[r][c] - lead * e.mat[row][c];
                mpz_divexact(t.get_mpz_t(), t.get_mpz_t(), prev.get_mpz_t());
                e.mat[r][c] = t;
            }
        }
        prev = piv;
        e.pivot_cols.push_back(col);
        e.pivot_rows.push_back(row);
        ++row;
    }
    return e;
}

} // namespace

Echelon row_reduce(const SparseMatrix& m)
{
    IntEchelon ie = bareiss(m);
    const int nc = m.cols();
    const int rk = static_cast<int>(ie.pivot_cols.size());

    Echelon out;
    out.rank = rk;
    out.pivot_cols = ie.pivot_cols;
    out.rref.assign(rk, std::vector<Rational>(nc, Rational(0)));
    for (int k = 0; k < rk; ++k)
        for (int c = 0; c < nc; ++c)
            out.rref[k][c] = Rational(ie.mat[k][c]);

    // normalize and eliminate above pivots, bottom-up
    for (int k = rk - 1; k >= 0; --k) {
        const int pc = ie.pivot_cols[k];
        Rational inv = 1 / out.rref[k][pc];
        for (int c = pc; c < nc; ++c)
            out.rref[k][c] *= inv;
        for (int j = 0; j < k; ++j) {
            Rational f = out.rref[j][pc];
            if (is_zero(f))
                continue;
            for (int c = pc; c < nc; ++c)
                out.rref[j][c] -= f * out.rref[k][c];
        }
    }
    return out;
}

int rank(const SparseMatrix& m)
{
    return static_cast<int>(bareiss(m).pivot_cols.size());
}

std::vector<SparseVector> kernel_basis(const SparseMatrix& m)
{
    Echelon e = row_reduce(m);
    std::vector<bool> is_pivot(m.cols(), false);
    for (int c : e.pivot_cols)
        is_pivot[c] = true;
    std::vector<SparseVector> basis;
    for (int f = 0; f < m.cols(); ++f) {
        if (is_pivot[f])
            continue;
        SparseVector v;
        v[f] = rat(1);
        for (int k = 0; k < e.rank; ++k) {
            const Rational& a = e.rref[k][f];
            if (!is_zero(a))
                v[e.pivot_cols[k]] = -a;
        }
        basis.push_back(std::move(v));
    }
    return basis;
}

std::optional<SparseVector> solve(const SparseMatrix& m, const SparseVector& b)
{
    SparseMatrix aug(m.rows(), m.cols() + 1);
    aug.insert_block(0, 0, m);
    for (const auto& [r, v] : b)
        aug.set(r, m.cols(), v);
    Echelon e = row_reduce(aug);
    for (int c : e.pivot_cols)
        if (c == m.cols())
            return std::nullopt;
    SparseVector x;
    for (int k = 0; k < e.rank; ++k) {
        const Rational& v = e.rref[k][m.cols()];
        if (!is_zero(v))
            x[e.pivot_cols[k]] = v;
    }
    return x;
}

int rank_increase(const SparseMatrix& a, const SparseMatrix& b)
{
    return rank(SparseMatrix::hconcat(a, b)) - rank(a);
}

FactoredSolver::FactoredSolver(const SparseMatrix& m) : cols_(m.cols())
{
    const int nr = m.rows();
    Echelon e = row_reduce(SparseMatrix::hconcat(m, SparseMatrix::identity(nr)));
    // pivots inside the m block come first; the identity block makes the
    // combined matrix full row rank, so every matrix row appears in the rref.
    for (int c : e.pivot_cols)
        if (c < cols_)
            pivot_cols_.push_back(c);
    rank_ = static_cast<int>(pivot_cols_.size());
    e_.assign(nr, std::vector<Rational>(nr, Rational(0)));
    for (int k = 0; k < static_cast<int>(e.rref.size()); ++k)
        for (int r = 0; r < nr; ++r)
            e_[k][r] = e.rref[k][cols_ + r];
}

std::optional<SparseVector> FactoredSolver::solve(const SparseVector& b) const
{
    const int nr = static_cast<int>(e_.size());
    auto dot = [&](int k) {
        Rational s(0);
        for (const auto& [r, v] : b)
            if (r < nr)
                s += e_[k][r] * v;
        return s;
    };
    for (int k = rank_; k < nr; ++k)
        if (!deform::is_zero(dot(k)))
            return std::nullopt;
    SparseVector x;
    for (int k = 0; k < rank_; ++k) {
        Rational v = dot(k);
        if (!deform::is_zero(v))
            x[pivot_cols_[k]] = v;
    }
    return x;
}

} // namespace deform

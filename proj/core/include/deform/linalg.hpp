#ifndef DEFORM_LINALG_HPP
#define DEFORM_LINALG_HPP

#include <map>
#include <optional>
#include <utility>
#include <vector>

#include "deform/rational.hpp"

namespace deform {

// Sparse column vector: index -> nonzero coefficient.
using SparseVector = std::map<int, Rational>;

SparseVector sv_add(const SparseVector& a, const SparseVector& b);
SparseVector sv_sub(const SparseVector& a, const SparseVector& b);
SparseVector sv_scale(const Rational& c, const SparseVector& v);
bool sv_is_zero(const SparseVector& v);

// Sparse rational matrix in canonical coordinate form: entries are kept
// sorted by (row, col) and explicit zeros are never stored.
class SparseMatrix {
public:
    SparseMatrix() = default;
    SparseMatrix(int rows, int cols) : rows_(rows), cols_(cols) {}

    static SparseMatrix identity(int n);

    int rows() const { return rows_; }
    int cols() const { return cols_; }

    void set(int r, int c, const Rational& v);
    void add_to(int r, int c, const Rational& v);
    Rational at(int r, int c) const;

    const std::map<std::pair<int, int>, Rational>& entries() const { return entries_; }

    bool is_zero() const { return entries_.empty(); }

    SparseMatrix operator*(const SparseMatrix& rhs) const;
    SparseMatrix operator+(const SparseMatrix& rhs) const;
    SparseMatrix operator-(const SparseMatrix& rhs) const;
    SparseMatrix scaled(const Rational& c) const;
    SparseMatrix transpose() const;

    bool operator==(const SparseMatrix& rhs) const;
    bool operator!=(const SparseMatrix& rhs) const { return !(*this == rhs); }

    // Matrix times column vector.
    SparseVector apply(const SparseVector& v) const;

    // Copies b into this matrix with top-left corner at (r0, c0).
    void insert_block(int r0, int c0, const SparseMatrix& b);

    // Appends columns of b to the right (row counts must agree).
    static SparseMatrix hconcat(const SparseMatrix& a, const SparseMatrix& b);

    // Builds a matrix whose columns are the given vectors.
    static SparseMatrix from_columns(const std::vector<SparseVector>& cols, int rows);

    SparseVector column(int c) const;

private:
    int rows_ = 0;
    int cols_ = 0;
    std::map<std::pair<int, int>, Rational> entries_;
};

struct Echelon {
    std::vector<std::vector<Rational>> rref; // dense reduced row echelon form
    std::vector<int> pivot_cols;             // strictly increasing
    int rank = 0;
};

// Reduced row echelon form via fraction-free (Bareiss) forward elimination
// followed by exact rational back substitution. Pivot rows are chosen by
// minimal bit length of the candidate pivot, ties broken by row index, so
// the result is deterministic.
Echelon row_reduce(const SparseMatrix& m);

int rank(const SparseMatrix& m);

// Basis of the null space {x : m x = 0}. One vector per free column, in
// ascending free-column order; count = cols - rank. An empty matrix yields
// the full standard basis.
std::vector<SparseVector> kernel_basis(const SparseMatrix& m);

// Solves m x = b exactly; returns std::nullopt when inconsistent. Free
// variables are set to zero.
std::optional<SparseVector> solve(const SparseMatrix& m, const SparseVector& b);

// Rank of the column span of [a | b] minus rank of a; zero iff the columns
// of b already lie in the span of a.
int rank_increase(const SparseMatrix& a, const SparseMatrix& b);

// One-time elimination of m for repeated right-hand sides; solve() agrees
// with the free function (free variables zero, same particular solution).
class FactoredSolver {
public:
    explicit FactoredSolver(const SparseMatrix& m);

    int rank() const { return rank_; }
    std::optional<SparseVector> solve(const SparseVector& b) const;

private:
    int cols_ = 0;
    int rank_ = 0;
    std::vector<int> pivot_cols_;
    std::vector<std::vector<Rational>> e_; // row-operation block, one row per matrix row
};

} // namespace deform

#endif

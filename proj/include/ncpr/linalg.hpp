#pragma once

#include "ncpr/numeric.hpp"

#include <map>
#include <vector>

namespace ncpr {

// Dense rational matrix, row-major.
struct DenseQ {
    int rows = 0;
    int cols = 0;
    std::vector<std::vector<Rat>> a;

    DenseQ() = default;
    DenseQ(int r, int c) : rows(r), cols(c), a(r, std::vector<Rat>(c, Rat(0))) {}

    Rat& at(int r, int c) { return a[r][c]; }
    const Rat& at(int r, int c) const { return a[r][c]; }

    static DenseQ identity(int n);
    DenseQ mul(const DenseQ& o) const;
    DenseQ operator+(const DenseQ& o) const;
    DenseQ operator-(const DenseQ& o) const;
    bool is_zero() const;
    friend bool operator==(const DenseQ& x, const DenseQ& y) {
        return x.rows == y.rows && x.cols == y.cols && x.a == y.a;
    }
};

// Reduced row echelon form in place; returns pivot column list.
std::vector<int> rref(DenseQ& m);

int rank(DenseQ m);

// Right kernel basis, one column per basis vector.
DenseQ kernel_basis(const DenseQ& m);

// Exact solve A X = B; returns false when inconsistent. When A has full
// column rank the solution is unique.
bool solve(const DenseQ& A, const DenseQ& B, DenseQ& X);

// Column-space membership of every column of B in span(A).
bool in_column_span(const DenseQ& A, const DenseQ& B);

// Sparse rational matrix as column maps (row -> value per column).
struct SparseQ {
    int rows = 0;
    int cols = 0;
    std::vector<std::map<int, Rat>> col;

    SparseQ() = default;
    SparseQ(int r, int c) : rows(r), cols(c), col(c) {}
    void add(int r, int c, const Rat& v);
    DenseQ dense() const;
    long nnz() const;
};

// Exact rank via elimination with a fill-minimizing pivot heuristic.
int rank_sparse(const SparseQ& m);

// Fraction-free (Bareiss) rank over the integers; the independent dense
// oracle used in cross-checks. Rows are scaled to integers first.
int rank_bareiss(const DenseQ& m);

} // namespace ncpr

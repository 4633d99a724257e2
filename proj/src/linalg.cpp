#include "ncpr/linalg.hpp"

#include <algorithm>
#include <set>

namespace ncpr {

DenseQ DenseQ::identity(int n) {
    DenseQ m(n, n);
    for (int i = 0; i < n; ++i) m.a[i][i] = 1;
    return m;
}

DenseQ DenseQ::mul(const DenseQ& o) const {
    if (cols != o.rows) throw Error("matrix shape mismatch");
    DenseQ r(rows, o.cols);
    for (int i = 0; i < rows; ++i)
        for (int k = 0; k < cols; ++k) {
            if (a[i][k] == 0) continue;
            for (int j = 0; j < o.cols; ++j) {
                if (o.a[k][j] == 0) continue;
                r.a[i][j] += a[i][k] * o.a[k][j];
            }
        }
    return r;
}

DenseQ DenseQ::operator+(const DenseQ& o) const {
    if (rows != o.rows || cols != o.cols) throw Error("matrix shape mismatch");
    DenseQ r = *this;
    for (int i = 0; i < rows; ++i)
        for (int j = 0; j < cols; ++j) r.a[i][j] += o.a[i][j];
    return r;
}

DenseQ DenseQ::operator-(const DenseQ& o) const {
    if (rows != o.rows || cols != o.cols) throw Error("matrix shape mismatch");
    DenseQ r = *this;
    for (int i = 0; i < rows; ++i)
        for (int j = 0; j < cols; ++j) r.a[i][j] -= o.a[i][j];
    return r;
}

bool DenseQ::is_zero() const {
    for (const auto& row : a)
        for (const auto& v : row)
            if (v != 0) return false;
    return true;
}

std::vector<int> rref(DenseQ& m) {
    std::vector<int> pivots;
    int lead = 0;
    for (int c = 0; c < m.cols && lead < m.rows; ++c) {
        int piv = -1;
        for (int r = lead; r < m.rows; ++r)
            if (m.a[r][c] != 0) {
                piv = r;
                break;
            }
        if (piv < 0) continue;
        std::swap(m.a[piv], m.a[lead]);
        Rat inv = Rat(1) / m.a[lead][c];
        for (int j = c; j < m.cols; ++j) m.a[lead][j] *= inv;
        for (int r = 0; r < m.rows; ++r) {
            if (r == lead || m.a[r][c] == 0) continue;
            Rat f = m.a[r][c];
            for (int j = c; j < m.cols; ++j) m.a[r][j] -= f * m.a[lead][j];
        }
        pivots.push_back(c);
        ++lead;
    }
    return pivots;
}

int rank(DenseQ m) { return static_cast<int>(rref(m).size()); }

DenseQ kernel_basis(const DenseQ& m) {
    DenseQ r = m;
    std::vector<int> pivots = rref(r);
    std::vector<bool> is_pivot(m.cols, false);
    for (int c : pivots) is_pivot[c] = true;
    int free_count = m.cols - static_cast<int>(pivots.size());
    DenseQ k(m.cols, free_count);
    int out = 0;
    for (int c = 0; c < m.cols; ++c) {
        if (is_pivot[c]) continue;
        k.a[c][out] = 1;
        for (size_t p = 0; p < pivots.size(); ++p) k.a[pivots[p]][out] = -r.a[p][c];
        ++out;
    }
    return k;
}

bool solve(const DenseQ& A, const DenseQ& B, DenseQ& X) {
    if (A.rows != B.rows) throw Error("matrix shape mismatch");
    DenseQ aug(A.rows, A.cols + B.cols);
    for (int i = 0; i < A.rows; ++i) {
        for (int j = 0; j < A.cols; ++j) aug.a[i][j] = A.a[i][j];
        for (int j = 0; j < B.cols; ++j) aug.a[i][A.cols + j] = B.a[i][j];
    }
    std::vector<int> pivots = rref(aug);
    for (int c : pivots)
        if (c >= A.cols) return false;  // pivot in the RHS block: inconsistent
    X = DenseQ(A.cols, B.cols);
    for (size_t p = 0; p < pivots.size(); ++p)
        for (int j = 0; j < B.cols; ++j) X.a[pivots[p]][j] = aug.a[p][A.cols + j];
    return true;
}

bool in_column_span(const DenseQ& A, const DenseQ& B) {
    DenseQ X;
    return solve(A, B, X);
}

void SparseQ::add(int r, int c, const Rat& v) {
    if (v == 0) return;
    auto& column = col[c];
    auto it = column.find(r);
    if (it == column.end()) {
        column.emplace(r, v);
    } else {
        it->second += v;
        if (it->second == 0) column.erase(it);
    }
}

DenseQ SparseQ::dense() const {
    DenseQ m(rows, cols);
    for (int c = 0; c < cols; ++c)
        for (const auto& [r, v] : col[c]) m.a[r][c] = v;
    return m;
}

long SparseQ::nnz() const {
    long n = 0;
    for (const auto& c : col) n += static_cast<long>(c.size());
    return n;
}

int rank_sparse(const SparseQ& m) {
    // Row-major working copy plus a column -> rows index, kept in sync so the
    // pivot search is cheap: pick the lightest column, then its lightest row.
    std::vector<std::map<int, Rat>> row(m.rows);
    std::vector<std::set<int>> rows_of(m.cols);
    for (int c = 0; c < m.cols; ++c)
        for (const auto& [r, v] : m.col[c]) {
            row[r][c] = v;
            rows_of[c].insert(r);
        }
    // Columns bucketed by nnz for min-degree selection.
    std::set<std::pair<int, int>> col_queue;  // (nnz, col)
    for (int c = 0; c < m.cols; ++c)
        if (!rows_of[c].empty()) col_queue.insert({static_cast<int>(rows_of[c].size()), c});
    auto requeue = [&](int c, int old_nnz) {
        col_queue.erase({old_nnz, c});
        if (!rows_of[c].empty()) col_queue.insert({static_cast<int>(rows_of[c].size()), c});
    };
    int rk = 0;
    while (!col_queue.empty()) {
        int pc = col_queue.begin()->second;
        // Lightest row in the column, preferring unit pivots.
        int pr = -1;
        size_t best = 0;
        for (int r : rows_of[pc]) {
            const Rat& v = row[r].at(pc);
            size_t score = row[r].size() * 2 + ((v == 1 || v == -1) ? 0 : 1);
            if (pr < 0 || score < best) {
                pr = r;
                best = score;
            }
        }
        ++rk;
        std::map<int, Rat> pivot_row = std::move(row[pr]);
        row[pr].clear();
        for (const auto& [c, v] : pivot_row) {
            int old_nnz = static_cast<int>(rows_of[c].size());
            rows_of[c].erase(pr);
            requeue(c, old_nnz);
        }
        Rat pv = pivot_row.at(pc);
        std::vector<int> touched(rows_of[pc].begin(), rows_of[pc].end());
        for (int r : touched) {
            Rat f = row[r].at(pc) / pv;
            for (const auto& [c, v] : pivot_row) {
                auto jt = row[r].find(c);
                if (jt == row[r].end()) {
                    Rat nv = -f * v;
                    if (nv != 0) {
                        row[r].emplace(c, nv);
                        int old_nnz = static_cast<int>(rows_of[c].size());
                        rows_of[c].insert(r);
                        requeue(c, old_nnz);
                    }
                } else {
                    jt->second -= f * v;
                    if (jt->second == 0) {
                        row[r].erase(jt);
                        int old_nnz = static_cast<int>(rows_of[c].size());
                        rows_of[c].erase(r);
                        requeue(c, old_nnz);
                    }
                }
            }
        }
    }
    return rk;
}

int rank_bareiss(const DenseQ& m) {
    // Scale rows to integers.
    std::vector<std::vector<Int>> a(m.rows, std::vector<Int>(m.cols));
    for (int i = 0; i < m.rows; ++i) {
        Int lcm = 1;
        for (int j = 0; j < m.cols; ++j) {
            Int den = m.a[i][j].get_den();
            lcm = lcm / gcd(lcm, den) * den;
        }
        for (int j = 0; j < m.cols; ++j) {
            Rat v = m.a[i][j] * Rat(lcm);
            a[i][j] = v.get_num();
        }
    }
    int rk = 0;
    Int prev = 1;
    int lead_row = 0;
    for (int c = 0; c < m.cols && lead_row < m.rows; ++c) {
        int piv = -1;
        for (int r = lead_row; r < m.rows; ++r)
            if (a[r][c] != 0) {
                piv = r;
                break;
            }
        if (piv < 0) continue;
        std::swap(a[piv], a[lead_row]);
        for (int r = lead_row + 1; r < m.rows; ++r) {
            for (int j = c + 1; j < m.cols; ++j)
                a[r][j] = (a[r][j] * a[lead_row][c] - a[r][c] * a[lead_row][j]) / prev;
            a[r][c] = 0;
        }
        prev = a[lead_row][c];
        ++rk;
        ++lead_row;
    }
    return rk;
}

} // namespace ncpr

#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <utility>
#include <vector>

#include "tdr/rational.hpp"

namespace tdr {

using QVec = std::vector<Rational>;

inline bool is_zero_vec(const QVec& v) {
    for (const auto& x : v)
        if (!x.is_zero()) return false;
    return true;
}

/// Dense rational matrix, row-major. Used for representation matrices and
/// other small dense data; the sparse type below is the elimination workhorse.
class QMat {
public:
    QMat() : rows_(0), cols_(0) {}
    QMat(long rows, long cols) : rows_(rows), cols_(cols), a_(rows * cols) {}

    static QMat identity(long n) {
        QMat m(n, n);
        for (long i = 0; i < n; ++i) m.at(i, i) = 1;
        return m;
    }

    long rows() const { return rows_; }
    long cols() const { return cols_; }

    Rational& at(long r, long c) { return a_[r * cols_ + c]; }
    const Rational& at(long r, long c) const { return a_[r * cols_ + c]; }

    QMat transpose() const {
        QMat t(cols_, rows_);
        for (long r = 0; r < rows_; ++r)
            for (long c = 0; c < cols_; ++c) t.at(c, r) = at(r, c);
        return t;
    }

    friend QMat operator*(const QMat& a, const QMat& b) {
        if (a.cols_ != b.rows_) throw ValidationError("matrix product shape mismatch");
        QMat p(a.rows_, b.cols_);
        for (long r = 0; r < a.rows_; ++r)
            for (long k = 0; k < a.cols_; ++k) {
                if (a.at(r, k).is_zero()) continue;
                for (long c = 0; c < b.cols_; ++c)
                    if (!b.at(k, c).is_zero()) p.at(r, c) += a.at(r, k) * b.at(k, c);
            }
        return p;
    }

    QVec apply(const QVec& v) const {
        if ((long)v.size() != cols_) throw ValidationError("matrix apply shape mismatch");
        QVec out(rows_);
        for (long r = 0; r < rows_; ++r)
            for (long c = 0; c < cols_; ++c)
                if (!at(r, c).is_zero()) out[r] += at(r, c) * v[c];
        return out;
    }

    friend QMat operator+(const QMat& a, const QMat& b) {
        if (a.rows_ != b.rows_ || a.cols_ != b.cols_) throw ValidationError("matrix sum shape mismatch");
        QMat s(a.rows_, a.cols_);
        for (size_t i = 0; i < a.a_.size(); ++i) s.a_[i] = a.a_[i] + b.a_[i];
        return s;
    }

    friend QMat operator-(const QMat& a, const QMat& b) {
        if (a.rows_ != b.rows_ || a.cols_ != b.cols_) throw ValidationError("matrix diff shape mismatch");
        QMat s(a.rows_, a.cols_);
        for (size_t i = 0; i < a.a_.size(); ++i) s.a_[i] = a.a_[i] - b.a_[i];
        return s;
    }

    friend QMat operator*(const Rational& c, const QMat& m) {
        QMat s(m.rows_, m.cols_);
        for (size_t i = 0; i < m.a_.size(); ++i) s.a_[i] = c * m.a_[i];
        return s;
    }

    friend bool operator==(const QMat& a, const QMat& b) {
        return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.a_ == b.a_;
    }

    bool is_zero() const {
        for (const auto& x : a_)
            if (!x.is_zero()) return false;
        return true;
    }

private:
    long rows_, cols_;
    std::vector<Rational> a_;
};

/// Sparse rational matrix: only nonzero entries are stored.
class SparseMatrix {
public:
    using Key = std::pair<long, long>; // (row, col)

    SparseMatrix() : rows_(0), cols_(0) {}
    SparseMatrix(long rows, long cols) : rows_(rows), cols_(cols) {}

    static SparseMatrix identity(long n) {
        SparseMatrix m(n, n);
        for (long i = 0; i < n; ++i) m.set(i, i, 1);
        return m;
    }

    static SparseMatrix from_dense(const QMat& d) {
        SparseMatrix m(d.rows(), d.cols());
        for (long r = 0; r < d.rows(); ++r)
            for (long c = 0; c < d.cols(); ++c)
                if (!d.at(r, c).is_zero()) m.set(r, c, d.at(r, c));
        return m;
    }

    long rows() const { return rows_; }
    long cols() const { return cols_; }
    long nnz() const { return (long)entries_.size(); }

    void check_bounds(long r, long c) const {
        if (r < 0 || r >= rows_ || c < 0 || c >= cols_)
            throw ValidationError("sparse matrix index out of bounds");
    }

    void set(long r, long c, const Rational& v) {
        check_bounds(r, c);
        if (v.is_zero())
            entries_.erase({r, c});
        else
            entries_[{r, c}] = v;
    }

    void add(long r, long c, const Rational& v) {
        check_bounds(r, c);
        auto it = entries_.find({r, c});
        if (it == entries_.end()) {
            if (!v.is_zero()) entries_[{r, c}] = v;
            return;
        }
        it->second += v;
        if (it->second.is_zero()) entries_.erase(it);
    }

    Rational at(long r, long c) const {
        check_bounds(r, c);
        auto it = entries_.find({r, c});
        return it == entries_.end() ? Rational(0) : it->second;
    }

    const std::map<Key, Rational>& entries() const { return entries_; }

    bool is_zero() const { return entries_.empty(); }

    SparseMatrix transpose() const {
        SparseMatrix t(cols_, rows_);
        for (const auto& [k, v] : entries_) t.set(k.second, k.first, v);
        return t;
    }

    QVec apply(const QVec& v) const {
        if ((long)v.size() != cols_) throw ValidationError("sparse apply shape mismatch");
        QVec out(rows_);
        for (const auto& [k, val] : entries_)
            if (!v[k.second].is_zero()) out[k.first] += val * v[k.second];
        return out;
    }

    friend SparseMatrix operator*(const SparseMatrix& a, const SparseMatrix& b) {
        if (a.cols_ != b.rows_) throw ValidationError("sparse product shape mismatch");
        // row-lists of b
        std::vector<std::vector<std::pair<long, Rational>>> brow(b.rows_);
        for (const auto& [k, v] : b.entries_) brow[k.first].push_back({k.second, v});
        SparseMatrix p(a.rows_, b.cols_);
        for (const auto& [k, v] : a.entries_)
            for (const auto& [c, w] : brow[k.second]) p.add(k.first, c, v * w);
        return p;
    }

    friend SparseMatrix operator-(const SparseMatrix& a, const SparseMatrix& b) {
        if (a.rows_ != b.rows_ || a.cols_ != b.cols_) throw ValidationError("sparse diff shape mismatch");
        SparseMatrix s = a;
        for (const auto& [k, v] : b.entries_) s.add(k.first, k.second, -v);
        return s;
    }

    QMat to_dense() const {
        QMat d(rows_, cols_);
        for (const auto& [k, v] : entries_) d.at(k.first, k.second) = v;
        return d;
    }

private:
    long rows_, cols_;
    std::map<Key, Rational> entries_;
};

namespace detail {

// Row-echelon state shared by rank / kernel / solve. Rows are sparse maps
// col -> value; full Gauss-Jordan so pivot columns end up cleared everywhere.
struct Eliminator {
    long cols;
    std::vector<std::map<long, Rational>> rows;
    // pivot list: (row index into `rows`, column)
    std::vector<std::pair<long, long>> pivots;
    std::vector<bool> row_done;

    explicit Eliminator(const SparseMatrix& m) : cols(m.cols()), rows(m.rows()) {
        for (const auto& [k, v] : m.entries()) rows[k.first][k.second] = v;
    }

    // Pivots only in columns < pivot_col_bound (solve() keeps the augmented
    // right-hand-side column out of the pivot pool).
    void run(long pivot_col_bound = -1) {
        if (pivot_col_bound < 0) pivot_col_bound = cols;
        row_done.assign(rows.size(), false);
        std::vector<bool> col_done(cols, false);
        while (true) {
            // sparsest active column first to contain fill-in
            std::vector<long> colcount(cols, 0);
            for (size_t r = 0; r < rows.size(); ++r) {
                if (row_done[r]) continue;
                for (const auto& [c, v] : rows[r])
                    if (!col_done[c]) ++colcount[c];
            }
            long best_col = -1;
            for (long c = 0; c < pivot_col_bound; ++c) {
                if (col_done[c] || colcount[c] == 0) continue;
                if (best_col < 0 || colcount[c] < colcount[best_col]) best_col = c;
            }
            if (best_col < 0) break;
            long best_row = -1;
            for (size_t r = 0; r < rows.size(); ++r) {
                if (row_done[r] || !rows[r].count(best_col)) continue;
                if (best_row < 0 || rows[r].size() < rows[best_row].size()) best_row = (long)r;
            }
            pivot(best_row, best_col);
            row_done[best_row] = true;
            col_done[best_col] = true;
        }
        normalize_pivot_order();
    }

    Rational row_entry(long r, long c) const {
        auto it = rows[r].find(c);
        return it == rows[r].end() ? Rational(0) : it->second;
    }

    void pivot(long pr, long pc) {
        auto& prow = rows[pr];
        Rational inv = Rational(1) / prow[pc];
        for (auto& [c, v] : prow) v *= inv;
        for (size_t r = 0; r < rows.size(); ++r) {
            if ((long)r == pr) continue;
            auto it = rows[r].find(pc);
            if (it == rows[r].end()) continue;
            Rational factor = it->second;
            for (const auto& [c, v] : prow) {
                auto jt = rows[r].find(c);
                if (jt == rows[r].end()) {
                    Rational nv = -factor * v;
                    if (!nv.is_zero()) rows[r][c] = nv;
                } else {
                    jt->second -= factor * v;
                    if (jt->second.is_zero()) rows[r].erase(jt);
                }
            }
        }
        pivots.push_back({pr, pc});
    }

    void normalize_pivot_order() {
        std::sort(pivots.begin(), pivots.end(),
                  [](const auto& a, const auto& b) { return a.second < b.second; });
    }

    long rank() const { return (long)pivots.size(); }

    std::vector<QVec> kernel() const {
        std::vector<bool> is_pivot_col(cols, false);
        for (const auto& [r, c] : pivots) is_pivot_col[c] = true;
        std::vector<QVec> basis;
        for (long f = 0; f < cols; ++f) {
            if (is_pivot_col[f]) continue;
            QVec x(cols);
            x[f] = 1;
            for (const auto& [r, c] : pivots) {
                auto it = rows[r].find(f);
                if (it != rows[r].end()) x[c] = -it->second;
            }
            basis.push_back(std::move(x));
        }
        return basis;
    }
};

// Dense elimination for small matrices; same pivots-after-the-fact contract.
struct DenseElim {
    long rows_n, cols;
    std::vector<QVec> a;
    std::vector<std::pair<long, long>> pivots;
    long first_nonpivot_row = 0;

    explicit DenseElim(const SparseMatrix& m) : rows_n(m.rows()), cols(m.cols()) {
        a.assign(rows_n, QVec(cols));
        for (const auto& [k, v] : m.entries()) a[k.first][k.second] = v;
    }

    void run(long pivot_col_bound = -1) {
        if (pivot_col_bound < 0) pivot_col_bound = cols;
        long pr = 0;
        for (long c = 0; c < pivot_col_bound && pr < rows_n; ++c) {
            long sel = -1;
            for (long r = pr; r < rows_n; ++r)
                if (!a[r][c].is_zero()) { sel = r; break; }
            if (sel < 0) continue;
            std::swap(a[sel], a[pr]);
            Rational inv = Rational(1) / a[pr][c];
            for (long j = 0; j < cols; ++j) a[pr][j] *= inv;
            for (long r = 0; r < rows_n; ++r) {
                if (r == pr || a[r][c].is_zero()) continue;
                Rational f = a[r][c];
                for (long j = 0; j < cols; ++j) a[r][j] -= f * a[pr][j];
            }
            pivots.push_back({pr, c});
            ++pr;
        }
        first_nonpivot_row = pr;
    }

    Rational row_entry(long r, long c) const { return a[r][c]; }

    long rank() const { return (long)pivots.size(); }

    std::vector<QVec> kernel() const {
        std::vector<bool> is_pivot_col(cols, false);
        for (const auto& [r, c] : pivots) is_pivot_col[c] = true;
        std::vector<QVec> basis;
        for (long f = 0; f < cols; ++f) {
            if (is_pivot_col[f]) continue;
            QVec x(cols);
            x[f] = 1;
            for (const auto& [r, c] : pivots) x[c] = -a[r][f];
            basis.push_back(std::move(x));
        }
        return basis;
    }
};

inline bool use_dense(const SparseMatrix& m) { return m.rows() < 64 && m.cols() < 64; }

} // namespace detail

/// Rank over the rationals by exact elimination.
inline long rank(const SparseMatrix& m) {
    if (detail::use_dense(m)) {
        detail::DenseElim e(m);
        e.run();
        return e.rank();
    }
    detail::Eliminator e(m);
    e.run();
    return e.rank();
}

/// Exact basis of the null space; size is cols - rank.
inline std::vector<QVec> kernel_basis(const SparseMatrix& m) {
    if (detail::use_dense(m)) {
        detail::DenseElim e(m);
        e.run();
        return e.kernel();
    }
    detail::Eliminator e(m);
    e.run();
    return e.kernel();
}

/// One exact solution of A x = b, if consistent. Free variables are set to 0.
inline std::optional<QVec> solve(const SparseMatrix& A, const QVec& b) {
    if ((long)b.size() != A.rows()) throw ValidationError("solve shape mismatch");
    SparseMatrix aug(A.rows(), A.cols() + 1);
    for (const auto& [k, v] : A.entries()) aug.set(k.first, k.second, v);
    for (long r = 0; r < A.rows(); ++r)
        if (!b[r].is_zero()) aug.set(r, A.cols(), b[r]);

    if (detail::use_dense(aug)) {
        detail::DenseElim e(aug);
        e.run(A.cols());
        // leftover rows have empty coefficient part; nonzero b there means inconsistent
        for (long r = e.first_nonpivot_row; r < e.rows_n; ++r)
            if (!e.a[r][A.cols()].is_zero()) return std::nullopt;
        QVec x(A.cols());
        for (const auto& [er, ec] : e.pivots) x[ec] = e.row_entry(er, A.cols());
        return x;
    }
    detail::Eliminator e(aug);
    e.run(A.cols());
    for (size_t r = 0; r < e.rows.size(); ++r)
        if (!e.row_done[r] && !e.rows[r].empty()) {
            // all coefficient columns exhausted: any remaining support is the b column
            if (!e.row_entry((long)r, A.cols()).is_zero()) return std::nullopt;
        }
    QVec x(A.cols());
    for (const auto& [er, ec] : e.pivots) x[ec] = e.row_entry(er, A.cols());
    return x;
}

/// Coordinates of `target` in the span of `basis` (vectors of equal length),
/// or nullopt if target is outside the span.
inline std::optional<QVec> coordinates_in_span(const std::vector<QVec>& basis, const QVec& target) {
    long n = (long)target.size();
    SparseMatrix A(n, (long)basis.size());
    for (long j = 0; j < (long)basis.size(); ++j) {
        if ((long)basis[j].size() != n) throw ValidationError("basis vector length mismatch");
        for (long i = 0; i < n; ++i)
            if (!basis[j][i].is_zero()) A.set(i, j, basis[j][i]);
    }
    return solve(A, target);
}

/// Inverse of a square dense matrix; nullopt when singular.
inline std::optional<QMat> inverse(const QMat& m) {
    if (m.rows() != m.cols()) return std::nullopt;
    long n = m.rows();
    QMat aug(n, 2 * n);
    for (long r = 0; r < n; ++r) {
        for (long c = 0; c < n; ++c) aug.at(r, c) = m.at(r, c);
        aug.at(r, n + r) = 1;
    }
    long pr = 0;
    for (long c = 0; c < n; ++c) {
        long sel = -1;
        for (long r = pr; r < n; ++r)
            if (!aug.at(r, c).is_zero()) { sel = r; break; }
        if (sel < 0) return std::nullopt;
        for (long j = 0; j < 2 * n; ++j) std::swap(aug.at(sel, j), aug.at(pr, j));
        Rational inv = Rational(1) / aug.at(pr, c);
        for (long j = 0; j < 2 * n; ++j) aug.at(pr, j) *= inv;
        for (long r = 0; r < n; ++r) {
            if (r == pr || aug.at(r, c).is_zero()) continue;
            Rational f = aug.at(r, c);
            for (long j = 0; j < 2 * n; ++j) aug.at(r, j) -= f * aug.at(pr, j);
        }
        ++pr;
    }
    QMat out(n, n);
    for (long r = 0; r < n; ++r)
        for (long c = 0; c < n; ++c) out.at(r, c) = aug.at(r, n + c);
    return out;
}

} // namespace tdr

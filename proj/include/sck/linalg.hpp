#pragma once

// Exact linear algebra over Scalar: incremental row reduction for span /
// rank questions, plus dense rank, nullspace and linear solving.  Rows are
// kept sparse because ideal components in high degree are mostly zeros.

#include <cstddef>
#include <map>
#include <vector>

#include "sck/scalar.hpp"

namespace sck {

using SparseRow = std::map<std::size_t, Scalar>;  // col -> nonzero coeff

inline void row_axpy(SparseRow& dst, const Scalar& c, const SparseRow& src) {
    for (const auto& [j, v] : src) {
        auto it = dst.find(j);
        if (it == dst.end()) {
            Scalar t = c * v;
            if (!t.is_zero()) dst.emplace(j, std::move(t));
        } else {
            it->second += c * v;
            if (it->second.is_zero()) dst.erase(it);
        }
    }
}

/// Row space in reduced echelon form, built incrementally.
class RowSpace {
public:
    /// Reduce `row` against the current basis.  If a nonzero remainder is
    /// left it joins the basis (normalized, back-substituted) and the call
    /// returns true.
    bool insert(SparseRow row) {
        reduce(row);
        if (row.empty()) return false;
        const auto& [pivot, lead] = *row.begin();
        Scalar inv = lead.inverse();
        for (auto& [j, v] : row) v *= inv;
        // back-substitute into existing rows to keep the basis reduced
        for (auto& [p, r] : rows_) {
            auto it = r.find(pivot);
            if (it != r.end()) {
                Scalar c = -it->second;
                row_axpy(r, c, row);
            }
        }
        rows_.emplace(pivot, std::move(row));
        return true;
    }

    /// Remainder of `row` modulo the span (in place).
    void reduce(SparseRow& row) const {
        while (!row.empty()) {
            auto lead = row.begin();
            auto it = rows_.find(lead->first);
            if (it == rows_.end()) {
                // leading column is not a pivot; later columns may still be
                reduce_tail(row, lead->first);
                return;
            }
            Scalar c = -lead->second;
            row_axpy(row, c, it->second);
        }
    }

    bool contains(SparseRow row) const {
        reduce(row);
        return row.empty();
    }

    std::size_t rank() const { return rows_.size(); }

    const std::map<std::size_t, SparseRow>& rows() const { return rows_; }

private:
    void reduce_tail(SparseRow& row, std::size_t after) const {
        auto it = row.upper_bound(after);
        while (it != row.end()) {
            auto piv = rows_.find(it->first);
            if (piv == rows_.end()) {
                ++it;
                continue;
            }
            Scalar c = -it->second;
            row_axpy(row, c, piv->second);
            it = row.upper_bound(after);
            while (it != row.end() && rows_.find(it->first) == rows_.end()) ++it;
        }
    }

    std::map<std::size_t, SparseRow> rows_;  // pivot col -> row
};

using DenseMatrix = std::vector<std::vector<Scalar>>;

/// Gaussian elimination to reduced echelon form.  Returns pivot columns.
inline std::vector<std::size_t> rref(DenseMatrix& m) {
    std::vector<std::size_t> pivots;
    if (m.empty()) return pivots;
    std::size_t rows = m.size(), cols = m[0].size();
    std::size_t r = 0;
    for (std::size_t c = 0; c < cols && r < rows; ++c) {
        std::size_t sel = rows;
        for (std::size_t i = r; i < rows; ++i)
            if (!m[i][c].is_zero()) {
                sel = i;
                break;
            }
        if (sel == rows) continue;
        std::swap(m[r], m[sel]);
        Scalar inv = m[r][c].inverse();
        for (std::size_t j = c; j < cols; ++j) m[r][j] *= inv;
        for (std::size_t i = 0; i < rows; ++i) {
            if (i == r || m[i][c].is_zero()) continue;
            Scalar f = m[i][c];
            for (std::size_t j = c; j < cols; ++j) m[i][j] -= f * m[r][j];
        }
        pivots.push_back(c);
        ++r;
    }
    return pivots;
}

inline std::size_t matrix_rank(DenseMatrix m) { return rref(m).size(); }

/// Basis of the right nullspace {v : Mv = 0}.
inline std::vector<std::vector<Scalar>> nullspace(DenseMatrix m, const FieldPtr& field) {
    if (m.empty()) return {};
    std::size_t cols = m[0].size();
    auto pivots = rref(m);
    std::vector<bool> is_pivot(cols, false);
    for (auto c : pivots) is_pivot[c] = true;
    std::vector<std::vector<Scalar>> basis;
    for (std::size_t fc = 0; fc < cols; ++fc) {
        if (is_pivot[fc]) continue;
        std::vector<Scalar> v(cols, field->zero());
        v[fc] = field->one();
        for (std::size_t r = 0; r < pivots.size(); ++r) v[pivots[r]] = -m[r][fc];
        basis.push_back(std::move(v));
    }
    return basis;
}

/// Solve Mx = b exactly.  Returns one solution or nullopt if inconsistent.
inline std::optional<std::vector<Scalar>> solve(DenseMatrix m, std::vector<Scalar> b,
                                                const FieldPtr& field) {
    std::size_t rows = m.size();
    std::size_t cols = rows ? m[0].size() : 0;
    for (std::size_t i = 0; i < rows; ++i) m[i].push_back(b[i]);
    auto pivots = rref(m);
    if (!pivots.empty() && pivots.back() == cols) return std::nullopt;
    std::vector<Scalar> x(cols, field->zero());
    for (std::size_t r = 0; r < pivots.size(); ++r) x[pivots[r]] = m[r][cols];
    return x;
}

/// Determinant by fraction-free-ish elimination (fields, so plain Gauss).
inline Scalar determinant(DenseMatrix m, const FieldPtr& field) {
    std::size_t n = m.size();
    Scalar det = field->one();
    for (std::size_t c = 0; c < n; ++c) {
        std::size_t sel = n;
        for (std::size_t i = c; i < n; ++i)
            if (!m[i][c].is_zero()) {
                sel = i;
                break;
            }
        if (sel == n) return field->zero();
        if (sel != c) {
            std::swap(m[c], m[sel]);
            det = -det;
        }
        det *= m[c][c];
        Scalar inv = m[c][c].inverse();
        for (std::size_t i = c + 1; i < n; ++i) {
            if (m[i][c].is_zero()) continue;
            Scalar f = m[i][c] * inv;
            for (std::size_t j = c; j < n; ++j) m[i][j] -= f * m[c][j];
        }
    }
    return det;
}

}  // namespace sck

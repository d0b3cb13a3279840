// SPDX-License-Identifier: Apache-2.0
#include "ictrl/matrix.hpp"

#include <sstream>

#include "ictrl/errors.hpp"

namespace ictrl {

RatMatrix::RatMatrix(std::initializer_list<std::initializer_list<Rational>> rows) {
    rows_ = rows.size();
    cols_ = rows_ == 0 ? 0 : rows.begin()->size();
    data_.reserve(rows_ * cols_);
    for (const auto &r : rows) {
        if (r.size() != cols_) {
            throw DimensionMismatch("ragged initializer for RatMatrix");
        }
        for (const auto &x : r) data_.push_back(x);
    }
}

RatMatrix RatMatrix::identity(size_t n) {
    RatMatrix m(n, n);
    for (size_t i = 0; i < n; ++i) m(i, i) = 1;
    return m;
}

RatMatrix RatMatrix::column(const RatVec &v) {
    RatMatrix m(v.size(), 1);
    for (size_t i = 0; i < v.size(); ++i) m(i, 0) = v[i];
    return m;
}

RatMatrix RatMatrix::transposed() const {
    RatMatrix t(cols_, rows_);
    for (size_t i = 0; i < rows_; ++i)
        for (size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
    return t;
}

RatMatrix RatMatrix::col(size_t j) const { return block(0, j, rows_, 1); }
RatMatrix RatMatrix::row(size_t i) const { return block(i, 0, 1, cols_); }

RatMatrix RatMatrix::block(size_t i0, size_t j0, size_t nrows, size_t ncols) const {
    if (i0 + nrows > rows_ || j0 + ncols > cols_) {
        throw DimensionMismatch("block exceeds matrix bounds");
    }
    RatMatrix b(nrows, ncols);
    for (size_t i = 0; i < nrows; ++i)
        for (size_t j = 0; j < ncols; ++j) b(i, j) = (*this)(i0 + i, j0 + j);
    return b;
}

RatVec RatMatrix::col_vec(size_t j) const {
    RatVec v(rows_);
    for (size_t i = 0; i < rows_; ++i) v[i] = (*this)(i, j);
    return v;
}

RatVec RatMatrix::to_vec() const {
    if (cols_ != 1 && rows_ != 1) {
        throw DimensionMismatch("to_vec requires a single row or column");
    }
    return data_;
}

bool RatMatrix::is_zero() const {
    for (const auto &x : data_)
        if (!x.is_zero()) return false;
    return true;
}

bool RatMatrix::is_identity() const {
    if (rows_ != cols_) return false;
    for (size_t i = 0; i < rows_; ++i)
        for (size_t j = 0; j < cols_; ++j)
            if ((*this)(i, j) != Rational(i == j ? 1 : 0)) return false;
    return true;
}

bool RatMatrix::is_integral() const {
    for (const auto &x : data_)
        if (!x.is_integer()) return false;
    return true;
}

bool RatMatrix::entries_01() const {
    for (const auto &x : data_)
        if (!x.is_zero() && !x.is_one()) return false;
    return true;
}

bool operator==(const RatMatrix &a, const RatMatrix &b) {
    return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
}

std::string RatMatrix::str() const {
    std::ostringstream os;
    os << "[";
    for (size_t i = 0; i < rows_; ++i) {
        os << (i ? "; " : "");
        for (size_t j = 0; j < cols_; ++j) os << (j ? " " : "") << (*this)(i, j);
    }
    os << "]";
    return os.str();
}

RatMatrix operator+(const RatMatrix &a, const RatMatrix &b) {
    if (a.rows() != b.rows() || a.cols() != b.cols()) {
        throw DimensionMismatch("add: " + std::to_string(a.rows()) + "x" + std::to_string(a.cols()) +
                                " vs " + std::to_string(b.rows()) + "x" + std::to_string(b.cols()));
    }
    RatMatrix c(a.rows(), a.cols());
    for (size_t i = 0; i < a.rows(); ++i)
        for (size_t j = 0; j < a.cols(); ++j) c(i, j) = a(i, j) + b(i, j);
    return c;
}

RatMatrix operator-(const RatMatrix &a, const RatMatrix &b) { return a + (-b); }

RatMatrix operator-(const RatMatrix &m) {
    RatMatrix c(m.rows(), m.cols());
    for (size_t i = 0; i < m.rows(); ++i)
        for (size_t j = 0; j < m.cols(); ++j) c(i, j) = -m(i, j);
    return c;
}

RatMatrix operator*(const RatMatrix &a, const RatMatrix &b) {
    if (a.cols() != b.rows()) {
        throw DimensionMismatch("mul: " + std::to_string(a.rows()) + "x" + std::to_string(a.cols()) +
                                " times " + std::to_string(b.rows()) + "x" + std::to_string(b.cols()));
    }
    RatMatrix c(a.rows(), b.cols());
    for (size_t i = 0; i < a.rows(); ++i)
        for (size_t k = 0; k < a.cols(); ++k) {
            if (a(i, k).is_zero()) continue;
            for (size_t j = 0; j < b.cols(); ++j) {
                if (b(k, j).is_zero()) continue;
                c(i, j) += a(i, k) * b(k, j);
            }
        }
    return c;
}

RatMatrix operator*(const Rational &s, const RatMatrix &m) {
    RatMatrix c(m.rows(), m.cols());
    for (size_t i = 0; i < m.rows(); ++i)
        for (size_t j = 0; j < m.cols(); ++j) c(i, j) = s * m(i, j);
    return c;
}

RatVec operator*(const RatMatrix &m, const RatVec &v) {
    if (m.cols() != v.size()) {
        throw DimensionMismatch("matvec: " + std::to_string(m.cols()) + " cols vs vector of " +
                                std::to_string(v.size()));
    }
    RatVec r(m.rows());
    for (size_t i = 0; i < m.rows(); ++i)
        for (size_t j = 0; j < m.cols(); ++j) r[i] += m(i, j) * v[j];
    return r;
}

RatMatrix hstack(const RatMatrix &a, const RatMatrix &b) {
    if (a.rows() == 0 && a.cols() == 0) return b;  // 0x0 acts as empty
    if (b.rows() == 0 && b.cols() == 0) return a;
    if (a.rows() != b.rows()) {
        throw DimensionMismatch("hstack row counts differ");
    }
    RatMatrix c(a.rows(), a.cols() + b.cols());
    for (size_t i = 0; i < a.rows(); ++i) {
        for (size_t j = 0; j < a.cols(); ++j) c(i, j) = a(i, j);
        for (size_t j = 0; j < b.cols(); ++j) c(i, a.cols() + j) = b(i, j);
    }
    return c;
}

RatMatrix vstack(const RatMatrix &a, const RatMatrix &b) {
    if (a.rows() == 0 && a.cols() == 0) return b;
    if (b.rows() == 0 && b.cols() == 0) return a;
    if (a.cols() != b.cols()) {
        throw DimensionMismatch("vstack column counts differ");
    }
    RatMatrix c(a.rows() + b.rows(), a.cols());
    for (size_t j = 0; j < a.cols(); ++j) {
        for (size_t i = 0; i < a.rows(); ++i) c(i, j) = a(i, j);
        for (size_t i = 0; i < b.rows(); ++i) c(a.rows() + i, j) = b(i, j);
    }
    return c;
}

RatMatrix hstack(const std::vector<RatMatrix> &parts, size_t rows_hint) {
    RatMatrix acc(rows_hint, 0);
    for (const auto &p : parts) acc = hstack(acc, p);
    return acc;
}

RrefResult rref(const RatMatrix &m) {
    RatMatrix r = m;
    std::vector<size_t> pivots;
    size_t prow = 0;
    for (size_t col = 0; col < r.cols() && prow < r.rows(); ++col) {
        size_t sel = prow;
        while (sel < r.rows() && r(sel, col).is_zero()) ++sel;
        if (sel == r.rows()) continue;
        if (sel != prow) {
            for (size_t j = 0; j < r.cols(); ++j) std::swap(r(prow, j), r(sel, j));
        }
        const Rational piv = r(prow, col);
        for (size_t j = col; j < r.cols(); ++j) r(prow, j) /= piv;
        for (size_t i = 0; i < r.rows(); ++i) {
            if (i == prow || r(i, col).is_zero()) continue;
            const Rational f = r(i, col);
            for (size_t j = col; j < r.cols(); ++j) r(i, j) -= f * r(prow, j);
        }
        pivots.push_back(col);
        ++prow;
    }
    return {std::move(r), std::move(pivots)};
}

size_t rank(const RatMatrix &m) { return rref(m).pivot_cols.size(); }

RatMatrix inverse(const RatMatrix &m) {
    if (m.rows() != m.cols()) {
        throw DimensionMismatch("inverse of non-square matrix");
    }
    const size_t n = m.rows();
    if (n == 0) return m;
    auto aug = hstack(m, RatMatrix::identity(n));
    auto rr = rref(aug);
    for (size_t i = 0; i < n; ++i) {
        if (i >= rr.pivot_cols.size() || rr.pivot_cols[i] != i) {
            throw SingularMatrix("matrix is not invertible");
        }
    }
    return rr.reduced.block(0, n, n, n);
}

RatMatrix pow(const RatMatrix &m, unsigned e) {
    if (m.rows() != m.cols()) {
        throw DimensionMismatch("power of non-square matrix");
    }
    RatMatrix result = RatMatrix::identity(m.rows());
    RatMatrix base = m;
    while (e > 0) {
        if (e & 1u) result = result * base;
        e >>= 1u;
        if (e) base = base * base;
    }
    return result;
}

RatMatrix kernel_basis(const RatMatrix &m) {
    const size_t n = m.cols();
    if (m.rows() == 0) return RatMatrix::identity(n);
    auto rr = rref(m);
    std::vector<bool> is_pivot(n, false);
    for (size_t c : rr.pivot_cols) is_pivot[c] = true;
    std::vector<size_t> free_cols;
    for (size_t c = 0; c < n; ++c)
        if (!is_pivot[c]) free_cols.push_back(c);

    RatMatrix basis(n, free_cols.size());
    for (size_t k = 0; k < free_cols.size(); ++k) {
        const size_t f = free_cols[k];
        basis(f, k) = 1;
        for (size_t pi = 0; pi < rr.pivot_cols.size(); ++pi) {
            basis(rr.pivot_cols[pi], k) = -rr.reduced(pi, f);
        }
        // Sign normalization: first nonzero entry positive.
        for (size_t i = 0; i < n; ++i) {
            if (basis(i, k).is_zero()) continue;
            if (basis(i, k).sign() < 0) {
                for (size_t t = i; t < n; ++t) basis(t, k) = -basis(t, k);
            }
            break;
        }
    }
    return basis;
}

bool in_span(const RatMatrix &basis, const RatMatrix &v) {
    if (basis.rows() != v.rows()) {
        throw DimensionMismatch("in_span: row counts differ");
    }
    if (v.is_zero()) return true;
    if (basis.cols() == 0) return false;
    return rank(hstack(basis, v)) == rank(basis);
}

RatMatrix complete_basis(const RatMatrix &current, const RatMatrix &candidates, size_t target_rank) {
    RatMatrix acc = current;
    RatMatrix added(current.rows(), 0);
    size_t r = acc.cols() == 0 ? 0 : rank(acc);
    for (size_t j = 0; j < candidates.cols() && r < target_rank; ++j) {
        auto cand = candidates.col(j);
        auto trial = hstack(acc, cand);
        const size_t tr = rank(trial);
        if (tr > r) {
            acc = std::move(trial);
            added = hstack(added, cand);
            r = tr;
        }
    }
    if (r != target_rank) {
        throw Error("basis completion failed to reach target rank");
    }
    return added;
}

}  // namespace ictrl

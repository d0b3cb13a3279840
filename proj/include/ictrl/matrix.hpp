// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <initializer_list>
#include <string>
#include <utility>
#include <vector>

#include "ictrl/rational.hpp"

namespace ictrl {

/// Dense matrix of exact rationals, row-major. Matrices with zero rows or
/// zero columns are first-class values (the basis-completion algorithms
/// produce and consume them).
class RatMatrix {
public:
    RatMatrix() : rows_(0), cols_(0) {}
    RatMatrix(size_t rows, size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}
    RatMatrix(std::initializer_list<std::initializer_list<Rational>> rows);

    static RatMatrix identity(size_t n);
    static RatMatrix zero(size_t rows, size_t cols) { return RatMatrix(rows, cols); }
    static RatMatrix column(const RatVec &v);

    size_t rows() const { return rows_; }
    size_t cols() const { return cols_; }
    bool is_null() const { return rows_ == 0 || cols_ == 0; }

    Rational &operator()(size_t i, size_t j) { return data_[i * cols_ + j]; }
    const Rational &operator()(size_t i, size_t j) const { return data_[i * cols_ + j]; }

    RatMatrix transposed() const;
    RatMatrix col(size_t j) const;
    RatMatrix row(size_t i) const;
    RatMatrix block(size_t i0, size_t j0, size_t nrows, size_t ncols) const;

    RatVec col_vec(size_t j) const;
    RatVec to_vec() const;  // requires a single column or a single row

    bool is_zero() const;
    bool is_identity() const;
    bool is_integral() const;
    bool entries_01() const;

    friend bool operator==(const RatMatrix &a, const RatMatrix &b);
    friend bool operator!=(const RatMatrix &a, const RatMatrix &b) { return !(a == b); }

    std::string str() const;

private:
    size_t rows_, cols_;
    std::vector<Rational> data_;
};

RatMatrix operator+(const RatMatrix &a, const RatMatrix &b);
RatMatrix operator-(const RatMatrix &a, const RatMatrix &b);
RatMatrix operator*(const RatMatrix &a, const RatMatrix &b);
RatMatrix operator*(const Rational &s, const RatMatrix &m);
RatMatrix operator-(const RatMatrix &m);
RatVec operator*(const RatMatrix &m, const RatVec &v);

RatMatrix hstack(const RatMatrix &a, const RatMatrix &b);
RatMatrix vstack(const RatMatrix &a, const RatMatrix &b);
RatMatrix hstack(const std::vector<RatMatrix> &parts, size_t rows_hint);

/// Exact inverse; throws SingularMatrix for rank-deficient input.
RatMatrix inverse(const RatMatrix &m);

/// Exact power, exponent >= 0; pow(m, 0) = identity.
RatMatrix pow(const RatMatrix &m, unsigned e);

struct RrefResult {
    RatMatrix reduced;
    std::vector<size_t> pivot_cols;  // strictly increasing
};

/// Reduced row echelon form with deterministic pivoting: each pivot is the
/// first row (top-down) with a nonzero entry in the leftmost unresolved
/// column.
RrefResult rref(const RatMatrix &m);

size_t rank(const RatMatrix &m);

/// Deterministic kernel basis: one column per free column of rref(m), with
/// sign normalized so the first nonzero entry is positive. Returns an
/// n x 0 matrix when m has full column rank; returns the identity columns
/// for a matrix with no rows.
RatMatrix kernel_basis(const RatMatrix &m);

/// True iff v lies in the column span of basis (exact membership test).
bool in_span(const RatMatrix &basis, const RatMatrix &v);

/// Greedily extends `current` with columns from `candidates` (left to
/// right) until rank target_rank is reached; returns only the appended
/// columns. Throws if the candidates cannot reach the target.
RatMatrix complete_basis(const RatMatrix &current, const RatMatrix &candidates, size_t target_rank);

}  // namespace ictrl

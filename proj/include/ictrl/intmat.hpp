// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <vector>

#include "ictrl/matrix.hpp"
#include "ictrl/rational.hpp"

namespace ictrl {

/// Dense matrix of arbitrary-precision integers, row-major. The runtimes
/// keep all ciphertext-side data in this type so integer closure holds by
/// construction.
class IntMatrix {
public:
    IntMatrix() : rows_(0), cols_(0) {}
    IntMatrix(size_t rows, size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}

    size_t rows() const { return rows_; }
    size_t cols() const { return cols_; }

    Int &operator()(size_t i, size_t j) { return data_[i * cols_ + j]; }
    const Int &operator()(size_t i, size_t j) const { return data_[i * cols_ + j]; }

    /// Exact conversion; every entry must be an integer.
    static IntMatrix from_exact(const RatMatrix &m);

    RatMatrix to_rational() const;
    Int max_abs() const;

private:
    size_t rows_, cols_;
    std::vector<Int> data_;
};

/// Componentwise round(m / step), ties away from zero.
IntMatrix round_matrix(const RatMatrix &m, const Rational &step);
IntVec round_vec(const RatVec &v, const Rational &step);

/// Tracks the largest absolute integer seen, including the partial sums of
/// accumulations (plaintext overflow happens there first).
struct RangeTracker {
    Int max_abs = 0;

    void see(const Int &x) {
        Int a = ::abs(x);
        if (a > max_abs) max_abs = a;
    }
};

/// m * v with optional range tracking of every term and partial sum.
IntVec mul(const IntMatrix &m, const IntVec &v, RangeTracker *tracker = nullptr);

IntVec add(const IntVec &a, const IntVec &b);

Int max_abs(const IntVec &v);

}  // namespace ictrl

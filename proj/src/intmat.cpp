// SPDX-License-Identifier: Apache-2.0
#include "ictrl/intmat.hpp"

#include "ictrl/errors.hpp"

namespace ictrl {

IntMatrix IntMatrix::from_exact(const RatMatrix &m) {
    IntMatrix r(m.rows(), m.cols());
    for (size_t i = 0; i < m.rows(); ++i)
        for (size_t j = 0; j < m.cols(); ++j) r(i, j) = m(i, j).to_int();
    return r;
}

RatMatrix IntMatrix::to_rational() const {
    RatMatrix r(rows_, cols_);
    for (size_t i = 0; i < rows_; ++i)
        for (size_t j = 0; j < cols_; ++j) r(i, j) = Rational((*this)(i, j));
    return r;
}

Int IntMatrix::max_abs() const {
    Int m = 0;
    for (const auto &x : data_) {
        Int a = ::abs(x);
        if (a > m) m = a;
    }
    return m;
}

IntMatrix round_matrix(const RatMatrix &m, const Rational &step) {
    IntMatrix r(m.rows(), m.cols());
    for (size_t i = 0; i < m.rows(); ++i)
        for (size_t j = 0; j < m.cols(); ++j) r(i, j) = round_div(m(i, j), step);
    return r;
}

IntVec round_vec(const RatVec &v, const Rational &step) {
    IntVec r(v.size());
    for (size_t i = 0; i < v.size(); ++i) r[i] = round_div(v[i], step);
    return r;
}

IntVec mul(const IntMatrix &m, const IntVec &v, RangeTracker *tracker) {
    if (m.cols() != v.size()) {
        throw DimensionMismatch("integer matvec: " + std::to_string(m.cols()) + " cols vs vector of " +
                                std::to_string(v.size()));
    }
    IntVec r(m.rows());
    for (size_t i = 0; i < m.rows(); ++i) {
        Int acc = 0;
        for (size_t j = 0; j < m.cols(); ++j) {
            if (m(i, j) == 0) continue;
            Int term = m(i, j) * v[j];
            acc += term;
            if (tracker) {
                tracker->see(term);
                tracker->see(acc);
            }
        }
        r[i] = acc;
    }
    return r;
}

IntVec add(const IntVec &a, const IntVec &b) {
    if (a.size() != b.size()) throw DimensionMismatch("integer vector add sizes differ");
    IntVec r(a.size());
    for (size_t i = 0; i < a.size(); ++i) r[i] = a[i] + b[i];
    return r;
}

Int max_abs(const IntVec &v) {
    Int m = 0;
    for (const auto &x : v) {
        Int a = ::abs(x);
        if (a > m) m = a;
    }
    return m;
}

}  // namespace ictrl

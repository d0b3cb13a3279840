// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>
#include <vector>

#include "ictrl/matrix.hpp"
#include "ictrl/rational.hpp"

namespace ictrl {

/// Univariate polynomial over the rationals, coefficients ascending by
/// degree, no trailing zeros (the zero polynomial is the empty sequence).
class RatPoly {
public:
    RatPoly() = default;
    explicit RatPoly(std::vector<Rational> coeffs);

    static RatPoly constant(const Rational &c);
    /// s^k
    static RatPoly monomial(size_t k);

    bool is_zero() const { return c_.empty(); }
    /// Degree; -1 for the zero polynomial.
    int degree() const { return static_cast<int>(c_.size()) - 1; }
    const std::vector<Rational> &coeffs() const { return c_; }
    Rational coeff(size_t k) const { return k < c_.size() ? c_[k] : Rational(0); }
    Rational leading() const;

    Rational eval(const Rational &x) const;
    /// Horner evaluation with a square matrix argument (constant term times
    /// the identity).
    RatMatrix eval(const RatMatrix &x) const;

    RatPoly derivative() const;
    RatPoly monic() const;

    friend RatPoly operator+(const RatPoly &a, const RatPoly &b);
    friend RatPoly operator-(const RatPoly &a, const RatPoly &b);
    friend RatPoly operator*(const RatPoly &a, const RatPoly &b);
    friend bool operator==(const RatPoly &a, const RatPoly &b) { return a.c_ == b.c_; }
    friend bool operator!=(const RatPoly &a, const RatPoly &b) { return !(a == b); }

    std::string str() const;

private:
    void trim();
    std::vector<Rational> c_;
};

/// Euclidean remainder of a by b (b nonzero).
RatPoly poly_rem(const RatPoly &a, const RatPoly &b);

/// Monic gcd; gcd(p, 0) = monic(p), gcd(0, 0) = 0.
RatPoly poly_gcd(const RatPoly &a, const RatPoly &b);

/// Number of distinct complex roots: deg p - deg gcd(p, p').
size_t distinct_root_count(const RatPoly &p);

/// Monic characteristic polynomial det(sI - f), exact over Q
/// (Faddeev-LeVerrier recursion). f must be square; the 0x0 matrix yields
/// the constant 1.
RatPoly char_poly(const RatMatrix &f);

}  // namespace ictrl

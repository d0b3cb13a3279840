// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <gmpxx.h>

#include <iosfwd>
#include <string>
#include <vector>

namespace ictrl {

using Int = mpz_class;

/// Exact rational scalar. Always stored reduced with positive denominator,
/// so equality is plain value equality and serialization is canonical.
class Rational {
public:
    Rational() : v_(0) {}
    Rational(int n) : v_(n) {}           // NOLINT: implicit by design
    Rational(long n) : v_(static_cast<signed long>(n)) {}
    Rational(const Int &n) : v_(n) {}
    Rational(const Int &num, const Int &den);
    Rational(long num, long den);

    /// Parses "p/q" (q > 0 after normalization) or a bare integer "p".
    static Rational parse(const std::string &s);

    Int num() const { return v_.get_num(); }
    Int den() const { return v_.get_den(); }

    bool is_zero() const { return v_ == 0; }
    bool is_integer() const { return v_.get_den() == 1; }
    bool is_one() const { return v_ == 1; }
    int sign() const { return sgn(v_); }

    /// Canonical string: "p/q" in lowest terms with q > 0, or "p" when q = 1.
    std::string str() const;
    double to_double() const { return v_.get_d(); }

    /// Exact integer value; caller must ensure is_integer().
    Int to_int() const;

    Rational operator-() const;
    Rational &operator+=(const Rational &o);
    Rational &operator-=(const Rational &o);
    Rational &operator*=(const Rational &o);
    Rational &operator/=(const Rational &o);

    friend Rational operator+(Rational a, const Rational &b) { return a += b; }
    friend Rational operator-(Rational a, const Rational &b) { return a -= b; }
    friend Rational operator*(Rational a, const Rational &b) { return a *= b; }
    friend Rational operator/(Rational a, const Rational &b) { return a /= b; }

    friend bool operator==(const Rational &a, const Rational &b) { return a.v_ == b.v_; }
    friend bool operator!=(const Rational &a, const Rational &b) { return a.v_ != b.v_; }
    friend bool operator<(const Rational &a, const Rational &b) { return a.v_ < b.v_; }
    friend bool operator<=(const Rational &a, const Rational &b) { return a.v_ <= b.v_; }
    friend bool operator>(const Rational &a, const Rational &b) { return a.v_ > b.v_; }
    friend bool operator>=(const Rational &a, const Rational &b) { return a.v_ >= b.v_; }

    friend std::ostream &operator<<(std::ostream &os, const Rational &r);

private:
    mpq_class v_;
};

Rational abs(const Rational &r);
Rational inv(const Rational &r);

/// Rounds v/step to the nearest integer, ties away from zero.
Int round_div(const Rational &v, const Rational &step);

using RatVec = std::vector<Rational>;
using IntVec = std::vector<Int>;

}  // namespace ictrl

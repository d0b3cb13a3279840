// SPDX-License-Identifier: Apache-2.0
#include "ictrl/poly.hpp"

#include <sstream>

#include "ictrl/errors.hpp"

namespace ictrl {

RatPoly::RatPoly(std::vector<Rational> coeffs) : c_(std::move(coeffs)) { trim(); }

void RatPoly::trim() {
    while (!c_.empty() && c_.back().is_zero()) c_.pop_back();
}

RatPoly RatPoly::constant(const Rational &c) { return RatPoly({c}); }

RatPoly RatPoly::monomial(size_t k) {
    std::vector<Rational> c(k + 1);
    c[k] = 1;
    return RatPoly(std::move(c));
}

Rational RatPoly::leading() const {
    if (c_.empty()) throw Error("leading coefficient of zero polynomial");
    return c_.back();
}

Rational RatPoly::eval(const Rational &x) const {
    Rational acc(0);
    for (size_t i = c_.size(); i-- > 0;) acc = acc * x + c_[i];
    return acc;
}

RatMatrix RatPoly::eval(const RatMatrix &x) const {
    if (x.rows() != x.cols()) throw DimensionMismatch("polynomial of non-square matrix");
    RatMatrix acc = RatMatrix::zero(x.rows(), x.cols());
    const RatMatrix eye = RatMatrix::identity(x.rows());
    for (size_t i = c_.size(); i-- > 0;) acc = acc * x + c_[i] * eye;
    return acc;
}

RatPoly RatPoly::derivative() const {
    if (c_.size() <= 1) return RatPoly();
    std::vector<Rational> d(c_.size() - 1);
    for (size_t i = 1; i < c_.size(); ++i) d[i - 1] = Rational(static_cast<long>(i)) * c_[i];
    return RatPoly(std::move(d));
}

RatPoly RatPoly::monic() const {
    if (is_zero()) return *this;
    const Rational lc = leading();
    std::vector<Rational> m(c_.size());
    for (size_t i = 0; i < c_.size(); ++i) m[i] = c_[i] / lc;
    return RatPoly(std::move(m));
}

RatPoly operator+(const RatPoly &a, const RatPoly &b) {
    std::vector<Rational> c(std::max(a.c_.size(), b.c_.size()));
    for (size_t i = 0; i < c.size(); ++i) c[i] = a.coeff(i) + b.coeff(i);
    return RatPoly(std::move(c));
}

RatPoly operator-(const RatPoly &a, const RatPoly &b) {
    std::vector<Rational> c(std::max(a.c_.size(), b.c_.size()));
    for (size_t i = 0; i < c.size(); ++i) c[i] = a.coeff(i) - b.coeff(i);
    return RatPoly(std::move(c));
}

RatPoly operator*(const RatPoly &a, const RatPoly &b) {
    if (a.is_zero() || b.is_zero()) return RatPoly();
    std::vector<Rational> c(a.c_.size() + b.c_.size() - 1);
    for (size_t i = 0; i < a.c_.size(); ++i)
        for (size_t j = 0; j < b.c_.size(); ++j) c[i + j] += a.c_[i] * b.c_[j];
    return RatPoly(std::move(c));
}

std::string RatPoly::str() const {
    if (is_zero()) return "0";
    std::ostringstream os;
    bool first = true;
    for (size_t i = c_.size(); i-- > 0;) {
        if (c_[i].is_zero()) continue;
        if (!first) os << " + ";
        os << c_[i].str();
        if (i > 0) os << "*s^" << i;
        first = false;
    }
    return os.str();
}

RatPoly poly_rem(const RatPoly &a, const RatPoly &b) {
    if (b.is_zero()) throw Error("polynomial remainder by zero");
    std::vector<Rational> r = a.coeffs();
    const int db = b.degree();
    const Rational lb = b.leading();
    while (static_cast<int>(r.size()) - 1 >= db && !r.empty()) {
        if (r.back().is_zero()) {
            r.pop_back();
            continue;
        }
        const Rational f = r.back() / lb;
        const size_t shift = r.size() - 1 - static_cast<size_t>(db);
        for (int i = 0; i <= db; ++i) {
            r[shift + static_cast<size_t>(i)] -= f * b.coeff(static_cast<size_t>(i));
        }
        // Leading term cancels exactly.
        r.pop_back();
        while (!r.empty() && r.back().is_zero()) r.pop_back();
    }
    return RatPoly(std::move(r));
}

RatPoly poly_gcd(const RatPoly &a, const RatPoly &b) {
    RatPoly x = a, y = b;
    while (!y.is_zero()) {
        RatPoly r = poly_rem(x, y);
        x = y;
        y = std::move(r);
    }
    return x.monic();
}

size_t distinct_root_count(const RatPoly &p) {
    if (p.is_zero()) throw Error("distinct roots of zero polynomial");
    if (p.degree() == 0) return 0;
    const RatPoly g = poly_gcd(p, p.derivative());
    return static_cast<size_t>(p.degree() - g.degree());
}

RatPoly char_poly(const RatMatrix &f) {
    if (f.rows() != f.cols()) throw DimensionMismatch("char_poly of non-square matrix");
    const size_t n = f.rows();
    std::vector<Rational> c(n + 1);
    c[n] = 1;
    if (n == 0) return RatPoly(std::move(c));
    const RatMatrix eye = RatMatrix::identity(n);
    RatMatrix m = eye;
    for (size_t k = 1; k <= n; ++k) {
        RatMatrix fm = f * m;
        Rational tr(0);
        for (size_t i = 0; i < n; ++i) tr += fm(i, i);
        c[n - k] = -tr / Rational(static_cast<long>(k));
        if (k < n) m = fm + c[n - k] * eye;
    }
    return RatPoly(std::move(c));
}

}  // namespace ictrl

// SPDX-License-Identifier: Apache-2.0
#include "ictrl/rational.hpp"

#include <ostream>

#include "ictrl/errors.hpp"

namespace ictrl {

Rational::Rational(const Int &num, const Int &den) {
    if (den == 0) {
        throw Error("rational with zero denominator");
    }
    v_ = mpq_class(num, den);
    v_.canonicalize();
}

Rational::Rational(long num, long den) : Rational(Int(num), Int(den)) {}

Rational Rational::parse(const std::string &s) {
    if (s.empty()) {
        throw ParseError("empty rational literal");
    }
    const auto slash = s.find('/');
    const std::string num_part = slash == std::string::npos ? s : s.substr(0, slash);
    const std::string den_part = slash == std::string::npos ? "1" : s.substr(slash + 1);
    auto check_int = [&](const std::string &t) {
        if (t.empty()) throw ParseError("bad rational literal '" + s + "'");
        size_t i = (t[0] == '-' || t[0] == '+') ? 1 : 0;
        if (i == t.size()) throw ParseError("bad rational literal '" + s + "'");
        for (; i < t.size(); ++i) {
            if (t[i] < '0' || t[i] > '9') throw ParseError("bad rational literal '" + s + "'");
        }
    };
    check_int(num_part);
    check_int(den_part);
    Int num(num_part);
    Int den(den_part);
    if (den == 0) throw ParseError("zero denominator in '" + s + "'");
    return Rational(num, den);
}

std::string Rational::str() const { return v_.get_str(); }

Int Rational::to_int() const {
    if (!is_integer()) {
        throw Error("rational " + str() + " is not an integer");
    }
    return v_.get_num();
}

Rational Rational::operator-() const {
    Rational r;
    r.v_ = -v_;
    return r;
}

Rational &Rational::operator+=(const Rational &o) {
    v_ += o.v_;
    return *this;
}

Rational &Rational::operator-=(const Rational &o) {
    v_ -= o.v_;
    return *this;
}

Rational &Rational::operator*=(const Rational &o) {
    v_ *= o.v_;
    return *this;
}

Rational &Rational::operator/=(const Rational &o) {
    if (o.v_ == 0) {
        throw Error("division by zero rational");
    }
    v_ /= o.v_;
    return *this;
}

std::ostream &operator<<(std::ostream &os, const Rational &r) { return os << r.str(); }

Rational abs(const Rational &r) { return r.sign() < 0 ? -r : r; }

Rational inv(const Rational &r) { return Rational(1) / r; }

Int round_div(const Rational &v, const Rational &step) {
    if (step.sign() <= 0) {
        throw Error("rounding step must be positive");
    }
    const Rational x = v / step;
    Int a = x.num();
    Int b = x.den();  // > 0
    const bool neg = a < 0;
    Int aa = neg ? Int(-a) : a;
    // floor((2*aa + b) / (2*b)) implements round-half-up on |x|.
    Int q = (2 * aa + b) / (2 * b);
    return neg ? Int(-q) : q;
}

std::string error_code(const Error &e) {
    const std::string msg = e.what();
    const auto colon = msg.find(':');
    if (colon == std::string::npos) return "Error";
    return msg.substr(0, colon);
}

}  // namespace ictrl

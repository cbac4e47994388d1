#pragma once

// Exact scalars: arbitrary-precision rationals, half-integers, sqrt(pi)-graded
// values, and the Gamma/Catalan closed forms built on them.

#include <gmpxx.h>

#include <cstdint>
#include <ostream>
#include <string>
#include <string_view>

#include "ctid/error.hpp"

namespace ctid {

using Integer = mpz_class;
/// Always kept canonical: coprime parts, positive denominator, zero as 0/1.
using Rational = mpq_class;

inline Rational make_rational(const Integer& num, const Integer& den = 1) {
    if (den == 0) throw PreconditionError("rational with zero denominator");
    Rational r(num, den);
    r.canonicalize();
    return r;
}

inline std::string to_string(const Integer& z) { return z.get_str(); }

/// `p/q`, or `p` when q = 1.
inline std::string to_string(const Rational& q) { return q.get_str(); }

/// Parses `[-]p[/q]` with decimal digits only; q must be positive.
inline Rational parse_rational(std::string_view text) {
    std::size_t pos = 0;
    bool negative = false;
    if (pos < text.size() && (text[pos] == '-' || text[pos] == '+')) {
        negative = text[pos] == '-';
        ++pos;
    }
    auto digits = [&](std::string_view what) {
        std::size_t start = pos;
        while (pos < text.size() && text[pos] >= '0' && text[pos] <= '9') ++pos;
        if (pos == start) throw ParseError(std::string(what) + " expected", pos);
        return Integer(std::string(text.substr(start, pos - start)));
    };
    Integer num = digits("integer");
    Integer den = 1;
    if (pos < text.size() && text[pos] == '/') {
        ++pos;
        den = digits("denominator");
        if (den == 0) throw ParseError("zero denominator", pos);
    }
    if (pos != text.size()) throw ParseError("unexpected character in rational", pos);
    return make_rational(negative ? Integer(-num) : num, den);
}

inline Integer pow_integer(const Integer& base, unsigned long exp) {
    Integer r;
    mpz_pow_ui(r.get_mpz_t(), base.get_mpz_t(), exp);
    return r;
}

/// base^exp for any sign of exp; 0^negative is a domain error.
inline Rational pow(const Rational& base, std::int64_t exp) {
    if (exp == 0) return Rational(1);
    if (base == 0) {
        if (exp < 0) throw DomainError("zero raised to a negative power");
        return Rational(0);
    }
    unsigned long mag = exp < 0 ? static_cast<unsigned long>(-(exp + 1)) + 1UL
                                : static_cast<unsigned long>(exp);
    Integer num = pow_integer(base.get_num(), mag);
    Integer den = pow_integer(base.get_den(), mag);
    if (exp < 0) std::swap(num, den);
    return make_rational(num, den);
}

inline Integer factorial(unsigned long n) {
    Integer r;
    mpz_fac_ui(r.get_mpz_t(), n);
    return r;
}

/// Cat(k) = (2k)! / (k! (k+1)!).
inline Integer catalan(unsigned long k) {
    Integer r = factorial(2 * k);
    Integer d = factorial(k) * factorial(k + 1);
    mpz_divexact(r.get_mpz_t(), r.get_mpz_t(), d.get_mpz_t());
    return r;
}

/// An element of (1/2)Z, stored as twice its value.
class HalfInt {
public:
    HalfInt() = default;
    static HalfInt from_twice(Integer twice) {
        HalfInt h;
        h.twice_ = std::move(twice);
        return h;
    }
    static HalfInt from_integer(const Integer& v) { return from_twice(2 * v); }
    static HalfInt from_rational(const Rational& q) {
        Rational doubled = 2 * q;
        if (doubled.get_den() != 1) {
            throw PreconditionError(to_string(q) + " is not a half-integer");
        }
        return from_twice(doubled.get_num());
    }
    static HalfInt parse(std::string_view text) { return from_rational(parse_rational(text)); }

    const Integer& twice() const noexcept { return twice_; }
    bool is_integer() const { return mpz_even_p(twice_.get_mpz_t()) != 0; }
    Rational value() const { return make_rational(twice_, 2); }
    /// Exact integer value; throws if the value is not integral.
    Integer integer() const {
        if (!is_integer()) throw PreconditionError(to_string(value()) + " is not an integer");
        return twice_ / 2;
    }
    int sign() const { return sgn(twice_); }

    friend bool operator==(const HalfInt& a, const HalfInt& b) { return a.twice_ == b.twice_; }
    friend bool operator<(const HalfInt& a, const HalfInt& b) { return a.twice_ < b.twice_; }

private:
    Integer twice_ = 0;
};

inline std::string to_string(const HalfInt& h) { return to_string(h.value()); }

/// coeff * sqrt(pi)^sqrtpi_pow, with sqrtpi_pow = 0 whenever coeff = 0.
class PiScalar {
public:
    PiScalar() = default;
    explicit PiScalar(Rational coeff, std::int64_t sqrtpi_pow = 0)
        : coeff_(std::move(coeff)), sqrtpi_pow_(coeff_ == 0 ? 0 : sqrtpi_pow) {}

    const Rational& coeff() const noexcept { return coeff_; }
    std::int64_t sqrtpi_pow() const noexcept { return sqrtpi_pow_; }
    bool is_zero() const { return coeff_ == 0; }

    friend PiScalar operator*(const PiScalar& x, const PiScalar& y) {
        return PiScalar(x.coeff_ * y.coeff_, x.sqrtpi_pow_ + y.sqrtpi_pow_);
    }
    friend PiScalar operator/(const PiScalar& x, const PiScalar& y) {
        if (y.is_zero()) throw DomainError("division by zero scalar");
        return PiScalar(x.coeff_ / y.coeff_, x.sqrtpi_pow_ - y.sqrtpi_pow_);
    }
    /// Defined only when both operands share the same sqrt(pi) grade.
    friend PiScalar operator+(const PiScalar& x, const PiScalar& y) {
        if (x.is_zero()) return y;
        if (y.is_zero()) return x;
        if (x.sqrtpi_pow_ != y.sqrtpi_pow_) {
            throw DomainError("cannot add scalars of different sqrt(pi) grade");
        }
        return PiScalar(x.coeff_ + y.coeff_, x.sqrtpi_pow_);
    }
    friend bool operator==(const PiScalar& x, const PiScalar& y) {
        return x.coeff_ == y.coeff_ && x.sqrtpi_pow_ == y.sqrtpi_pow_;
    }

private:
    Rational coeff_ = 0;
    std::int64_t sqrtpi_pow_ = 0;
};

/// `p/q`, `p`, or `p/q * sqrtpi^k` when k != 0.
inline std::string to_string(const PiScalar& s) {
    std::string out = to_string(s.coeff());
    if (s.sqrtpi_pow() != 0) out += " * sqrtpi^" + std::to_string(s.sqrtpi_pow());
    return out;
}

inline std::ostream& operator<<(std::ostream& os, const PiScalar& s) { return os << to_string(s); }
inline std::ostream& operator<<(std::ostream& os, const HalfInt& h) { return os << to_string(h); }

/// Gamma at a positive half-integer: (n-1)! for integers, (2n)!/(4^n n!) sqrt(pi) at n + 1/2.
inline PiScalar gamma_half(const HalfInt& h) {
    if (h.sign() <= 0) {
        throw DomainError("Gamma(" + to_string(h) + "): argument must be a positive half-integer");
    }
    if (h.is_integer()) {
        return PiScalar(Rational(factorial(Integer(h.integer() - 1).get_ui())));
    }
    unsigned long n = Integer((h.twice() - 1) / 2).get_ui();
    Integer num = factorial(2 * n);
    Integer den = pow_integer(4, n) * factorial(n);
    return PiScalar(make_rational(num, den), 1);
}

/// S_n(a,b,c) = (1/n!) prod_{j<n} Gamma(a+b+(n-1+j)c) Gamma(c)
///                               / (Gamma(a+jc) Gamma(c+jc) Gamma(b+jc+1)).
inline PiScalar selberg_morris(unsigned long n, const HalfInt& a, const HalfInt& b, const HalfInt& c) {
    if (n == 0) throw PreconditionError("selberg_morris: n must be positive");
    auto gamma_at = [](const Integer& twice, const char* factor, unsigned long j) {
        HalfInt arg = HalfInt::from_twice(twice);
        if (arg.sign() <= 0) {
            throw DomainError(std::string("selberg_morris: factor ") + factor + " at j=" +
                              std::to_string(j) + " has nonpositive argument " + to_string(arg));
        }
        return gamma_half(arg);
    };
    PiScalar num(Rational(1));
    PiScalar den(Rational(factorial(n)));
    for (unsigned long j = 0; j < n; ++j) {
        Integer jc = j * c.twice();
        num = num * gamma_at(a.twice() + b.twice() + (n - 1 + j) * c.twice(), "Gamma(a+b+(n-1+j)c)", j);
        num = num * gamma_at(c.twice(), "Gamma(c)", j);
        den = den * gamma_at(a.twice() + jc, "Gamma(a+jc)", j);
        den = den * gamma_at(c.twice() + jc, "Gamma(c+jc)", j);
        den = den * gamma_at(b.twice() + jc + 2, "Gamma(b+jc+1)", j);
    }
    return num / den;
}

/// 2^(n^2) prod_{k=1}^n Cat(k).
inline Integer mm_rhs(unsigned long n) {
    if (n == 0) throw PreconditionError("mm_rhs: n must be positive");
    Integer r = pow_integer(2, n * n);
    for (unsigned long k = 1; k <= n; ++k) r *= catalan(k);
    return r;
}

/// 2^(2cn(n-1) + 2(a-1)n) * S_n(a, -1/2, c).
inline PiScalar fact_rhs(unsigned long n, const Integer& a, const HalfInt& c) {
    if (n == 0) throw PreconditionError("fact_rhs: n must be positive");
    if (a < 1) throw PreconditionError("fact_rhs: a must be a positive integer");
    if (c.sign() <= 0) throw PreconditionError("fact_rhs: c must be positive");
    // 2c is an integer, so the exponent is too.
    Integer exponent = c.twice() * n * (n - 1) + 2 * (a - 1) * n;
    PiScalar s = selberg_morris(n, HalfInt::from_integer(a), HalfInt::from_twice(-1), c);
    return PiScalar(Rational(pow_integer(2, exponent.get_ui())), 0) * s;
}

}  // namespace ctid

#pragma once

/**
 * @file rational.hpp
 * @brief Canonical arbitrary-precision fractions.
 *
 * `Rational` is the scalar type of every set in the library. It wraps GMP's
 * mpq_class and keeps it canonical at all times: numerator and denominator
 * coprime, denominator positive, zero stored as 0/1. Equality, ordering and
 * hashing therefore agree with equality of fractions.
 */

#include <gmpxx.h>

#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <ostream>
#include <string>
#include <string_view>

#include "sumsetlab/error.hpp"

namespace sumsetlab {

using BigInt = mpz_class;

class Rational {
public:
    Rational() = default;
    Rational(long value) : value_(value) {}
    Rational(int value) : value_(static_cast<long>(value)) {}
    explicit Rational(const BigInt& value) : value_(value) {}

    Rational(const BigInt& num, const BigInt& den)
    {
        if (den == 0)
            fail(Errc::DivisionByZero, "zero denominator");
        value_ = mpq_class(num, den);
        value_.canonicalize();
    }

    Rational(long num, long den) : Rational(BigInt(num), BigInt(den)) {}

    explicit Rational(mpq_class value) : value_(std::move(value)) { value_.canonicalize(); }

    /// Parses "p/q" or an integer literal; surrounding whitespace is ignored.
    static Rational parse(std::string_view text)
    {
        auto trim = [](std::string_view s) {
            while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r'))
                s.remove_prefix(1);
            while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r'))
                s.remove_suffix(1);
            return s;
        };
        auto parse_int = [](std::string_view s, bool allow_sign) -> BigInt {
            std::size_t start = 0;
            if (allow_sign && !s.empty() && (s[0] == '-' || s[0] == '+'))
                start = 1;
            if (start == s.size())
                fail(Errc::ParseError, "missing digits in '" + std::string(s) + "'");
            for (std::size_t i = start; i < s.size(); ++i)
                if (s[i] < '0' || s[i] > '9')
                    fail(Errc::ParseError, "invalid character in '" + std::string(s) + "'");
            std::string digits(s[0] == '+' ? s.substr(1) : s);
            return BigInt(digits, 10);
        };

        text = trim(text);
        if (text.empty())
            fail(Errc::ParseError, "empty number");
        const auto slash = text.find('/');
        if (slash == std::string_view::npos)
            return Rational(parse_int(text, true));
        const BigInt num = parse_int(trim(text.substr(0, slash)), true);
        const BigInt den = parse_int(trim(text.substr(slash + 1)), false);
        if (den == 0)
            fail(Errc::ParseError, "zero denominator in '" + std::string(text) + "'");
        return Rational(num, den);
    }

    BigInt numerator() const { return value_.get_num(); }
    BigInt denominator() const { return value_.get_den(); }
    const mpq_class& raw() const noexcept { return value_; }

    bool is_zero() const { return sgn(value_) == 0; }
    bool is_integer() const { return value_.get_den() == 1; }
    int sign() const { return sgn(value_); }

    double to_double() const { return value_.get_d(); }

    std::string str() const
    {
        if (is_integer())
            return value_.get_num().get_str();
        return value_.get_num().get_str() + "/" + value_.get_den().get_str();
    }

    Rational operator-() const { return Rational(mpq_class(-value_), Canonical{}); }

    friend Rational operator+(const Rational& a, const Rational& b)
    {
        return Rational(mpq_class(a.value_ + b.value_), Canonical{});
    }
    friend Rational operator-(const Rational& a, const Rational& b)
    {
        return Rational(mpq_class(a.value_ - b.value_), Canonical{});
    }
    friend Rational operator*(const Rational& a, const Rational& b)
    {
        return Rational(mpq_class(a.value_ * b.value_), Canonical{});
    }
    friend Rational operator/(const Rational& a, const Rational& b)
    {
        if (b.is_zero())
            fail(Errc::DivisionByZero, "division by zero");
        return Rational(mpq_class(a.value_ / b.value_), Canonical{});
    }

    Rational& operator+=(const Rational& o) { value_ += o.value_; return *this; }
    Rational& operator-=(const Rational& o) { value_ -= o.value_; return *this; }
    Rational& operator*=(const Rational& o) { value_ *= o.value_; return *this; }
    Rational& operator/=(const Rational& o)
    {
        if (o.is_zero())
            fail(Errc::DivisionByZero, "division by zero");
        value_ /= o.value_;
        return *this;
    }

    friend bool operator==(const Rational& a, const Rational& b) { return cmp(a.value_, b.value_) == 0; }
    friend std::strong_ordering operator<=>(const Rational& a, const Rational& b)
    {
        const int c = cmp(a.value_, b.value_);
        return c < 0 ? std::strong_ordering::less
                     : (c > 0 ? std::strong_ordering::greater : std::strong_ordering::equal);
    }

    Rational abs() const { return sign() < 0 ? -*this : *this; }

    /// Integer power; negative exponents invert (zero base then throws).
    Rational pow(long e) const
    {
        if (e < 0)
            return Rational(1) / pow(-e);
        BigInt n, d;
        mpz_pow_ui(n.get_mpz_t(), value_.get_num_mpz_t(), static_cast<unsigned long>(e));
        mpz_pow_ui(d.get_mpz_t(), value_.get_den_mpz_t(), static_cast<unsigned long>(e));
        return Rational(mpq_class(n, d), Canonical{});
    }

    std::size_t hash() const noexcept
    {
        auto limbs = [](mpz_srcptr z) {
            std::size_t h = static_cast<std::size_t>(mpz_sgn(z) + 1);
            const std::size_t n = mpz_size(z);
            for (std::size_t i = 0; i < n; ++i)
                h = h * 0x9E3779B97F4A7C15ULL + static_cast<std::size_t>(mpz_getlimbn(z, i));
            return h;
        };
        return limbs(value_.get_num_mpz_t()) * 31 + limbs(value_.get_den_mpz_t());
    }

    friend std::ostream& operator<<(std::ostream& os, const Rational& r) { return os << r.str(); }

private:
    struct Canonical {};
    // Results of mpq arithmetic on canonical operands are already canonical.
    Rational(mpq_class value, Canonical) : value_(std::move(value)) {}

    mpq_class value_{0};
};

struct RationalHash {
    std::size_t operator()(const Rational& r) const noexcept { return r.hash(); }
};

/// Largest j with 2^j <= x, for x > 0.
inline long floor_log2(const Rational& x)
{
    if (x.sign() <= 0)
        fail(Errc::InvalidArgument, "floor_log2 needs a positive argument");
    const BigInt num = x.numerator();
    const BigInt den = x.denominator();
    long j = static_cast<long>(mpz_sizeinbase(num.get_mpz_t(), 2))
           - static_cast<long>(mpz_sizeinbase(den.get_mpz_t(), 2));
    // num/den lies in [2^(j-1), 2^(j+1)); settle which side by one comparison.
    BigInt lhs = num;
    BigInt rhs = den;
    if (j >= 0)
        mpz_mul_2exp(rhs.get_mpz_t(), rhs.get_mpz_t(), static_cast<unsigned long>(j));
    else
        mpz_mul_2exp(lhs.get_mpz_t(), lhs.get_mpz_t(), static_cast<unsigned long>(-j));
    if (lhs < rhs)
        --j;
    return j;
}

/// Smallest K >= 1 with K^degree >= n (the exact ceiling of n^(1/degree)).
inline BigInt ceil_root(const BigInt& n, unsigned long degree)
{
    if (degree == 0)
        fail(Errc::InvalidArgument, "ceil_root degree must be positive");
    if (n <= 1)
        return BigInt(1);
    BigInt k;
    const int exact = mpz_root(k.get_mpz_t(), n.get_mpz_t(), degree);
    if (!exact)
        k += 1;
    return k;
}

/// floor(n^(p/q)) for n >= 0 and p, q >= 1.
inline BigInt floor_rational_power(const BigInt& n, unsigned long p, unsigned long q)
{
    if (q == 0)
        fail(Errc::InvalidArgument, "floor_rational_power needs q >= 1");
    BigInt np;
    mpz_pow_ui(np.get_mpz_t(), n.get_mpz_t(), p);
    BigInt r;
    mpz_root(r.get_mpz_t(), np.get_mpz_t(), q);
    return r;
}

} // namespace sumsetlab

template <>
struct std::hash<sumsetlab::Rational> {
    std::size_t operator()(const sumsetlab::Rational& r) const noexcept { return r.hash(); }
};

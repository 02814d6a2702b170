#pragma once

#include <cstddef>
#include <map>
#include <string>
#include <vector>

#include "sumsetlab/rational.hpp"

namespace sumsetlab {

/// Sparse polynomial with integer coefficients over non-negative exponents.
/// Zero coefficients are never stored.
class SignedPolynomial {
public:
    using Exponent = unsigned long;

    SignedPolynomial() = default;

    static SignedPolynomial constant(long c)
    {
        SignedPolynomial p;
        p.add_term(0, BigInt(c));
        return p;
    }

    /// x^e - 1
    static SignedPolynomial power_minus_one(Exponent e)
    {
        SignedPolynomial p;
        p.add_term(e, BigInt(1));
        p.add_term(0, BigInt(-1));
        return p;
    }

    void add_term(Exponent e, const BigInt& c)
    {
        if (c == 0)
            return;
        auto [it, inserted] = terms_.try_emplace(e, c);
        if (!inserted) {
            it->second += c;
            if (it->second == 0)
                terms_.erase(it);
        }
    }

    const std::map<Exponent, BigInt>& terms() const noexcept { return terms_; }
    bool is_zero() const noexcept { return terms_.empty(); }
    std::size_t term_count() const noexcept { return terms_.size(); }

    Exponent degree() const
    {
        if (terms_.empty())
            fail(Errc::ZeroPolynomial, "degree of the zero polynomial");
        return terms_.rbegin()->first;
    }

    BigInt coefficient(Exponent e) const
    {
        auto it = terms_.find(e);
        return it == terms_.end() ? BigInt(0) : it->second;
    }

    BigInt leading_coefficient() const { return coefficient(degree()); }

    /// Every stored coefficient is +1 or -1.
    bool is_signed() const
    {
        for (const auto& [e, c] : terms_)
            if (c != 1 && c != -1)
                return false;
        return true;
    }

    bool is_monic() const { return !is_zero() && leading_coefficient() == 1; }

    SignedPolynomial operator-() const
    {
        SignedPolynomial p;
        for (const auto& [e, c] : terms_)
            p.terms_.emplace(e, -c);
        return p;
    }

    friend SignedPolynomial operator*(const SignedPolynomial& a, const SignedPolynomial& b)
    {
        SignedPolynomial p;
        for (const auto& [ea, ca] : a.terms_)
            for (const auto& [eb, cb] : b.terms_)
                p.add_term(ea + eb, ca * cb);
        return p;
    }

    friend bool operator==(const SignedPolynomial&, const SignedPolynomial&) = default;

    /// Human form, highest degree first: "x^3 - x^2 - x + 1".
    std::string str() const
    {
        if (terms_.empty())
            return "0";
        std::string out;
        bool first = true;
        for (auto it = terms_.rbegin(); it != terms_.rend(); ++it) {
            const auto& [e, c] = *it;
            const bool negative = c < 0;
            const BigInt mag = negative ? BigInt(-c) : c;
            if (first)
                out += negative ? "-" : "";
            else
                out += negative ? " - " : " + ";
            first = false;
            if (e == 0) {
                out += mag.get_str();
                continue;
            }
            if (mag != 1)
                out += mag.get_str() + "*";
            out += e == 1 ? "x" : "x^" + std::to_string(e);
        }
        return out;
    }

private:
    std::map<Exponent, BigInt> terms_;
};

/// Exact value p(x).
inline Rational eval_poly(const SignedPolynomial& p, const Rational& x)
{
    Rational sum(0);
    Rational power(1);
    SignedPolynomial::Exponent at = 0;
    for (const auto& [e, c] : p.terms()) {
        if (x.is_zero()) {
            if (e == 0)
                sum += Rational(c);
            continue;
        }
        power *= x.pow(static_cast<long>(e - at));
        at = e;
        sum += Rational(c) * power;
    }
    return sum;
}

/// Largest m with (x-1)^m dividing p, by repeated synthetic division.
inline unsigned long vanishing_order(const SignedPolynomial& p)
{
    if (p.is_zero())
        fail(Errc::ZeroPolynomial, "vanishing order of the zero polynomial");
    // Dense coefficients, constant term first.
    std::vector<BigInt> coeffs(p.degree() + 1);
    for (const auto& [e, c] : p.terms())
        coeffs[e] = c;
    unsigned long order = 0;
    while (coeffs.size() > 1) {
        // q_{d-1} = c_d, q_{i-1} = c_i + q_i; remainder is c_0 + q_0 = p(1).
        const std::size_t d = coeffs.size() - 1;
        std::vector<BigInt> quotient(d);
        BigInt carry = 0;
        for (std::size_t i = d; i >= 1; --i) {
            carry += coeffs[i];
            quotient[i - 1] = carry;
        }
        if (carry + coeffs[0] != 0)
            break;
        coeffs = std::move(quotient);
        ++order;
    }
    return order;
}

} // namespace sumsetlab

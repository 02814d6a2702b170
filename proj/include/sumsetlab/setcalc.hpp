#pragma once

/**
 * @file setcalc.hpp
 * @brief Exact set calculus: sumsets, difference/product/quotient sets,
 * multifold sums and products, additive energy.
 *
 * Multifold sets are built by a left fold of pairwise operations. Each
 * pairwise operation streams rows a*B into a buffer that is periodically
 * sorted and merged into the accumulated result, so memory stays close to
 * the size of the result. Whenever a result would exceed `cap` elements a
 * CapExceeded error is raised.
 */

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "sumsetlab/number_set.hpp"

namespace sumsetlab {

inline constexpr std::size_t default_cap = 10'000'000;

struct EnergyCount {
    BigInt value;
    friend bool operator==(const EnergyCount&, const EnergyCount&) = default;
};

namespace detail {

inline void merge_into(std::vector<Rational>& acc, std::vector<Rational>& buf, std::size_t cap)
{
    NumberSet::canonicalize(buf);
    std::vector<Rational> merged;
    merged.reserve(acc.size() + buf.size());
    std::set_union(std::make_move_iterator(acc.begin()), std::make_move_iterator(acc.end()),
                   std::make_move_iterator(buf.begin()), std::make_move_iterator(buf.end()),
                   std::back_inserter(merged));
    acc = std::move(merged);
    buf.clear();
    if (acc.size() > cap)
        fail(Errc::CapExceeded, "result exceeds cap of " + std::to_string(cap) + " elements");
}

template <class Op>
NumberSet combine(const NumberSet& a, const NumberSet& b, Op op, std::size_t cap)
{
    if (a.empty() || b.empty())
        return {};
    std::vector<Rational> acc;
    std::vector<Rational> buf;
    const std::size_t min_flush = std::size_t{1} << 16;
    for (const auto& x : a) {
        for (const auto& y : b)
            buf.push_back(op(x, y));
        if (buf.size() >= std::max(min_flush, acc.size()))
            merge_into(acc, buf, cap);
    }
    merge_into(acc, buf, cap);
    return NumberSet::from_sorted_unique(std::move(acc));
}

} // namespace detail

inline NumberSet sumset(const NumberSet& a, const NumberSet& b, std::size_t cap = default_cap)
{
    return detail::combine(a, b, [](const Rational& x, const Rational& y) { return x + y; }, cap);
}

inline NumberSet difference_set(const NumberSet& a, const NumberSet& b, std::size_t cap = default_cap)
{
    return detail::combine(a, b, [](const Rational& x, const Rational& y) { return x - y; }, cap);
}

inline NumberSet product_set(const NumberSet& a, const NumberSet& b, std::size_t cap = default_cap)
{
    return detail::combine(a, b, [](const Rational& x, const Rational& y) { return x * y; }, cap);
}

inline NumberSet quotient_set(const NumberSet& a, const NumberSet& b, std::size_t cap = default_cap)
{
    if (b.contains(Rational(0)))
        fail(Errc::DivisionByZero, "quotient set with 0 in the denominator set");
    return detail::combine(a, b, [](const Rational& x, const Rational& y) { return x / y; }, cap);
}

/// hA, the h-fold sumset.
inline NumberSet hfold_sum(const NumberSet& a, long h, std::size_t cap = default_cap)
{
    if (h < 1)
        fail(Errc::InvalidArgument, "hfold_sum needs h >= 1");
    if (a.size() > cap)
        fail(Errc::CapExceeded, "input exceeds cap");
    NumberSet acc = a;
    for (long i = 1; i < h; ++i)
        acc = sumset(acc, a, cap);
    return acc;
}

/// A^(h), the h-fold product set.
inline NumberSet hfold_product(const NumberSet& a, long h, std::size_t cap = default_cap)
{
    if (h < 1)
        fail(Errc::InvalidArgument, "hfold_product needs h >= 1");
    if (a.size() > cap)
        fail(Errc::CapExceeded, "input exceeds cap");
    NumberSet acc = a;
    for (long i = 1; i < h; ++i)
        acc = product_set(acc, a, cap);
    return acc;
}

/// kA - lA; a 0-fold operand is {0}.
inline NumberSet signed_fold(const NumberSet& a, long k, long l, std::size_t cap = default_cap)
{
    if (k < 0 || l < 0 || k + l < 1)
        fail(Errc::InvalidArgument, "signed_fold needs k, l >= 0 and k + l >= 1");
    const NumberSet zero{Rational(0)};
    const NumberSet plus = k == 0 ? zero : hfold_sum(a, k, cap);
    const NumberSet minus = l == 0 ? zero : hfold_sum(a, l, cap);
    return difference_set(plus, minus, cap);
}

/// E(A,B) = sum over s of r(s)^2, r(s) = #{(a,b) : a + b = s}.
inline EnergyCount additive_energy(const NumberSet& a, const NumberSet& b)
{
    std::unordered_map<Rational, std::uint64_t, RationalHash> reps;
    reps.reserve(a.size() * b.size());
    for (const auto& x : a)
        for (const auto& y : b)
            ++reps[x + y];
    EnergyCount e{BigInt(0)};
    for (const auto& [s, r] : reps) {
        BigInt rr(static_cast<unsigned long>(r));
        e.value += rr * rr;
    }
    return e;
}

inline NumberSet dilate(const NumberSet& a, const Rational& factor)
{
    std::vector<Rational> v;
    v.reserve(a.size());
    for (const auto& x : a)
        v.push_back(x * factor);
    return NumberSet(std::move(v));
}

inline NumberSet translate(const NumberSet& a, const Rational& shift)
{
    std::vector<Rational> v;
    v.reserve(a.size());
    for (const auto& x : a)
        v.push_back(x + shift);
    return NumberSet::from_sorted_unique(std::move(v));
}

inline NumberSet negate(const NumberSet& a)
{
    return dilate(a, Rational(-1));
}

/// h elements of A (smallest-first greedy backtrack over fold layers) summing
/// to target, or nullopt when target is not in hA.
inline std::optional<std::vector<Rational>> hfold_representation(const NumberSet& a, long h,
                                                                 const Rational& target,
                                                                 std::size_t cap = default_cap)
{
    if (h < 1)
        fail(Errc::InvalidArgument, "hfold_representation needs h >= 1");
    std::vector<NumberSet> layers;
    layers.push_back(NumberSet{Rational(0)});
    for (long i = 1; i <= h; ++i)
        layers.push_back(i == 1 ? a : sumset(layers.back(), a, cap));
    if (!layers.back().contains(target))
        return std::nullopt;
    std::vector<Rational> out;
    Rational rest = target;
    for (long m = h; m >= 1; --m) {
        const NumberSet& below = layers[static_cast<std::size_t>(m - 1)];
        bool found = false;
        for (const auto& y : a) {
            if (below.contains(rest - y)) {
                out.push_back(y);
                rest = rest - y;
                found = true;
                break;
            }
        }
        if (!found)
            fail(Errc::InvalidArgument, "inconsistent fold layers");
    }
    return out;
}

struct SignedRepresentation {
    std::vector<Rational> plus;
    std::vector<Rational> minus;
};

/// target = sum(plus) - sum(minus) with |plus| = |minus| = h, or nullopt.
inline std::optional<SignedRepresentation> difference_representation(const NumberSet& a, long h,
                                                                     const Rational& target,
                                                                     std::size_t cap = default_cap)
{
    const NumberSet fold = hfold_sum(a, h, cap);
    for (const auto& p : fold) {
        const Rational q = p - target;
        if (fold.contains(q)) {
            SignedRepresentation rep;
            rep.plus = *hfold_representation(a, h, p, cap);
            rep.minus = *hfold_representation(a, h, q, cap);
            return rep;
        }
    }
    return std::nullopt;
}

} // namespace sumsetlab

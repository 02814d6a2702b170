#pragma once

#include <algorithm>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "sumsetlab/rational.hpp"

namespace sumsetlab {

/// A finite set of rationals, stored strictly increasing.
class NumberSet {
public:
    using value_type = Rational;
    using const_iterator = std::vector<Rational>::const_iterator;

    NumberSet() = default;

    explicit NumberSet(std::vector<Rational> elements) : elements_(std::move(elements))
    {
        canonicalize(elements_);
    }

    NumberSet(std::initializer_list<Rational> elements)
        : NumberSet(std::vector<Rational>(elements))
    {
    }

    /// Adopts a vector the caller guarantees is already strictly increasing.
    static NumberSet from_sorted_unique(std::vector<Rational> elements)
    {
        NumberSet s;
        s.elements_ = std::move(elements);
        return s;
    }

    static NumberSet range(long first, long last)
    {
        std::vector<Rational> v;
        for (long x = first; x <= last; ++x)
            v.emplace_back(x);
        return from_sorted_unique(std::move(v));
    }

    /// {1, r, r^2, ..., r^(n-1)}
    static NumberSet geometric(const Rational& ratio, std::size_t n)
    {
        std::vector<Rational> v;
        Rational x(1);
        for (std::size_t i = 0; i < n; ++i) {
            v.push_back(x);
            x *= ratio;
        }
        return NumberSet(std::move(v));
    }

    std::size_t size() const noexcept { return elements_.size(); }
    bool empty() const noexcept { return elements_.empty(); }
    const_iterator begin() const noexcept { return elements_.begin(); }
    const_iterator end() const noexcept { return elements_.end(); }
    const Rational& operator[](std::size_t i) const { return elements_[i]; }
    const Rational& front() const { return elements_.front(); }
    const Rational& back() const { return elements_.back(); }
    const std::vector<Rational>& elements() const noexcept { return elements_; }
    std::span<const Rational> view() const noexcept { return elements_; }

    bool contains(const Rational& x) const
    {
        return std::binary_search(elements_.begin(), elements_.end(), x);
    }

    /// Position of x, or size() when absent.
    std::size_t index_of(const Rational& x) const
    {
        auto it = std::lower_bound(elements_.begin(), elements_.end(), x);
        if (it == elements_.end() || *it != x)
            return elements_.size();
        return static_cast<std::size_t>(it - elements_.begin());
    }

    friend bool operator==(const NumberSet& a, const NumberSet& b) { return a.elements_ == b.elements_; }

    std::string str() const
    {
        std::string out = "{";
        for (std::size_t i = 0; i < elements_.size(); ++i) {
            if (i)
                out += ", ";
            out += elements_[i].str();
        }
        return out + "}";
    }

    static void canonicalize(std::vector<Rational>& v)
    {
        std::sort(v.begin(), v.end());
        v.erase(std::unique(v.begin(), v.end()), v.end());
    }

private:
    std::vector<Rational> elements_;
};

inline NumberSet set_intersection(const NumberSet& a, const NumberSet& b)
{
    std::vector<Rational> out;
    std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
    return NumberSet::from_sorted_unique(std::move(out));
}

inline NumberSet set_union(const NumberSet& a, const NumberSet& b)
{
    std::vector<Rational> out;
    std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
    return NumberSet::from_sorted_unique(std::move(out));
}

inline bool is_subset(const NumberSet& sub, const NumberSet& super)
{
    return std::includes(super.begin(), super.end(), sub.begin(), sub.end());
}

inline bool is_zero_set(const NumberSet& s)
{
    return s.size() == 1 && s.front().is_zero();
}

} // namespace sumsetlab

#pragma once

#include <bit>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "sumsetlab/error.hpp"

namespace sumsetlab {

/// f(a, b) for 1 <= a <= a_max, 1 <= b <= 2^a, built by
/// f(1,1) = 1, f(1,2) = 2, f(a, 2b-1) = f(a-1, b), f(a, 2b) = 2 f(a, 2b-1),
/// and g(a, b) = log2 f(a, b) + 1.
class FGTable {
public:
    static constexpr unsigned max_depth = 24;

    explicit FGTable(unsigned a_max) : a_max_(a_max)
    {
        if (a_max == 0 || a_max > max_depth)
            fail(Errc::InvalidArgument, "fg table depth must be in 1.." + std::to_string(max_depth));
        rows_.resize(a_max + 1);
        rows_[1] = {1, 2};
        for (unsigned a = 2; a <= a_max; ++a) {
            const auto& prev = rows_[a - 1];
            auto& row = rows_[a];
            row.resize(std::size_t{1} << a);
            for (std::size_t b = 1; b <= prev.size(); ++b) {
                row[2 * b - 2] = prev[b - 1];
                row[2 * b - 1] = 2 * prev[b - 1];
            }
        }
        check();
    }

    unsigned depth() const noexcept { return a_max_; }

    std::uint64_t f(unsigned a, std::uint64_t b) const
    {
        if (a == 0 || a > a_max_ || b == 0 || b > (std::uint64_t{1} << a))
            fail(Errc::InvalidArgument, "f(" + std::to_string(a) + ", " + std::to_string(b) + ") out of range");
        return rows_[a][b - 1];
    }

    unsigned g(unsigned a, std::uint64_t b) const
    {
        return static_cast<unsigned>(std::countr_zero(f(a, b))) + 1;
    }

    const std::vector<std::uint64_t>& row(unsigned a) const { return rows_.at(a); }

private:
    void check() const
    {
        for (unsigned a = 1; a <= a_max_; ++a) {
            for (std::uint64_t b = 1; b <= rows_[a].size(); ++b) {
                const auto v = f(a, b);
                if (!std::has_single_bit(v) || static_cast<unsigned>(std::countr_zero(v)) > a || g(a, b) > a + 1)
                    throw std::logic_error("fg table invariant violated");
                if (b % 2 == 0 && (v != 2 * f(a, b - 1) || g(a, b) != g(a, b - 1) + 1))
                    throw std::logic_error("fg table invariant violated");
                if (a > 1 && b % 2 == 1 && v != f(a - 1, (b + 1) / 2))
                    throw std::logic_error("fg table invariant violated");
            }
        }
    }

    unsigned a_max_;
    std::vector<std::vector<std::uint64_t>> rows_;
};

inline FGTable fg_table(unsigned a_max)
{
    return FGTable(a_max);
}

} // namespace sumsetlab

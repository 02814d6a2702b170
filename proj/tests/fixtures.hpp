#pragma once

// Constructed inputs shared by the pipeline tests and the acceptance suite.

#include <vector>

#include "sumsetlab/setcalc.hpp"

namespace fixture {

using sumsetlab::NumberSet;
using sumsetlab::Rational;

struct IntersectionInstance {
    NumberSet a;
    std::vector<NumberSet> sets;
    unsigned t = 1;
    long ell = 2;
};

/// scale * {0, 1, ..., len - 1}
inline NumberSet scaled_run(long scale, long len, long offset = 0)
{
    std::vector<Rational> v;
    for (long i = 0; i < len; ++i)
        v.emplace_back(offset + scale * i);
    return NumberSet(std::move(v));
}

inline NumberSet union_of(const std::vector<NumberSet>& sets)
{
    NumberSet out;
    for (const auto& s : sets)
        out = sumsetlab::set_union(out, s);
    return out;
}

/// Families with a trivial intersection of multifold difference sets, built
/// from short runs on widely separated scales. Variant v picks run lengths,
/// scales and which neighbours share a scale; t is 1 or 2 and |A| <= 16.
inline IntersectionInstance intersection_instance(int v)
{
    IntersectionInstance in;
    in.t = v % 2 == 0 ? 1 : 2;
    const long big = 1000 + 37 * v;
    const long len = 2 + v % 3;
    if (in.t == 1) {
        in.sets = {scaled_run(1 + v % 2, len), scaled_run(big, 2 + (v / 2) % 2)};
    } else if (v % 4 == 1) {
        // Neighbours share a scale: Covered at step 0, then the final step.
        in.sets = {scaled_run(1, len), scaled_run(1, len + 1), scaled_run(big, len), scaled_run(big, 2)};
    } else {
        // First pair on separate scales: Disjoint at step 0.
        in.sets = {scaled_run(1, len), scaled_run(big, 2), scaled_run(1, 2), scaled_run(big * big, 2)};
    }
    in.a = union_of(in.sets);
    return in;
}

} // namespace fixture

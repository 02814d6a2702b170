#pragma once

#include <algorithm>
#include <cstdint>
#include <iterator>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "sumsetlab/graph.hpp"
#include "sumsetlab/number_set.hpp"
#include "sumsetlab/random.hpp"
#include "sumsetlab/setcalc.hpp"

namespace sumsetlab {

// ---------------------------------------------------------------------------
// Independent set or hub

struct HubOrIndependent {
    enum class Kind { Hub, Independent };
    Kind kind = Kind::Independent;
    VertexId hub = 0;                  // Hub only
    std::size_t hub_degree = 0;        // Hub only
    std::vector<VertexId> independent; // Independent only, ascending
    bool target_met = false;           // Hub: deg * K >= n; Independent: |I| >= K

    bool is_hub() const noexcept { return kind == Kind::Hub; }
};

/// Lowest-id vertex with deg * K >= n if one exists, otherwise the greedy
/// independent set taken in ascending id order.
///
/// For integer K with K^2 <= n the independent set is guaranteed to reach
/// size K and this is checked. Outside that regime the size is only reported
/// through `target_met`.
inline HubOrIndependent independent_or_hub(const SimpleGraph& g, const Rational& k)
{
    const std::size_t n = g.vertex_count();
    if (n == 0)
        fail(Errc::EmptyGraph, "graph has no vertices");
    const Rational nr(static_cast<long>(n));
    if (k.sign() <= 0 || k > nr)
        fail(Errc::InvalidArgument, "K must satisfy 0 < K <= |G|, got " + k.str());

    HubOrIndependent out;
    for (VertexId v = 0; v < n; ++v) {
        if (Rational(static_cast<long>(g.degree(v))) * k >= nr) {
            out.kind = HubOrIndependent::Kind::Hub;
            out.hub = v;
            out.hub_degree = g.degree(v);
            out.target_met = true;
            return out;
        }
    }
    std::vector<char> blocked(n, 0);
    for (VertexId v = 0; v < n; ++v) {
        if (blocked[v])
            continue;
        out.independent.push_back(v);
        for (VertexId u : g.neighbors(v))
            blocked[u] = 1;
    }
    out.target_met = Rational(static_cast<long>(out.independent.size())) >= k;
    if (k.is_integer() && k * k <= nr && !out.target_met)
        throw std::logic_error("greedy independent set below K in the K^2 <= |G| regime");
    return out;
}

// ---------------------------------------------------------------------------
// Covering split

enum class CoverCase { Disjoint, Covered };

inline const char* to_string(CoverCase c)
{
    return c == CoverCase::Disjoint ? "Disjoint" : "Covered";
}

struct CoverOutcome {
    CoverCase case_tag = CoverCase::Disjoint;
    NumberSet subset;              // X'
    std::optional<Rational> hub;   // Covered only: X' lies in hub + (Y - Y)
};

/// Exact check of the outcome's case invariant against X, Y and K.
///
/// Disjoint: X' is a subset of X, |X'| >= K and (X' - X') meets Y - Y only in 0.
/// Covered: X' is a subset of X, |X'| * K >= |X| and X' - X' lies in 2Y - 2Y.
inline bool verify_cover(const CoverOutcome& c, const NumberSet& x, const NumberSet& y, const Rational& k)
{
    if (!is_subset(c.subset, x) || c.subset.empty())
        return false;
    const Rational size(static_cast<long>(c.subset.size()));
    const NumberSet dy = difference_set(y, y);
    if (c.case_tag == CoverCase::Disjoint) {
        if (size < k)
            return false;
        for (const auto& u : c.subset)
            for (const auto& v : c.subset)
                if (u != v && dy.contains(u - v))
                    return false;
        return true;
    }
    if (size * k < Rational(static_cast<long>(x.size())))
        return false;
    const NumberSet ddy = sumset(dy, dy);
    for (const auto& u : c.subset)
        for (const auto& v : c.subset)
            if (!ddy.contains(u - v))
                return false;
    return true;
}

/// Auxiliary graph on the elements of X (by index), u ~ v iff u - v is in Y - Y.
inline SimpleGraph difference_graph(const NumberSet& x, const NumberSet& y)
{
    const NumberSet dy = difference_set(y, y);
    SimpleGraph g(x.size());
    for (std::size_t i = 0; i < x.size(); ++i)
        for (std::size_t j = i + 1; j < x.size(); ++j)
            if (dy.contains(x[j] - x[i]))
                g.add_edge(i, j);
    return g;
}

/// Either a large subset of X whose differences avoid Y - Y, or a subset of
/// at least |X|/K elements inside one translate of Y - Y.
///
/// The dichotomy runs with min(K, |X|). When it gives no hub and the greedy set
/// stays below K (possible for non-integer K), the closed neighbourhood of a
/// maximum-degree vertex is used: greedy gives |X|/(deg+1) <= |I| < K, so that
/// neighbourhood has more than |X|/K elements.
inline CoverOutcome covering_split(const NumberSet& x, const NumberSet& y, const Rational& k)
{
    if (x.empty() || y.empty())
        fail(Errc::EmptyInput, "covering_split needs non-empty X and Y");
    if (k.sign() <= 0)
        fail(Errc::InvalidArgument, "K must be positive");
    const SimpleGraph g = difference_graph(x, y);
    const Rational n(static_cast<long>(x.size()));
    const auto split = independent_or_hub(g, std::min(k, n));

    CoverOutcome out;
    auto closed_neighbourhood = [&](VertexId v) {
        std::vector<Rational> members{x[v]};
        for (VertexId u : g.neighbors(v))
            members.push_back(x[u]);
        out.case_tag = CoverCase::Covered;
        out.subset = NumberSet(std::move(members));
        out.hub = x[v];
    };
    if (split.is_hub()) {
        closed_neighbourhood(split.hub);
    } else if (Rational(static_cast<long>(split.independent.size())) >= k) {
        std::vector<Rational> members;
        for (VertexId v : split.independent)
            members.push_back(x[v]);
        out.case_tag = CoverCase::Disjoint;
        out.subset = NumberSet(std::move(members));
    } else {
        VertexId best = 0;
        for (VertexId v = 1; v < g.vertex_count(); ++v)
            if (g.degree(v) > g.degree(best))
                best = v;
        closed_neighbourhood(best);
    }
    if (!verify_cover(out, x, y, k))
        throw std::logic_error("covering_split produced an outcome that fails verification");
    return out;
}

// ---------------------------------------------------------------------------
// Dependent random choice

/// Vertices of Y adjacent to every vertex of T; all of Y when T is empty.
inline std::vector<VertexId> common_neighborhood(const BipartiteGraph& g, const std::vector<VertexId>& t)
{
    std::vector<VertexId> out;
    if (t.empty()) {
        out.resize(g.right_count());
        for (VertexId y = 0; y < out.size(); ++y)
            out[y] = y;
        return out;
    }
    out = g.left_neighbors(t.front());
    std::vector<VertexId> next;
    for (std::size_t i = 1; i < t.size() && !out.empty(); ++i) {
        const auto& nb = g.left_neighbors(t[i]);
        next.clear();
        std::set_intersection(out.begin(), out.end(), nb.begin(), nb.end(), std::back_inserter(next));
        out.swap(next);
    }
    return out;
}

/// Vertices of X adjacent to every vertex of S; all of X when S is empty.
inline std::vector<VertexId> common_neighborhood_right(const BipartiteGraph& g, const std::vector<VertexId>& s)
{
    std::vector<VertexId> out;
    if (s.empty()) {
        out.resize(g.left_count());
        for (VertexId x = 0; x < out.size(); ++x)
            out[x] = x;
        return out;
    }
    out = g.right_neighbors(s.front());
    std::vector<VertexId> next;
    for (std::size_t i = 1; i < s.size() && !out.empty(); ++i) {
        const auto& nb = g.right_neighbors(s[i]);
        next.clear();
        std::set_intersection(out.begin(), out.end(), nb.begin(), nb.end(), std::back_inserter(next));
        out.swap(next);
    }
    return out;
}

struct DrcParams {
    unsigned t = 1;
    unsigned r = 1;
    unsigned long m = 1;
    unsigned long a = 1;
};

struct DrcFeasibility {
    bool feasible = false;
    Rational margin; // lhs - binom(|Y|, r) (m/|X|)^t - a
};

/// Exact evaluation of |E|^t / (|X|^t |Y|^(t-1)) - C(|Y|, r) (m/|X|)^t - a.
/// A graph with an empty side is infeasible with margin -a.
inline DrcFeasibility drc_feasible(const BipartiteGraph& g, const DrcParams& p)
{
    if (p.t == 0 || p.r == 0 || p.m == 0 || p.a == 0)
        fail(Errc::InvalidArgument, "t, r, m, a must be positive");
    DrcFeasibility out;
    const Rational a(BigInt(p.a));
    if (g.left_count() == 0 || g.right_count() == 0) {
        out.margin = -a;
        return out;
    }
    const Rational x(static_cast<long>(g.left_count()));
    const Rational y(static_cast<long>(g.right_count()));
    const Rational e(static_cast<long>(g.edge_count()));
    const long t = static_cast<long>(p.t);
    BigInt binom;
    mpz_bin_uiui(binom.get_mpz_t(), g.right_count(), p.r);
    const Rational expected = e.pow(t) / (x.pow(t) * y.pow(t - 1));
    const Rational deficient = Rational(binom) * (Rational(BigInt(p.m)) / x).pow(t);
    out.margin = expected - deficient - a;
    out.feasible = out.margin.sign() >= 0;
    return out;
}

/// Every r-subset of `u` (ascending ids) has at least m common neighbours.
inline bool verify_drc(const BipartiteGraph& g, const std::vector<VertexId>& u, unsigned r, unsigned long m)
{
    if (r == 0 || u.size() < r)
        return true;
    std::vector<std::size_t> idx(r);
    for (std::size_t i = 0; i < r; ++i)
        idx[i] = i;
    std::vector<VertexId> s(r);
    while (true) {
        for (std::size_t i = 0; i < r; ++i)
            s[i] = u[idx[i]];
        if (common_neighborhood_right(g, s).size() < m)
            return false;
        std::size_t i = r;
        while (i > 0 && idx[i - 1] == u.size() - r + (i - 1))
            --i;
        if (i == 0)
            return true;
        ++idx[i - 1];
        for (std::size_t j = i; j < r; ++j)
            idx[j] = idx[j - 1] + 1;
    }
}

struct DrcSelection {
    DrcFeasibility feasibility;     // hypothesis value; not required for a result
    std::vector<VertexId> selected; // U, ascending
    std::vector<VertexId> sample;   // T of the successful attempt, in draw order
    std::size_t attempts = 0;
};

inline constexpr std::size_t default_drc_retries = 1000;
inline constexpr std::uint64_t default_drc_subset_budget = 20'000'000;

/// Dependent random choice. Each attempt draws t vertices of X uniformly with
/// repetition, takes U = Gamma(T), then walks the r-subsets of U in
/// lexicographic order and drops the last element of every still-intact
/// subset with fewer than m common neighbours. The attempt succeeds when at
/// least a vertices survive.
///
/// The hypothesis inequality is what guarantees a positive success chance per
/// draw. It is evaluated and recorded but not enforced: survivors are correct
/// by construction either way, and a hopeless instance ends in
/// RetriesExhausted.
inline DrcSelection drc_select(const BipartiteGraph& g, const DrcParams& p, std::uint64_t seed,
                               std::size_t max_retries = default_drc_retries,
                               std::uint64_t subset_budget = default_drc_subset_budget)
{
    DrcSelection out;
    out.feasibility = drc_feasible(g, p);
    if (g.left_count() == 0)
        fail(Errc::RetriesExhausted, "no vertices to sample");
    SeededRng rng(seed);
    const std::size_t r = p.r;
    for (std::size_t attempt = 1; attempt <= max_retries; ++attempt) {
        out.attempts = attempt;
        out.sample.clear();
        for (unsigned i = 0; i < p.t; ++i)
            out.sample.push_back(static_cast<VertexId>(rng.below(g.left_count())));
        std::vector<VertexId> sorted_sample = out.sample;
        std::sort(sorted_sample.begin(), sorted_sample.end());
        sorted_sample.erase(std::unique(sorted_sample.begin(), sorted_sample.end()), sorted_sample.end());
        const std::vector<VertexId> u = common_neighborhood(g, sorted_sample);
        if (u.size() < p.a)
            continue;

        std::vector<char> removed(u.size(), 0);
        if (u.size() >= r) {
            BigInt subsets;
            mpz_bin_uiui(subsets.get_mpz_t(), u.size(), r);
            if (subsets > BigInt(static_cast<unsigned long>(subset_budget)))
                fail(Errc::BudgetExceeded, "r-subset enumeration of " + subsets.get_str() + " subsets exceeds budget");
            std::vector<std::size_t> idx(r);
            for (std::size_t i = 0; i < r; ++i)
                idx[i] = i;
            std::vector<VertexId> s(r);
            while (true) {
                bool intact = true;
                for (std::size_t i = 0; i < r && intact; ++i)
                    intact = !removed[idx[i]];
                if (intact) {
                    for (std::size_t i = 0; i < r; ++i)
                        s[i] = u[idx[i]];
                    if (common_neighborhood_right(g, s).size() < p.m)
                        removed[idx[r - 1]] = 1;
                }
                std::size_t i = r;
                while (i > 0 && idx[i - 1] == u.size() - r + (i - 1))
                    --i;
                if (i == 0)
                    break;
                ++idx[i - 1];
                for (std::size_t j = i; j < r; ++j)
                    idx[j] = idx[j - 1] + 1;
            }
        }
        out.selected.clear();
        for (std::size_t i = 0; i < u.size(); ++i)
            if (!removed[i])
                out.selected.push_back(u[i]);
        if (out.selected.size() >= p.a)
            return out;
    }
    fail(Errc::RetriesExhausted, "no sample succeeded in " + std::to_string(max_retries) + " attempts");
}

/// G(nx, ny, p) with edge probability num/den, drawn row by row from `seed`.
inline BipartiteGraph random_bipartite(std::size_t nx, std::size_t ny, std::uint64_t num, std::uint64_t den,
                                       std::uint64_t seed)
{
    if (den == 0 || num > den)
        fail(Errc::InvalidArgument, "edge probability must lie in [0, 1]");
    SeededRng rng(seed);
    BipartiteGraph g(nx, ny);
    for (VertexId x = 0; x < nx; ++x)
        for (VertexId y = 0; y < ny; ++y)
            if (rng.below(den) < num)
                g.add_edge(x, y);
    return g;
}

} // namespace sumsetlab

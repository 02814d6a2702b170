#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <tuple>
#include <unordered_map>
#include <utility>
#include <vector>

#include "sumsetlab/graphkit.hpp"
#include "sumsetlab/setcalc.hpp"

namespace sumsetlab {

// ---------------------------------------------------------------------------
// Dyadic occupancy

/// Counts per dyadic interval [2^j, 2^(j+1)); negatives are binned by |x| in a
/// separate map, zero is ignored.
struct DyadicProfile {
    std::map<long, std::size_t> positive;
    std::map<long, std::size_t> negative;
    std::size_t max_occupancy = 0;
};

inline DyadicProfile dyadic_profile(const NumberSet& a)
{
    DyadicProfile p;
    for (const auto& x : a) {
        if (x.is_zero())
            continue;
        auto& bins = x.sign() > 0 ? p.positive : p.negative;
        const std::size_t c = ++bins[floor_log2(x.abs())];
        p.max_occupancy = std::max(p.max_occupancy, c);
    }
    return p;
}

struct SparseSelection {
    NumberSet selected;
    bool negated = false;      // chosen half came from -A
    std::size_t half_size = 0; // number of non-negative elements worked on
};

/// Size of the half of A that sparse_subselect draws from.
inline std::size_t sparse_half_size(const NumberSet& a)
{
    const auto nonneg = static_cast<std::size_t>(std::count_if(a.begin(), a.end(), [](const Rational& x) {
        return x.sign() >= 0;
    }));
    return 2 * nonneg < a.size() ? a.size() - nonneg : nonneg;
}

/// Every 2s-th element (1-indexed) of the sorted non-negative part of A, or of
/// -A when fewer than half of A's elements are non-negative; in that case the
/// result is negated back.
inline SparseSelection sparse_subselect(const NumberSet& a, std::size_t s)
{
    if (s == 0)
        fail(Errc::InvalidArgument, "s must be positive");
    std::vector<Rational> nonneg;
    std::vector<Rational> flipped;
    for (const auto& x : a) {
        if (x.sign() >= 0)
            nonneg.push_back(x);
        if (x.sign() <= 0)
            flipped.push_back(-x);
    }
    SparseSelection out;
    std::vector<Rational>* half = &nonneg;
    if (2 * nonneg.size() < a.size()) {
        std::sort(flipped.begin(), flipped.end());
        half = &flipped;
        out.negated = true;
    }
    out.half_size = half->size();
    if (half->size() < 2 * s)
        fail(Errc::TooSmall, "need at least " + std::to_string(2 * s) + " elements, have "
                                 + std::to_string(half->size()));
    std::vector<Rational> picked;
    for (std::size_t i = 2 * s; i <= half->size(); i += 2 * s)
        picked.push_back(out.negated ? -(*half)[i - 1] : (*half)[i - 1]);
    out.selected = NumberSet(std::move(picked));
    return out;
}

struct KSumCheck {
    bool distinct = true;
    std::size_t sum_count = 0; // number of k-subsets examined
    std::optional<std::pair<std::vector<Rational>, std::vector<Rational>>> collision;
};

/// Whether the sums of the k-element subsets of B are pairwise distinct.
inline KSumCheck verify_distinct_ksums(const NumberSet& b, std::size_t k, std::size_t cap = default_cap)
{
    if (k == 0 || k > b.size())
        fail(Errc::InvalidArgument, "need 1 <= k <= |B|");
    KSumCheck out;
    std::unordered_map<Rational, std::vector<std::size_t>, RationalHash> seen;
    std::vector<std::size_t> idx(k);
    for (std::size_t i = 0; i < k; ++i)
        idx[i] = i;
    while (true) {
        Rational sum(0);
        for (auto i : idx)
            sum += b[i];
        auto [it, inserted] = seen.try_emplace(sum, idx);
        ++out.sum_count;
        if (!inserted) {
            std::vector<Rational> first, second;
            for (auto i : it->second)
                first.push_back(b[i]);
            for (auto i : idx)
                second.push_back(b[i]);
            out.distinct = false;
            out.collision = std::make_pair(std::move(first), std::move(second));
            return out;
        }
        if (seen.size() > cap)
            fail(Errc::CapExceeded, "k-subset sums exceed cap");
        std::size_t i = k;
        while (i > 0 && idx[i - 1] == b.size() - k + (i - 1))
            --i;
        if (i == 0)
            return out;
        ++idx[i - 1];
        for (std::size_t j = i; j < k; ++j)
            idx[j] = idx[j - 1] + 1;
    }
}

// ---------------------------------------------------------------------------
// Decreasing partitions and delta sums

struct DeltaSystem {
    std::vector<Rational> deltas;

    /// 1 = delta_0 > delta_1 > ... > 0.
    bool is_valid() const
    {
        if (deltas.empty() || deltas.front() != Rational(1) || deltas.back().sign() <= 0)
            return false;
        for (std::size_t i = 1; i < deltas.size(); ++i)
            if (!(deltas[i] < deltas[i - 1]))
                return false;
        return true;
    }
};

struct DecreasingPartition {
    std::vector<NumberSet> blocks;

    /// Disjoint blocks, and every |c| in an earlier block beats every |d| in a later one.
    bool validate() const
    {
        for (std::size_t i = 0; i < blocks.size(); ++i) {
            for (std::size_t j = i + 1; j < blocks.size(); ++j) {
                if (!set_intersection(blocks[i], blocks[j]).empty())
                    return false;
                for (const auto& c : blocks[i])
                    for (const auto& d : blocks[j])
                        if (!(c.abs() > d.abs()))
                            return false;
            }
        }
        return true;
    }

    NumberSet ground_set() const
    {
        NumberSet out;
        for (const auto& b : blocks)
            out = set_union(out, b);
        return out;
    }

    /// k blocks by decreasing |c|: the first k - 1 hold floor(|C|/k) elements
    /// each and the last takes the rest.
    static DecreasingPartition balanced(const NumberSet& c, std::size_t k)
    {
        if (k == 0 || c.size() < k)
            fail(Errc::TooSmall, "need at least k elements to form k blocks");
        std::vector<Rational> order = c.elements();
        std::stable_sort(order.begin(), order.end(),
                         [](const Rational& x, const Rational& y) { return x.abs() > y.abs(); });
        const std::size_t per = c.size() / k;
        DecreasingPartition p;
        std::size_t pos = 0;
        for (std::size_t i = 0; i < k; ++i) {
            const std::size_t len = i + 1 < k ? per : order.size() - pos;
            p.blocks.emplace_back(std::vector<Rational>(order.begin() + static_cast<long>(pos),
                                                        order.begin() + static_cast<long>(pos + len)));
            pos += len;
        }
        if (!p.validate())
            fail(Errc::InvalidArgument, "C has equal absolute values across a block boundary");
        return p;
    }
};

struct DeltaCheck {
    bool holds = true;
    std::optional<std::pair<Rational, Rational>> worst_pair; // (c, d), c > d, minimising c/d - 1
    std::size_t worst_index = 0;                              // i maximising 2k delta_i / delta_(i-1)
    std::optional<Rational> min_gap;                          // min over pairs of c/d - 1
    std::optional<Rational> requirement;                      // max over i of 2k delta_i / delta_(i-1)
};

/// c/d - 1 > 2k delta_i / delta_(i-1) for all c > d in C and i = 1..k-1.
/// An invalid delta system never holds.
inline DeltaCheck check_delta_hypothesis(const NumberSet& c, const DeltaSystem& d, std::size_t k)
{
    if (c.contains(Rational(0)))
        fail(Errc::ZeroElement, "C contains 0");
    if (d.deltas.size() != k)
        fail(Errc::InvalidArgument, "delta system has " + std::to_string(d.deltas.size()) + " entries, k = "
                                        + std::to_string(k));
    DeltaCheck out;
    if (!d.is_valid()) {
        out.holds = false;
        return out;
    }
    if (k <= 1)
        return out;
    const Rational two_k(static_cast<long>(2 * k));
    for (std::size_t i = 1; i < k; ++i) {
        const Rational need = two_k * d.deltas[i] / d.deltas[i - 1];
        if (!out.requirement || need > *out.requirement) {
            out.requirement = need;
            out.worst_index = i;
        }
    }
    for (std::size_t hi = 0; hi < c.size(); ++hi) {
        for (std::size_t lo = 0; lo < hi; ++lo) {
            const Rational gap = c[hi] / c[lo] - Rational(1);
            if (!out.min_gap || gap < *out.min_gap) {
                out.min_gap = gap;
                out.worst_pair = std::make_pair(c[hi], c[lo]);
            }
        }
    }
    out.holds = !out.min_gap || *out.min_gap > *out.requirement;
    return out;
}

/// { beta * sum_i c_i delta_i : c_i in C_i }.
inline NumberSet delta_sum_set(const DecreasingPartition& p, const DeltaSystem& d, const Rational& beta,
                               std::size_t cap = default_cap)
{
    if (p.blocks.size() != d.deltas.size())
        fail(Errc::BlockMismatch, std::to_string(p.blocks.size()) + " blocks but "
                                      + std::to_string(d.deltas.size()) + " deltas");
    if (beta.is_zero())
        fail(Errc::InvalidArgument, "beta must be non-zero");
    if (p.blocks.empty())
        return NumberSet{};
    NumberSet acc = dilate(p.blocks[0], d.deltas[0]);
    for (std::size_t i = 1; i < p.blocks.size(); ++i)
        acc = sumset(acc, dilate(p.blocks[i], d.deltas[i]), cap);
    return dilate(acc, beta);
}

// ---------------------------------------------------------------------------
// Progressions in quotient sets

struct ProgressionWitness {
    Rational alpha;
    Rational theta;
    BigInt tuple_count;
    std::size_t n = 0; // N: tuples are (a, y_0, ..., y_N)
    // One representation: theta = b2 / b1, alpha = v * a1 / u.
    Rational b1, b2, u, v, a1;
};

struct ProgressionCandidate {
    Rational theta;
    Rational alpha;
    BigInt count;
};

struct ProgressionRanking {
    std::vector<ProgressionCandidate> candidates; // count desc, then (theta, alpha) asc
    BigInt total;                                 // sum over (b1, b2, u, v, a1) of the count
    Rational pigeonhole_floor;                    // total / (|B|^2 |A|^3)
};

namespace detail {

using RationalCount = std::unordered_map<Rational, BigInt, RationalHash>;

/// Q(lambda) = #{(z, y) in A^2 : z = lambda * y}.
inline RationalCount ratio_counts(const NumberSet& a)
{
    RationalCount q;
    for (const auto& z : a)
        for (const auto& y : a)
            q[z / y] += 1;
    return q;
}

inline BigInt lookup(const RationalCount& m, const Rational& key)
{
    auto it = m.find(key);
    return it == m.end() ? BigInt(0) : it->second;
}

inline void check_progression_inputs(const NumberSet& a, const NumberSet& b)
{
    if (a.empty() || b.empty())
        fail(Errc::EmptySet, "A and B must be non-empty");
    if (a.contains(Rational(0)))
        fail(Errc::ZeroElement, "A contains 0");
    if (!is_subset(b, a))
        fail(Errc::InvalidArgument, "B must be a subset of A");
}

} // namespace detail

/// Number of (a, y_0..y_N) in A^(N+2) with a * y_i * theta^i in alpha * A for all i.
inline BigInt progression_count(const NumberSet& a, std::size_t n, const Rational& theta, const Rational& alpha)
{
    const auto q = detail::ratio_counts(a);
    BigInt total = 0;
    for (const auto& x : a) {
        BigInt prod = 1;
        Rational lambda = x / alpha;
        for (std::size_t i = 0; i <= n && prod != 0; ++i, lambda *= theta)
            prod *= detail::lookup(q, lambda);
        total += prod;
    }
    return total;
}

/// All (theta, alpha) with theta in B/B, alpha in (A*A)/A and a positive tuple
/// count, ranked by count. Counts come from
/// count(alpha, theta) = sum_a prod_i Q(a theta^i / alpha).
inline ProgressionRanking progression_ranking(const NumberSet& a, const NumberSet& b, std::size_t n)
{
    detail::check_progression_inputs(a, b);
    const auto q = detail::ratio_counts(a);

    std::map<Rational, BigInt> theta_mult;
    for (const auto& b1 : b)
        for (const auto& b2 : b)
            theta_mult[b2 / b1] += 1;
    detail::RationalCount alpha_mult;
    for (const auto& u : a)
        for (const auto& v : a)
            for (const auto& a1 : a)
                alpha_mult[v * a1 / u] += 1;

    ProgressionRanking out;
    out.total = 0;
    for (const auto& [theta, tm] : theta_mult) {
        // P(lambda) = prod_i Q(lambda theta^i) over the support of Q.
        std::vector<std::pair<Rational, BigInt>> weights;
        for (const auto& [lambda, q0] : q) {
            BigInt prod = q0;
            Rational step = lambda * theta;
            for (std::size_t i = 1; i <= n && prod != 0; ++i, step *= theta)
                prod *= detail::lookup(q, step);
            if (prod != 0)
                weights.emplace_back(lambda, std::move(prod));
        }
        detail::RationalCount acc;
        for (const auto& x : a)
            for (const auto& [lambda, w] : weights) {
                Rational alpha = x / lambda;
                if (alpha_mult.count(alpha))
                    acc[std::move(alpha)] += w;
            }
        for (auto& [alpha, count] : acc) {
            out.total += tm * alpha_mult.at(alpha) * count;
            out.candidates.push_back({theta, alpha, count});
        }
    }
    std::sort(out.candidates.begin(), out.candidates.end(),
              [](const ProgressionCandidate& x, const ProgressionCandidate& y) {
                  if (x.count != y.count)
                      return x.count > y.count;
                  if (x.theta != y.theta)
                      return x.theta < y.theta;
                  return x.alpha < y.alpha;
              });
    const long bs = static_cast<long>(b.size());
    const long as = static_cast<long>(a.size());
    out.pigeonhole_floor = Rational(out.total) / (Rational(bs * bs) * Rational(as).pow(3));
    return out;
}

/// Fills in a representation theta = b2/b1, alpha = v*a1/u for a candidate.
inline ProgressionWitness make_witness(const NumberSet& a, const NumberSet& b, std::size_t n,
                                       const ProgressionCandidate& c)
{
    ProgressionWitness w{c.alpha, c.theta, c.count, n, {}, {}, {}, {}, {}};
    bool found = false;
    for (const auto& b1 : b) {
        for (const auto& b2 : b)
            if (b2 / b1 == c.theta) {
                w.b1 = b1;
                w.b2 = b2;
                found = true;
                break;
            }
        if (found)
            break;
    }
    found = false;
    for (const auto& u : a) {
        for (const auto& v : a) {
            const Rational needed = c.alpha * u / v;
            if (a.contains(needed)) {
                w.u = u;
                w.v = v;
                w.a1 = needed;
                found = true;
                break;
            }
        }
        if (found)
            break;
    }
    return w;
}

/// Maximiser of the tuple count; ties go to the smallest (theta, alpha).
inline ProgressionWitness progression_search(const NumberSet& a, const NumberSet& b, std::size_t n)
{
    const auto ranking = progression_ranking(a, b, n);
    // theta = 1, alpha = a for any a in A always has a positive count.
    return make_witness(a, b, n, ranking.candidates.front());
}

// ---------------------------------------------------------------------------
// Spread sets

struct SpreadParams {
    unsigned t = 0; // 0: pick the t in 1..t_max with the largest margin
    unsigned t_max = 64;
    unsigned r = 2;
    unsigned long m = 2;
    unsigned long a = 1;
    std::uint64_t seed = 0;
    std::size_t max_retries = default_drc_retries;
    std::size_t tuple_cap = 200'000;
    bool require_feasible = true;
};

struct SpreadSets {
    ProgressionWitness witness;
    std::vector<std::vector<Rational>> tuples; // surviving (y_0..y_N), lexicographic
    std::vector<NumberSet> projections;        // Y_0..Y_N
    unsigned t = 0;
    unsigned r = 0;
    unsigned long m = 0;
    DrcFeasibility feasibility;
    std::size_t universe_size = 0;             // tuple vertices with at least one edge
    std::size_t attempts = 0;
};

/// The bipartite graph of the spread-set construction: left vertices are the
/// elements of A, right vertices the tuples (y_0..y_N) having at least one
/// edge, with x ~ y iff x * y_i * theta^i is in alpha * A for every i.
/// Tuples are numbered in lexicographic order.
struct TupleGraph {
    BipartiteGraph graph;
    std::vector<std::vector<Rational>> tuples;
};

inline TupleGraph build_tuple_graph(const NumberSet& a, std::size_t n, const Rational& theta, const Rational& alpha,
                                    std::size_t tuple_cap)
{
    std::map<std::vector<Rational>, std::vector<VertexId>> adjacency;
    std::size_t edges = 0;
    for (VertexId x = 0; x < a.size(); ++x) {
        std::vector<std::vector<Rational>> choices(n + 1);
        Rational scale = a[x] / alpha;
        bool empty = false;
        for (std::size_t i = 0; i <= n; ++i, scale *= theta) {
            for (const auto& y : a)
                if (a.contains(scale * y))
                    choices[i].push_back(y);
            if (choices[i].empty()) {
                empty = true;
                break;
            }
        }
        if (empty)
            continue;
        std::vector<std::size_t> idx(n + 1, 0);
        std::vector<Rational> tuple(n + 1);
        while (true) {
            for (std::size_t i = 0; i <= n; ++i)
                tuple[i] = choices[i][idx[i]];
            adjacency[tuple].push_back(x);
            if (++edges > tuple_cap)
                fail(Errc::CapExceeded, "tuple graph exceeds " + std::to_string(tuple_cap) + " edges");
            std::size_t pos = n + 1;
            while (pos > 0 && ++idx[pos - 1] == choices[pos - 1].size()) {
                idx[pos - 1] = 0;
                --pos;
            }
            if (pos == 0)
                break;
        }
    }
    TupleGraph out{BipartiteGraph(a.size(), adjacency.size()), {}};
    VertexId id = 0;
    for (auto& [tuple, xs] : adjacency) {
        for (VertexId x : xs)
            out.graph.add_edge(x, id);
        out.tuples.push_back(tuple);
        ++id;
    }
    return out;
}

/// The t in 1..t_max maximising the exact selection margin (smallest t on ties).
inline std::pair<unsigned, DrcFeasibility> best_drc_t(const BipartiteGraph& g, unsigned r, unsigned long m,
                                                     unsigned long a, unsigned t_max)
{
    std::pair<unsigned, DrcFeasibility> best{0, {}};
    for (unsigned t = 1; t <= t_max; ++t) {
        auto f = drc_feasible(g, {t, r, m, a});
        if (best.first == 0 || f.margin > best.second.margin)
            best = {t, std::move(f)};
    }
    return best;
}

/// Dependent random choice on the tuple graph of a progression witness,
/// followed by projection of the surviving tuples to their coordinates.
inline SpreadSets find_spread_sets(const NumberSet& a, const ProgressionWitness& w, const SpreadParams& p)
{
    const auto tg = build_tuple_graph(a, w.n, w.theta, w.alpha, p.tuple_cap);
    SpreadSets out;
    out.witness = w;
    out.r = p.r;
    out.m = p.m;
    out.universe_size = tg.tuples.size();
    if (p.t == 0)
        std::tie(out.t, out.feasibility) = best_drc_t(tg.graph, p.r, p.m, p.a, std::max(1u, p.t_max));
    else {
        out.t = p.t;
        out.feasibility = drc_feasible(tg.graph, {p.t, p.r, p.m, p.a});
    }
    const DrcParams drc{out.t, p.r, p.m, p.a};
    if (p.require_feasible && !out.feasibility.feasible)
        fail(Errc::Infeasible, "spread-set graph fails the selection hypothesis, margin "
                                   + out.feasibility.margin.str());
    const auto sel = drc_select(tg.graph, drc, p.seed, p.max_retries);
    out.attempts = sel.attempts;
    std::vector<std::vector<Rational>> coords(w.n + 1);
    for (VertexId v : sel.selected) {
        out.tuples.push_back(tg.tuples[v]);
        for (std::size_t i = 0; i <= w.n; ++i)
            coords[i].push_back(tg.tuples[v][i]);
    }
    for (auto& c : coords)
        out.projections.emplace_back(std::move(c));
    return out;
}

inline SpreadSets find_spread_sets(const NumberSet& a, const NumberSet& b, std::size_t n, const SpreadParams& p)
{
    return find_spread_sets(a, progression_search(a, b, n), p);
}

struct SharedMultipliers {
    std::vector<std::size_t> tuple_indices; // V: one surviving tuple per chosen y, deduplicated
    NumberSet multipliers;                  // A'
    bool guaranteed = false;                // |V| <= r, so |A'| >= m is promised
};

/// For chosen subsets Y_i' of the projections, picks for each y in Y_i' the
/// lowest-index surviving tuple with coordinate i equal to y, and returns the
/// elements x of A with x * v_i * theta^i in alpha * A for every picked tuple v.
inline SharedMultipliers shared_multipliers(const NumberSet& a, const SpreadSets& s,
                                            const std::vector<NumberSet>& chosen)
{
    if (chosen.size() != s.projections.size())
        fail(Errc::InvalidArgument, "need one chosen subset per coordinate");
    SharedMultipliers out;
    for (std::size_t i = 0; i < chosen.size(); ++i) {
        for (const auto& y : chosen[i]) {
            std::size_t pick = s.tuples.size();
            for (std::size_t j = 0; j < s.tuples.size(); ++j)
                if (s.tuples[j][i] == y) {
                    pick = j;
                    break;
                }
            if (pick == s.tuples.size())
                fail(Errc::InvalidArgument, "chosen element " + y.str() + " is not in projection "
                                                + std::to_string(i));
            out.tuple_indices.push_back(pick);
        }
    }
    std::sort(out.tuple_indices.begin(), out.tuple_indices.end());
    out.tuple_indices.erase(std::unique(out.tuple_indices.begin(), out.tuple_indices.end()), out.tuple_indices.end());
    std::vector<Rational> keep;
    for (const auto& x : a) {
        bool ok = true;
        for (std::size_t j : out.tuple_indices) {
            Rational scale = x / s.witness.alpha;
            for (std::size_t i = 0; i < s.tuples[j].size() && ok; ++i, scale *= s.witness.theta)
                ok = a.contains(scale * s.tuples[j][i]);
            if (!ok)
                break;
        }
        if (ok)
            keep.push_back(x);
    }
    out.multipliers = NumberSet(std::move(keep));
    out.guaranteed = out.tuple_indices.size() <= s.r;
    return out;
}

} // namespace sumsetlab

#include <gtest/gtest.h>

#include <map>
#include <random>

#include "oracles.hpp"
#include "sumsetlab/structure.hpp"

using namespace sumsetlab;

namespace {

NumberSet gp(long ratio, std::size_t n)
{
    return NumberSet::geometric(Rational(ratio), n);
}

// Direct enumeration of (a, y_0..y_N) in A^(N+2).
BigInt brute_count(const NumberSet& a, std::size_t n, const Rational& theta, const Rational& alpha)
{
    BigInt count = 0;
    oracle::for_each_tuple(a.elements(), n + 2, [&](const std::vector<Rational>& t) {
        Rational power(1);
        for (std::size_t i = 0; i <= n; ++i, power *= theta)
            if (!a.contains(t[0] * t[i + 1] * power / alpha))
                return;
        ++count;
    });
    return count;
}

// sum_t r(t)^2 with r(t) = #{(b, v, a, z_0..z_N) : v a b^i z_i = t_i}.
BigInt brute_energy(const NumberSet& a, const NumberSet& b, std::size_t n)
{
    std::map<std::vector<Rational>, BigInt> r;
    for (const auto& bb : b)
        oracle::for_each_tuple(a.elements(), n + 3, [&](const std::vector<Rational>& t) {
            std::vector<Rational> key(n + 1);
            Rational power(1);
            for (std::size_t i = 0; i <= n; ++i, power *= bb)
                key[i] = t[0] * t[1] * power * t[i + 2];
            r[key] += 1;
        });
    BigInt total = 0;
    for (const auto& [key, c] : r)
        total += c * c;
    return total;
}

NumberSet random_positive(std::mt19937_64& rng, std::size_t max_size, long range)
{
    auto s = oracle::random_set(rng, max_size, range, 3, false);
    std::vector<Rational> v;
    for (const auto& x : s)
        v.push_back(x.abs());
    return NumberSet(std::move(v));
}

} // namespace

TEST(Dyadic, Profile)
{
    const auto p = dyadic_profile(gp(2, 10));
    EXPECT_EQ(p.max_occupancy, 1u);
    EXPECT_EQ(p.positive.size(), 10u);

    const auto q = dyadic_profile(NumberSet{Rational(1), Rational(3, 2), Rational(5)});
    EXPECT_EQ(q.positive.at(0), 2u);
    EXPECT_EQ(q.positive.at(2), 1u);
    EXPECT_EQ(q.max_occupancy, 2u);

    EXPECT_EQ(dyadic_profile(NumberSet{}).max_occupancy, 0u);

    const auto neg = dyadic_profile(NumberSet{-3, -2, 0, 2, Rational(1, 3)});
    EXPECT_EQ(neg.negative.at(1), 2u);
    EXPECT_EQ(neg.positive.at(1), 1u);
    EXPECT_EQ(neg.positive.at(-2), 1u);
    EXPECT_EQ(neg.max_occupancy, 2u);
}

TEST(Dyadic, ProfileCountsSum)
{
    std::mt19937_64 rng(3);
    for (int iter = 0; iter < 200; ++iter) {
        const auto a = oracle::random_set(rng, 30, 200, 7);
        const auto p = dyadic_profile(a);
        std::size_t pos = 0, neg = 0, mx = 0;
        for (const auto& [j, c] : p.positive) {
            pos += c;
            mx = std::max(mx, c);
        }
        for (const auto& [j, c] : p.negative) {
            neg += c;
            mx = std::max(mx, c);
        }
        std::size_t want_pos = 0, want_neg = 0;
        for (const auto& x : a) {
            want_pos += x.sign() > 0;
            want_neg += x.sign() < 0;
            if (x.is_zero())
                continue;
            // 2^j <= |x| < 2^(j+1)
            const long j = floor_log2(x.abs());
            EXPECT_LE(Rational(2).pow(j), x.abs());
            EXPECT_LT(x.abs(), Rational(2).pow(j + 1));
        }
        EXPECT_EQ(pos, want_pos);
        EXPECT_EQ(neg, want_neg);
        EXPECT_EQ(mx, p.max_occupancy);
    }
}

TEST(Dyadic, SparseSubselect)
{
    const auto s = sparse_subselect(gp(2, 10), 1);
    EXPECT_EQ(s.selected, (NumberSet{2, 8, 32, 128, 512}));
    EXPECT_FALSE(s.negated);

    try {
        sparse_subselect(NumberSet{1, 2, 3}, 2);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), Errc::TooSmall);
    }

    const auto neg = sparse_subselect(negate(gp(2, 10)), 1);
    EXPECT_TRUE(neg.negated);
    EXPECT_EQ(neg.selected, (NumberSet{-2, -8, -32, -128, -512}));
}

TEST(Dyadic, DistinctKSums)
{
    const auto ok = verify_distinct_ksums(NumberSet{2, 8, 32, 128, 512}, 2);
    EXPECT_TRUE(ok.distinct);
    EXPECT_EQ(ok.sum_count, 10u);

    const auto bad = verify_distinct_ksums(NumberSet{1, 2, 3, 4}, 2);
    ASSERT_FALSE(bad.distinct);
    ASSERT_TRUE(bad.collision.has_value());
    EXPECT_EQ(bad.collision->first, (std::vector<Rational>{1, 4}));
    EXPECT_EQ(bad.collision->second, (std::vector<Rational>{2, 3}));

    EXPECT_TRUE(verify_distinct_ksums(NumberSet{5, 6, 7}, 1).distinct);
}

TEST(Dyadic, SparseSetsGrow)
{
    // Sets with at most s elements per dyadic interval: selected elements have
    // ratio > 2 and all k-sums of the selection are distinct.
    std::mt19937_64 rng(21);
    for (int iter = 0; iter < 100; ++iter) {
        const std::size_t s = 1 + rng() % 3;
        std::vector<Rational> v;
        for (long j = 0; j < 12; ++j) {
            const std::size_t per = rng() % (s + 1);
            for (std::size_t c = 0; c < per; ++c)
                v.push_back(Rational(1L << j) + Rational(static_cast<long>(rng() % 1000), 1000) * Rational(1L << j));
        }
        NumberSet a(std::move(v));
        if (dyadic_profile(a).max_occupancy > s || a.size() < 4 * s)
            continue;
        const auto sel = sparse_subselect(a, s);
        for (std::size_t i = 1; i < sel.selected.size(); ++i)
            EXPECT_GT(sel.selected[i], Rational(2) * sel.selected[i - 1]);
        for (std::size_t k = 1; k <= std::min<std::size_t>(3, sel.selected.size()); ++k) {
            EXPECT_TRUE(verify_distinct_ksums(sel.selected, k).distinct);
            // |kA| >= |kB| = C(|B|, k) >= C(floor(n'/2s), k)
            BigInt binom;
            mpz_bin_uiui(binom.get_mpz_t(), sel.half_size / (2 * s), k);
            EXPECT_GE(BigInt(static_cast<unsigned long>(hfold_sum(a, static_cast<long>(k)).size())), binom);
        }
    }
}

TEST(Delta, HypothesisExamples)
{
    const NumberSet c{1, 100, 10000, 1000000};
    const DeltaSystem d{{Rational(1), Rational(1, 1000)}};
    auto ok = check_delta_hypothesis(c, d, 2);
    EXPECT_TRUE(ok.holds);
    EXPECT_EQ(*ok.min_gap, Rational(99));
    EXPECT_EQ(*ok.requirement, Rational(4, 1000));

    auto bad = check_delta_hypothesis(NumberSet{1, 2}, DeltaSystem{{Rational(1), Rational(1, 2)}}, 2);
    EXPECT_FALSE(bad.holds);
    ASSERT_TRUE(bad.worst_pair.has_value());
    EXPECT_EQ(bad.worst_pair->first, Rational(2));
    EXPECT_EQ(bad.worst_pair->second, Rational(1));

    EXPECT_TRUE(check_delta_hypothesis(NumberSet{1, 2}, DeltaSystem{{Rational(1)}}, 1).holds);
    EXPECT_FALSE(check_delta_hypothesis(NumberSet{1, 2}, DeltaSystem{{Rational(1), Rational(1)}}, 2).holds);
    try {
        check_delta_hypothesis(NumberSet{0, 1}, DeltaSystem{{Rational(1)}}, 1);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), Errc::ZeroElement);
    }
}

TEST(Delta, SumSetExamples)
{
    DecreasingPartition p{{NumberSet{1000000, 10000}, NumberSet{100, 1}}};
    ASSERT_TRUE(p.validate());
    const DeltaSystem d{{Rational(1), Rational(1, 1000)}};
    EXPECT_EQ(delta_sum_set(p, d, Rational(1)).size(), 4u);

    DecreasingPartition one{{NumberSet{3, 5, 7}}};
    EXPECT_EQ(delta_sum_set(one, DeltaSystem{{Rational(1)}}, Rational(2)), (NumberSet{6, 10, 14}));

    // Boundary: delta = (1, 1) violates the hypothesis and these blocks collide.
    DecreasingPartition tight{{NumberSet{2, 3}, NumberSet{1, 0}}};
    EXPECT_EQ(delta_sum_set(tight, DeltaSystem{{Rational(1), Rational(1)}}, Rational(1)).size(), 3u);

    try {
        delta_sum_set(p, DeltaSystem{{Rational(1)}}, Rational(1));
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), Errc::BlockMismatch);
    }
}

TEST(Delta, BalancedPartition)
{
    const auto p = DecreasingPartition::balanced(NumberSet{1, 2, 3, 4, 5, 6, 7}, 3);
    ASSERT_EQ(p.blocks.size(), 3u);
    EXPECT_EQ(p.blocks[0], (NumberSet{6, 7}));
    EXPECT_EQ(p.blocks[1], (NumberSet{4, 5}));
    EXPECT_EQ(p.blocks[2], (NumberSet{1, 2, 3}));
    EXPECT_EQ(p.ground_set(), (NumberSet{1, 2, 3, 4, 5, 6, 7}));
    EXPECT_THROW(DecreasingPartition::balanced(NumberSet{-2, 2}, 2), Error);
    EXPECT_FALSE((DecreasingPartition{{NumberSet{1}, NumberSet{2}}}).validate());
}

TEST(Delta, HypothesisImpliesDistinctSums)
{
    std::mt19937_64 rng(99);
    int passed = 0;
    for (int iter = 0; passed < 500; ++iter) {
        ASSERT_LT(iter, 5000);
        const std::size_t k = 1 + rng() % 4;
        // delta_i / delta_(i-1) in (0, 1) with small denominators.
        DeltaSystem d{{Rational(1)}};
        for (std::size_t i = 1; i < k; ++i)
            d.deltas.push_back(d.deltas.back() * Rational(1 + static_cast<long>(rng() % 5), 8 + static_cast<long>(rng() % 40)));
        // C with forced ratio gaps, possibly negative.
        const std::size_t size = k + rng() % 6;
        std::vector<Rational> v;
        Rational x(1 + static_cast<long>(rng() % 5), 1 + static_cast<long>(rng() % 5));
        for (std::size_t i = 0; i < size; ++i) {
            v.push_back(x);
            x *= Rational(2 + static_cast<long>(rng() % 3));
        }
        if (rng() % 4 == 0)
            for (auto& y : v)
                y = -y;
        NumberSet c(std::move(v));
        const auto check = check_delta_hypothesis(c, d, k);
        if (!check.holds)
            continue;
        ++passed;
        const auto p = DecreasingPartition::balanced(c, k);
        BigInt product = 1;
        for (const auto& b : p.blocks)
            product *= static_cast<unsigned long>(b.size());
        const Rational beta(1 + static_cast<long>(rng() % 7), 1 + static_cast<long>(rng() % 7));
        EXPECT_EQ(BigInt(static_cast<unsigned long>(delta_sum_set(p, d, beta).size())), product);
    }
}

TEST(Progression, Trivial)
{
    const NumberSet one{1};
    const auto w = progression_search(one, one, 0);
    EXPECT_EQ(w.theta, Rational(1));
    EXPECT_EQ(w.alpha, Rational(1));
    EXPECT_EQ(w.tuple_count, 1);

    try {
        progression_search(NumberSet{0, 1}, NumberSet{1}, 1);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), Errc::ZeroElement);
    }
    try {
        progression_search(NumberSet{}, NumberSet{}, 1);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), Errc::EmptySet);
    }
}

TEST(Progression, GeometricCountMatchesBruteForce)
{
    const auto a = gp(2, 6);
    const auto w = progression_search(a, a, 1);
    EXPECT_EQ(w.tuple_count, brute_count(a, 1, w.theta, w.alpha));
    EXPECT_EQ(w.theta, w.b2 / w.b1);
    EXPECT_EQ(w.alpha, w.v * w.a1 / w.u);
    EXPECT_TRUE(a.contains(w.b1) && a.contains(w.u) && a.contains(w.v) && a.contains(w.a1));

    const auto ranking = progression_ranking(a, a, 1);
    for (const auto& c : ranking.candidates)
        EXPECT_EQ(c.count, brute_count(a, 1, c.theta, c.alpha)) << c.theta.str() << " " << c.alpha.str();
}

TEST(Progression, CountsAndEnergyIdentity)
{
    std::mt19937_64 rng(8);
    for (int iter = 0; iter < 25; ++iter) {
        const auto a = random_positive(rng, 6, 12);
        std::vector<Rational> bv;
        for (const auto& x : a)
            if (rng() % 2)
                bv.push_back(x);
        if (bv.empty())
            bv.push_back(a.front());
        const NumberSet b(std::move(bv));
        const std::size_t n = iter % 3;
        const auto ranking = progression_ranking(a, b, n);
        // Each candidate count is re-derived by tuple enumeration.
        for (std::size_t i = 0; i < std::min<std::size_t>(ranking.candidates.size(), 8); ++i) {
            const auto& c = ranking.candidates[i];
            EXPECT_EQ(c.count, brute_count(a, n, c.theta, c.alpha));
        }
        // |E| = sum r(t)^2, and the maximum beats the pigeonhole floor.
        EXPECT_EQ(ranking.total, brute_energy(a, b, n));
        EXPECT_GE(Rational(ranking.candidates.front().count), ranking.pigeonhole_floor);
        // Cauchy-Schwarz: |E| >= |B|^2 |A|^(2N+6) / prod_{i=3}^{N+3} |A^(i)|.
        Rational bound = Rational(static_cast<long>(b.size() * b.size()))
                         * Rational(static_cast<long>(a.size())).pow(static_cast<long>(2 * n + 6));
        for (std::size_t i = 3; i <= n + 3; ++i)
            bound /= Rational(static_cast<long>(hfold_product(a, static_cast<long>(i)).size()));
        EXPECT_GE(Rational(ranking.total), bound);
    }
}

TEST(Spread, GeometricPairsShareMultipliers)
{
    const auto a = gp(2, 8);
    SpreadParams p;
    p.r = 2;
    p.m = 2;
    p.a = 2;
    p.seed = 3;
    const auto s = find_spread_sets(a, a, 1, p);
    // 64 tuple vertices and 300 edges: only t = 5, 6 satisfy the hypothesis, t = 5 is best.
    EXPECT_EQ(s.universe_size, 64u);
    EXPECT_EQ(s.t, 5u);
    EXPECT_TRUE(s.feasibility.feasible);
    ASSERT_EQ(s.projections.size(), 2u);
    EXPECT_FALSE(s.projections[0].empty());
    EXPECT_FALSE(s.projections[1].empty());
    EXPECT_GE(s.tuples.size(), 2u);
    for (const auto& y : s.projections)
        EXPECT_TRUE(is_subset(y, a));
    // Every pair of surviving tuples has at least m shared multipliers.
    auto works = [&](const Rational& x, const std::vector<Rational>& tuple) {
        Rational power(1);
        for (std::size_t i = 0; i < tuple.size(); ++i, power *= s.witness.theta)
            if (!a.contains(x * tuple[i] * power / s.witness.alpha))
                return false;
        return true;
    };
    for (std::size_t i = 0; i < s.tuples.size(); ++i)
        for (std::size_t j = i + 1; j < s.tuples.size(); ++j) {
            std::size_t common = 0;
            for (const auto& x : a)
                common += works(x, s.tuples[i]) && works(x, s.tuples[j]);
            EXPECT_GE(common, 2u);
        }
    // A' for one element per coordinate.
    const auto shared = shared_multipliers(a, s, {NumberSet{s.projections[0].front()},
                                                  NumberSet{s.projections[1].front()}});
    EXPECT_TRUE(shared.guaranteed);
    EXPECT_GE(shared.multipliers.size(), 2u);
    for (const auto& x : shared.multipliers)
        for (std::size_t j : shared.tuple_indices)
            EXPECT_TRUE(works(x, s.tuples[j]));
}

TEST(Spread, CompleteStructure)
{
    // For theta = 2 and alpha = 1 on GP(2,8), a tuple (y_0, y_1) works for
    // all x with x * y_0 and 2 * x * y_1 still in A.
    const auto a = gp(2, 8);
    ProgressionWitness w{Rational(1), Rational(2), BigInt(0), 1, {}, {}, {}, {}, {}};
    w.tuple_count = progression_count(a, 1, w.theta, w.alpha);
    const auto tg = build_tuple_graph(a, 1, w.theta, w.alpha, 100000);
    // Tuple (1, 1/2) is not in A^2; (1, 1) is adjacent to x = 1..64.
    const auto it = std::find(tg.tuples.begin(), tg.tuples.end(), std::vector<Rational>{1, 1});
    ASSERT_NE(it, tg.tuples.end());
    EXPECT_EQ(tg.graph.right_neighbors(static_cast<VertexId>(it - tg.tuples.begin())).size(), 7u);

    SpreadParams p;
    p.t = 1;
    p.r = 1;
    p.m = 5;
    p.a = 1;
    p.require_feasible = false;
    const auto s = find_spread_sets(a, w, p);
    for (const auto& t : s.tuples) {
        std::size_t works = 0;
        for (const auto& x : a)
            works += a.contains(x * t[0]) && a.contains(Rational(2) * x * t[1]);
        EXPECT_GE(works, 5u);
    }
}

TEST(Spread, SingleCoordinate)
{
    const auto a = gp(3, 6);
    SpreadParams p;
    p.t = 1;
    p.r = 1;
    p.m = 1;
    p.a = 1;
    p.require_feasible = false;
    const auto s = find_spread_sets(a, a, 0, p);
    ASSERT_EQ(s.projections.size(), 1u);
    EXPECT_FALSE(s.projections[0].empty());
}

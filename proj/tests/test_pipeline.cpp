#include <gtest/gtest.h>

#include "fixtures.hpp"
#include "sumsetlab/intersection.hpp"

using namespace sumsetlab;

TEST(FG, ListedValues)
{
    const auto fg = fg_table(3);
    EXPECT_EQ(fg.row(1), (std::vector<std::uint64_t>{1, 2}));
    EXPECT_EQ(fg.row(2), (std::vector<std::uint64_t>{1, 2, 2, 4}));
    EXPECT_EQ(fg.row(3), (std::vector<std::uint64_t>{1, 2, 2, 4, 2, 4, 4, 8}));
    EXPECT_EQ(fg.g(1, 2), 2u);
    EXPECT_EQ(fg.g(1, 1), 1u);
    EXPECT_THROW(fg.f(2, 5), Error);
    EXPECT_THROW(fg_table(0), Error);
}

TEST(FG, PropertiesUpToTwelve)
{
    const auto fg = fg_table(12);
    for (unsigned a = 1; a <= 12; ++a) {
        for (std::uint64_t b = 1; b <= (std::uint64_t{1} << a); ++b) {
            const auto v = fg.f(a, b);
            // Closed form 2^popcount(b-1).
            EXPECT_EQ(v, std::uint64_t{1} << std::popcount(b - 1));
            EXPECT_TRUE(std::has_single_bit(v));
            EXPECT_LE(std::countr_zero(v), static_cast<int>(a));
            EXPECT_LE(fg.g(a, b), a + 1);
            if (b % 2 == 0) {
                EXPECT_EQ(v, 2 * fg.f(a, b - 1));
                EXPECT_EQ(fg.g(a, b), fg.g(a, b - 1) + 1);
                if (a > 1)
                    EXPECT_EQ(fg.f(a, b - 1), fg.f(a - 1, b / 2));
            }
        }
    }
}

TEST(Intersection, TrivialityExamples)
{
    const NumberSet a1{0, 1};
    const auto yes = check_trivial_intersection({a1, NumberSet{0, 100000}}, 2, 1);
    EXPECT_TRUE(yes.trivial);
    EXPECT_EQ(yes.folds, (std::vector<long>{2, 8}));

    const auto no = check_trivial_intersection({a1, a1}, 2, 1);
    ASSERT_FALSE(no.trivial);
    EXPECT_EQ(*no.beta, Rational(1));

    const NumberSet zero{0};
    EXPECT_TRUE(check_trivial_intersection({zero, zero, zero, zero}, 3, 2).trivial);
    EXPECT_THROW(check_trivial_intersection({zero, zero, zero}, 2, 2), Error);
}

TEST(Intersection, FinalStepExample)
{
    const NumberSet a1{0, 1};
    const NumberSet a2{0, 100000};
    const NumberSet a = set_union(a1, a2);
    const auto cert = intersection_algorithm(a, {a1, a2}, 2, 1);
    EXPECT_EQ(cert.outcome, IntersectionOutcome::FinalStep);
    EXPECT_EQ(cert.sumset_size, 15);
    EXPECT_EQ(cert.product_size, 15);
    EXPECT_EQ(cert.levels[0][0].size(), 3u);
    EXPECT_EQ(cert.levels[0][1].size(), 5u);
    EXPECT_EQ(cert.g_left, 1u);
    EXPECT_EQ(cert.g_right, 2u);
    EXPECT_EQ(cert.lhs, hfold_sum(a, 6).size());
    EXPECT_TRUE(verify_certificate(cert, a, {a1, a2}, 2, 1));
}

TEST(Intersection, DisjointHaltAtStepZero)
{
    const NumberSet a1{0, 1, 2, 3};
    const auto a2 = fixture::scaled_run(1000, 2);
    const NumberSet a3{0, 1};
    const NumberSet a4{0, 1};
    const std::vector<NumberSet> sets{a1, a2, a3, a4};
    const auto a = fixture::union_of(sets);
    const auto cert = intersection_algorithm(a, sets, 2, 2);
    ASSERT_EQ(cert.outcome, IntersectionOutcome::DisjointHalt);
    EXPECT_EQ(cert.halt_step, 0u);
    EXPECT_EQ(cert.halt_pair, 1u);
    // X = 2A_1 = {0..6}, Y = 4A_2 = 1000 {0..4}.
    EXPECT_EQ(cert.x_prime.size(), 7u);
    EXPECT_EQ(cert.sumset_size, 35);
    EXPECT_EQ(cert.steps[0].k, 2); // ceil(5^(1/9))
    EXPECT_EQ(cert.g_left, 1u);
    EXPECT_EQ(cert.g_right, 2u);
    EXPECT_TRUE(verify_certificate(cert, a, sets, 2, 2));
}

TEST(Intersection, CoveredThenFinal)
{
    const auto in = fixture::intersection_instance(1);
    const auto cert = intersection_algorithm(in.a, in.sets, in.ell, in.t);
    ASSERT_EQ(cert.outcome, IntersectionOutcome::FinalStep);
    ASSERT_EQ(cert.levels.size(), 2u);
    EXPECT_EQ(cert.steps[0].pairs[0].case_tag, CoverCase::Covered);
    EXPECT_EQ(cert.steps[0].pairs[1].case_tag, CoverCase::Covered);
    EXPECT_EQ(cert.right_index, 3u);
    EXPECT_TRUE(verify_certificate(cert, in.a, in.sets, in.ell, in.t));
}

TEST(Intersection, HypothesisViolated)
{
    const NumberSet a1{0, 1};
    try {
        intersection_algorithm(a1, {a1, a1}, 2, 1);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), Errc::HypothesisViolated);
        EXPECT_NE(std::string(e.what()).find("beta = 1"), std::string::npos);
    }
}

TEST(Intersection, FixturesVerifyAndDetectTampering)
{
    int finals = 0, halts = 0;
    for (int v = 0; v < 20; ++v) {
        const auto in = fixture::intersection_instance(v);
        ASSERT_LE(in.a.size(), 16u);
        ASSERT_TRUE(check_trivial_intersection(in.sets, in.ell, in.t).trivial) << v;
        const auto cert = intersection_algorithm(in.a, in.sets, in.ell, in.t);
        EXPECT_TRUE(verify_certificate(cert, in.a, in.sets, in.ell, in.t)) << v;
        (cert.outcome == IntersectionOutcome::FinalStep ? finals : halts) += 1;

        auto tampered = cert;
        tampered.sumset_size += 1;
        EXPECT_FALSE(verify_certificate(tampered, in.a, in.sets, in.ell, in.t));
        tampered = cert;
        tampered.lower_chain.back() += 1;
        EXPECT_FALSE(verify_certificate(tampered, in.a, in.sets, in.ell, in.t));
        tampered = cert;
        tampered.lhs += 1;
        EXPECT_FALSE(verify_certificate(tampered, in.a, in.sets, in.ell, in.t));

        auto wrong = in.sets;
        wrong[0] = NumberSet{wrong[0].front()};
        EXPECT_FALSE(verify_certificate(cert, in.a, wrong, in.ell, in.t));
    }
    EXPECT_GT(finals, 0);
    EXPECT_GT(halts, 0);
}

// ---------------------------------------------------------------------------

#include "sumsetlab/growth.hpp"
#include "sumsetlab/iterate.hpp"

namespace {

NumberSet geometric(long ratio, std::size_t n)
{
    return FamilySpec::parse("gp:" + std::to_string(ratio)).generate(n);
}

// A_0 = {1,2} u P{1,2} u PQ{1,2}; each step splits off the larger scale.
IterateParams nested_params(long p_scale, long q_scale)
{
    IterateParams ip;
    ip.prop.ell = 4;
    ip.prop.dyadic_shortcut = false;
    const auto run = [](long scale) { return fixture::scaled_run(scale, 2, scale); };
    ip.engineered = {
        {run(1), set_union(run(p_scale), run(p_scale * q_scale))},
        {run(p_scale), run(p_scale * q_scale)},
        {NumberSet{Rational(p_scale * q_scale)}, NumberSet{Rational(2 * p_scale * q_scale)}},
    };
    return ip;
}

} // namespace

TEST(Proposition, GeometricDeltaBranch)
{
    const auto a = geometric(2, 32);
    PropositionParams p;
    p.dyadic_shortcut = false;
    const auto r = proposition_run(a, p);
    ASSERT_EQ(r.branch, PropositionBranch::DeltaGrowth);
    const auto& w = *r.growth;
    EXPECT_NE(w.witness.theta, Rational(1));
    EXPECT_GE(w.count, BigInt(static_cast<unsigned long>(w.c.size() / 2)));
    EXPECT_GE(w.count, w.count_floor);
    EXPECT_EQ(w.count, BigInt(static_cast<unsigned long>(w.partition.blocks[0].size() * w.partition.blocks[1].size())));
    EXPECT_TRUE(w.delta_check.holds);
    EXPECT_EQ(w.certified, w.count.get_ui());
    EXPECT_EQ(w.ell1, w.ell2);
    // Every term of every expansion is in +-alpha A.
    for (const auto& c0 : w.partition.blocks[0])
        for (const auto& c1 : w.partition.blocks[1])
            for (const auto& term : expand_sum(w, {c0, c1})) {
                Rational v = term.c * term.y;
                for (std::size_t i = 0; i < term.power; ++i)
                    v *= w.witness.theta;
                EXPECT_TRUE(a.contains(v / w.witness.alpha));
            }
    EXPECT_EQ(r.product_size, 63u);
}

TEST(Proposition, GeometricDyadicBranchByDefault)
{
    const auto r = proposition_run(geometric(2, 32), PropositionParams{});
    ASSERT_EQ(r.branch, PropositionBranch::DyadicGrowth);
    const auto& d = *r.dyadic;
    EXPECT_EQ(d.max_occupancy, 1u);
    // s = 2: every fourth element, 8 of them, all pair sums distinct.
    EXPECT_EQ(d.selection.selected.size(), 8u);
    EXPECT_EQ(d.count, BigInt(28));
}

TEST(Proposition, EngineeredSubsetBranch)
{
    const auto in = fixture::intersection_instance(0); // t = 1, two sets
    PropositionParams p;
    p.dyadic_shortcut = false;
    NumberSet a;
    for (const auto& x : in.a)
        if (!x.is_zero())
            a = set_union(a, NumberSet{x});
    std::vector<NumberSet> sets;
    for (const auto& s : in.sets)
        sets.push_back(set_intersection(s, a));
    p.engineered_sets = sets;
    const auto r = proposition_run(a, p);
    ASSERT_EQ(r.branch, PropositionBranch::Subset);
    const auto& sw = *r.subset;
    EXPECT_TRUE(verify_certificate(sw.certificate, a, sw.sets, p.ell, 1));
    EXPECT_TRUE(is_subset(sw.subset, a));
}

TEST(Proposition, StageErrors)
{
    try {
        proposition_run(NumberSet{0, 1, 2}, PropositionParams{});
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), Errc::StageFailed);
        EXPECT_NE(std::string(e.what()).find("stage input"), std::string::npos);
    }
    PropositionParams p;
    p.dyadic_shortcut = false;
    // Too few elements for the spacing to leave room between ratios.
    EXPECT_THROW(proposition_run(geometric(2, 12), p), Error);
}

TEST(Proposition, Deterministic)
{
    PropositionParams p;
    p.dyadic_shortcut = false;
    p.spread.seed = 11;
    const auto a = geometric(3, 24);
    const auto r1 = proposition_run(a, p);
    const auto r2 = proposition_run(a, p);
    EXPECT_EQ(r1.log, r2.log);
    ASSERT_TRUE(r1.growth && r2.growth);
    EXPECT_EQ(r1.growth->beta, r2.growth->beta);
    EXPECT_EQ(r1.growth->c, r2.growth->c);
}

TEST(Iterate, GeometricStopsAtStepZero)
{
    const auto tr = iterate_main(geometric(2, 64), IterateParams{}, 4);
    EXPECT_EQ(tr.outcome, IterateOutcome::Growth);
    ASSERT_EQ(tr.steps.size(), 1u);
    EXPECT_NE(tr.steps[0].result.branch, PropositionBranch::Subset);
}

TEST(Iterate, NestedInstance)
{
    const auto a = fixture::union_of({fixture::scaled_run(1, 2, 1), fixture::scaled_run(1000, 2, 1000),
                                      fixture::scaled_run(1000000, 2, 1000000)});
    const auto tr = iterate_main(a, nested_params(1000, 1000), 8);
    EXPECT_EQ(tr.outcome, IterateOutcome::Completed);
    ASSERT_EQ(tr.steps.size(), 3u);
    for (std::size_t j = 0; j < tr.steps.size(); ++j) {
        EXPECT_EQ(tr.steps[j].ell, 4 - static_cast<long>(j));
        EXPECT_TRUE(tr.steps[j].ell_ok);
        EXPECT_EQ(tr.steps[j].result.branch, PropositionBranch::Subset);
        if (j > 0)
            EXPECT_LT(tr.steps[j].size, tr.steps[j - 1].size);
    }
    ASSERT_TRUE(tr.telescoping);
    EXPECT_TRUE(tr.telescoping->matches);
    EXPECT_EQ(tr.telescoping->steps.size(), 3u);
}

TEST(Iterate, StepBudget)
{
    try {
        iterate_main(geometric(2, 8), IterateParams{}, 0);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), Errc::StepBudgetExhausted);
    }
}

TEST(Growth, DerivedRows)
{
    const auto report = growth_experiment(FamilySpec::parse("gp:2"), {4, 16}, {2, 3});
    ASSERT_EQ(report.rows.size(), 2u);
    EXPECT_EQ(report.rows[0].cells[1].size, 17u);
    EXPECT_EQ(report.rows[1].product_size, 31u);
    EXPECT_EQ(report.rows[1].cells[0].size, 136u);
    const auto ap = growth_experiment(FamilySpec::parse("ap:3"), {1, 5, 20}, {2});
    for (const auto& row : ap.rows)
        EXPECT_EQ(*row.cells[0].size, 2 * row.size - 1);
}

TEST(Growth, FamiliesAndCaps)
{
    EXPECT_EQ(FamilySpec::parse("ugp:2,3").generate(6).size(), 5u); // 1 is shared
    EXPECT_EQ(FamilySpec::parse("rand:100:4").generate(30).size(), 30u);
    EXPECT_EQ(FamilySpec::parse("rand:100:4").generate(30), FamilySpec::parse("rand:100:4").generate(30));
    EXPECT_THROW(FamilySpec::parse("gp:1"), Error);
    EXPECT_THROW(FamilySpec::parse("cube:2"), Error);
    EXPECT_THROW(FamilySpec::parse("rand:10"), Error);
    EXPECT_THROW(FamilySpec::parse("rand:5:1").generate(6), Error);
    const auto capped = growth_experiment(FamilySpec::parse("rand:1000000:1"), {40}, {2, 4}, 5000);
    EXPECT_TRUE(capped.rows[0].cells[1].error.has_value());
    EXPECT_FALSE(capped.rows[0].cells[1].size.has_value());
}

TEST(Growth, ParallelMatchesSerial)
{
    const auto f = FamilySpec::parse("rand:500:9");
    const std::vector<std::size_t> ns{5, 10, 15, 20, 25, 30};
    const auto serial = growth_experiment(f, ns, {2, 3}, default_cap, 1);
    const auto parallel = growth_experiment(f, ns, {2, 3}, default_cap, 4);
    for (std::size_t i = 0; i < ns.size(); ++i) {
        EXPECT_EQ(serial.rows[i].product_size, parallel.rows[i].product_size);
        for (std::size_t j = 0; j < 2; ++j)
            EXPECT_EQ(serial.rows[i].cells[j].size, parallel.rows[i].cells[j].size);
    }
}

#pragma once

// Seeded property suites behind `lemma-check`. Each suite draws random
// instances from its own stream and checks them against direct enumeration.

#include <algorithm>
#include <cstdint>
#include <functional>
#include <set>
#include <string>
#include <vector>

#include "sumsetlab/fg.hpp"
#include "sumsetlab/graphkit.hpp"
#include "sumsetlab/growth.hpp"
#include "sumsetlab/intersection.hpp"
#include "sumsetlab/random.hpp"
#include "sumsetlab/setcalc.hpp"
#include "sumsetlab/structure.hpp"
#include "sumsetlab/tarry_escott.hpp"

namespace sumsetlab {

struct SuiteResult {
    std::string name;
    std::size_t cases = 0;
    std::size_t failures = 0;
    std::vector<std::string> messages; // first few failures
};

namespace lemma_detail {

class Recorder {
public:
    explicit Recorder(std::string name) { r_.name = std::move(name); }

    void check(bool ok, const std::function<std::string()>& what)
    {
        ++r_.cases;
        if (ok)
            return;
        ++r_.failures;
        if (r_.messages.size() < 10)
            r_.messages.push_back(what());
    }

    SuiteResult done() { return std::move(r_); }

private:
    SuiteResult r_;
};

inline NumberSet random_set(SeededRng& rng, std::size_t max_size, long range, long den = 1, bool zero = true)
{
    const std::size_t n = 1 + rng.below(max_size);
    std::vector<Rational> v;
    for (std::size_t i = 0; i < n; ++i) {
        Rational x(static_cast<long>(rng.below(2 * range + 1)) - range, 1 + static_cast<long>(rng.below(den)));
        if (!zero && x.is_zero())
            x = Rational(range + 1);
        v.push_back(x);
    }
    return NumberSet(std::move(v));
}

/// All values of f over a^len, by odometer.
inline std::set<Rational> enumerate(const NumberSet& a, std::size_t len,
                                    const std::function<Rational(const std::vector<Rational>&)>& f)
{
    std::set<Rational> out;
    std::vector<std::size_t> idx(len, 0);
    std::vector<Rational> t(len);
    while (true) {
        for (std::size_t i = 0; i < len; ++i)
            t[i] = a[idx[i]];
        out.insert(f(t));
        std::size_t pos = 0;
        while (pos < len && ++idx[pos] == a.size())
            idx[pos++] = 0;
        if (pos == len)
            return out;
    }
}

inline bool same(const NumberSet& s, const std::set<Rational>& t)
{
    return s.size() == t.size() && std::equal(s.begin(), s.end(), t.begin());
}

} // namespace lemma_detail

inline SuiteResult suite_setcalc(std::uint64_t seed, std::size_t cases = 100)
{
    using namespace lemma_detail;
    Recorder rec("setcalc");
    SeededRng rng(seed ^ 0x5e7ca1c);
    for (std::size_t c = 0; c < cases; ++c) {
        const auto a = random_set(rng, 6, 12, 3);
        const long h = 1 + static_cast<long>(rng.below(3));
        const auto tag = [&] { return "A = " + a.str() + ", h = " + std::to_string(h); };
        rec.check(same(hfold_sum(a, h), enumerate(a, h, [](const auto& t) {
                      Rational s = 0;
                      for (const auto& x : t)
                          s += x;
                      return s;
                  })),
                  [&] { return "hfold_sum " + tag(); });
        rec.check(same(hfold_product(a, h), enumerate(a, h, [](const auto& t) {
                      Rational s = 1;
                      for (const auto& x : t)
                          s *= x;
                      return s;
                  })),
                  [&] { return "hfold_product " + tag(); });
        rec.check(same(signed_fold(a, h, 1), enumerate(a, h + 1, [h](const auto& t) {
                      Rational s = 0;
                      for (std::size_t i = 0; i < t.size(); ++i)
                          s += static_cast<long>(i) < h ? t[i] : -t[i];
                      return s;
                  })),
                  [&] { return "signed_fold " + tag(); });

        const auto b = random_set(rng, 6, 12);
        BigInt quads = 0;
        for (const auto& x : a)
            for (const auto& y : b)
                for (const auto& x2 : a)
                    for (const auto& y2 : b)
                        if (x + y == x2 + y2)
                            ++quads;
        rec.check(additive_energy(a, b).value == quads, [&] { return "energy " + tag(); });

        // |X+Y| |(X-X) n (Y-Y)| >= |X||Y|, with equality of |X+Y| when the meet is {0}
        const auto meet = set_intersection(difference_set(a, a), difference_set(b, b));
        const std::size_t s = sumset(a, b).size();
        rec.check(s * meet.size() >= a.size() * b.size() && (meet.size() != 1 || s == a.size() * b.size()),
                  [&] { return "intersection bound " + tag(); });

        // |kA - lA| |A|^(k+l-1) <= |A+A|^(k+l)
        const long k = 1 + static_cast<long>(rng.below(2));
        const long l = static_cast<long>(rng.below(3 - k));
        const BigInt lhs = BigInt(static_cast<unsigned long>(signed_fold(a, k, l).size()));
        BigInt doubling_pow = 1, size_pow = 1;
        for (long i = 0; i < k + l; ++i)
            doubling_pow *= BigInt(static_cast<unsigned long>(sumset(a, a).size()));
        for (long i = 0; i + 1 < k + l; ++i)
            size_pow *= BigInt(static_cast<unsigned long>(a.size()));
        rec.check(lhs * size_pow <= doubling_pow, [&] { return "Plunnecke-Ruzsa " + tag(); });
    }
    return rec.done();
}

inline SuiteResult suite_tarry_escott(std::uint64_t /*seed*/)
{
    using namespace lemma_detail;
    Recorder rec("tarry-escott");
    for (int k = 0; k <= 7; ++k) {
        const auto p = construct_vanishing_poly(k);
        bool coeffs = true;
        for (const auto& [e, c] : p.terms())
            coeffs = coeffs && (c == 1 || c == -1);
        // order via the first non-vanishing derivative at 1
        unsigned long deriv = 0;
        for (;; ++deriv) {
            BigInt value = 0;
            for (const auto& [e, c] : p.terms()) {
                BigInt falling = 1;
                for (unsigned long i = 0; i < deriv; ++i)
                    falling *= BigInt(static_cast<long>(e) - static_cast<long>(i));
                value += c * falling;
            }
            if (value != 0)
                break;
        }
        const std::size_t bound = std::max(static_cast<std::size_t>(k * k), std::size_t{2});
        rec.check(coeffs && p.is_monic() && p.term_count() <= bound && vanishing_order(p) == static_cast<unsigned long>(k)
                      && deriv == static_cast<unsigned long>(k),
                  [&] { return "vanishing polynomial k = " + std::to_string(k) + ": " + p.str(); });
    }
    for (int d = 1; d <= 9; ++d) {
        const auto* sol = TeTable::builtin().find(d);
        rec.check(sol && verify_te(*sol) == d, [&] { return "table entry of degree " + std::to_string(d); });
    }
    return rec.done();
}

inline SuiteResult suite_graphkit(std::uint64_t seed, std::size_t cases = 60)
{
    using namespace lemma_detail;
    Recorder rec("graphkit");
    SeededRng rng(seed ^ 0x9a4f);
    for (std::size_t c = 0; c < cases; ++c) {
        const auto x = random_set(rng, 10, 30);
        const auto y = random_set(rng, 6, 30);
        const Rational k(1 + static_cast<long>(rng.below(x.size())), 1 + static_cast<long>(rng.below(2)));
        const auto out = covering_split(x, y, k);
        const auto dy = difference_set(y, y);
        bool ok = is_subset(out.subset, x);
        if (out.case_tag == CoverCase::Disjoint) {
            ok = ok && Rational(static_cast<long>(out.subset.size())) >= std::min(k, Rational(static_cast<long>(x.size())));
            for (const auto& u : out.subset)
                for (const auto& v : out.subset)
                    ok = ok && (u == v || !dy.contains(u - v));
        } else {
            const auto dy2 = sumset(dy, dy);
            for (const auto& u : out.subset)
                for (const auto& v : out.subset)
                    ok = ok && dy2.contains(u - v);
        }
        rec.check(ok, [&] { return "cover X = " + x.str() + ", Y = " + y.str() + ", K = " + k.str(); });
    }
    for (std::size_t c = 0; c < cases; ++c) {
        const auto g = random_bipartite(8 + rng.below(10), 6 + rng.below(12), 7, 10, rng.next());
        const unsigned r = 1 + static_cast<unsigned>(rng.below(3));
        const DrcParams p{2 + r, r, 2, 2};
        try {
            const auto sel = drc_select(g, p, rng.next(), 200);
            bool ok = true;
            // every r-subset has >= m common neighbours, by odometer over subsets
            std::vector<std::size_t> idx(r);
            const auto& u = sel.selected;
            if (u.size() >= r) {
                for (std::size_t i = 0; i < r; ++i)
                    idx[i] = i;
                while (true) {
                    std::size_t common = 0;
                    for (VertexId xv = 0; xv < g.left_count(); ++xv) {
                        bool all = true;
                        for (auto i : idx)
                            all = all && g.has_edge(xv, u[i]);
                        common += all;
                    }
                    ok = ok && common >= p.m;
                    std::size_t pos = r;
                    while (pos > 0 && idx[pos - 1] == u.size() - r + pos - 1)
                        --pos;
                    if (pos == 0)
                        break;
                    ++idx[pos - 1];
                    for (std::size_t i = pos; i < r; ++i)
                        idx[i] = idx[i - 1] + 1;
                }
            }
            rec.check(ok, [&] { return "drc selection, r = " + std::to_string(r); });
        } catch (const Error& e) {
            rec.check(e.code() == Errc::RetriesExhausted, [&] { return std::string("drc: ") + e.what(); });
        }
    }
    return rec.done();
}

inline SuiteResult suite_structure(std::uint64_t seed, std::size_t cases = 200)
{
    using namespace lemma_detail;
    Recorder rec("structure");
    SeededRng rng(seed ^ 0x57c7);
    std::size_t passed = 0;
    for (std::size_t iter = 0; passed < cases && iter < 20 * cases; ++iter) {
        const std::size_t k = 1 + rng.below(4);
        DeltaSystem d{{Rational(1)}};
        for (std::size_t i = 1; i < k; ++i)
            d.deltas.push_back(d.deltas.back()
                               * Rational(1 + static_cast<long>(rng.below(5)), 8 + static_cast<long>(rng.below(40))));
        std::vector<Rational> v;
        Rational x(1 + static_cast<long>(rng.below(5)), 1 + static_cast<long>(rng.below(5)));
        for (std::size_t i = 0; i < k + rng.below(5); ++i, x *= Rational(2 + static_cast<long>(rng.below(3))))
            v.push_back(x);
        const NumberSet c(std::move(v));
        if (!check_delta_hypothesis(c, d, k).holds)
            continue;
        ++passed;
        const auto p = DecreasingPartition::balanced(c, k);
        std::size_t product = 1;
        for (const auto& b : p.blocks)
            product *= b.size();
        rec.check(delta_sum_set(p, d, Rational(1 + static_cast<long>(rng.below(5)))).size() == product,
                  [&] { return "delta sums collide for C = " + c.str(); });
    }
    for (std::size_t iter = 0; iter < cases / 4; ++iter) {
        // sparse sets: powers of 2 with random gaps, a few per dyadic interval
        std::vector<Rational> v;
        long e = 0;
        for (std::size_t i = 0; i < 8 + rng.below(12); ++i, e += static_cast<long>(rng.below(2)))
            v.push_back(Rational(BigInt(BigInt(1) << static_cast<mp_bitcnt_t>(e))) * Rational(4 + static_cast<long>(rng.below(4)), 4));
        const NumberSet a(std::move(v));
        const std::size_t s = std::max<std::size_t>(1, dyadic_profile(a).max_occupancy);
        if (sparse_half_size(a) < 2 * s)
            continue;
        const auto sel = sparse_subselect(a, s);
        const std::size_t k = 2;
        rec.check(sel.selected.size() < k || verify_distinct_ksums(sel.selected, k).distinct,
                  [&] { return "dyadic selection has colliding sums for A = " + a.str(); });
    }
    return rec.done();
}

inline SuiteResult suite_pipeline(std::uint64_t seed, std::size_t cases = 20)
{
    using namespace lemma_detail;
    Recorder rec("pipeline");
    const FGTable fg(12);
    for (unsigned a = 1; a <= 12; ++a)
        for (std::uint64_t b = 1; b <= (std::uint64_t{1} << a); ++b) {
            const auto v = fg.f(a, b);
            bool ok = v == (std::uint64_t{1} << std::popcount(b - 1)) && fg.g(a, b) <= a + 1;
            if (b % 2 == 0)
                ok = ok && v == 2 * fg.f(a, b - 1) && fg.g(a, b) == fg.g(a, b - 1) + 1;
            rec.check(ok, [&] { return "f(" + std::to_string(a) + ", " + std::to_string(b) + ")"; });
        }
    SeededRng rng(seed ^ 0x1a7e);
    for (std::size_t c = 0; c < cases; ++c) {
        // two short runs on scales far apart, so the difference sets meet only at 0
        const unsigned t = 1;
        const long big = 1000 + static_cast<long>(rng.below(1000));
        NumberSet y1 = random_set(rng, 3, 3);
        NumberSet y2 = dilate(random_set(rng, 3, 3), Rational(big));
        const NumberSet a = set_union(y1, y2);
        const auto cert = intersection_algorithm(a, {y1, y2}, 2, t);
        rec.check(verify_certificate(cert, a, {y1, y2}, 2, t),
                  [&] { return "certificate for " + y1.str() + ", " + y2.str(); });
    }
    const auto report = growth_experiment(FamilySpec::parse("gp:2"), {4, 16}, {2, 3});
    rec.check(report.rows[1].product_size == 31u && report.rows[1].cells[0].size == 136u
                  && report.rows[0].cells[1].size == 17u,
              [] { return std::string("derived growth rows"); });
    return rec.done();
}

inline const std::vector<std::string>& suite_names()
{
    static const std::vector<std::string> names{"setcalc", "tarry-escott", "graphkit", "structure", "pipeline"};
    return names;
}

/// Runs one named suite or "all".
inline std::vector<SuiteResult> run_suites(const std::string& which, std::uint64_t seed)
{
    std::vector<SuiteResult> out;
    const bool all = which == "all";
    if (!all && std::find(suite_names().begin(), suite_names().end(), which) == suite_names().end())
        fail(Errc::InvalidArgument, "unknown suite '" + which + "'");
    if (all || which == "setcalc")
        out.push_back(suite_setcalc(seed));
    if (all || which == "tarry-escott")
        out.push_back(suite_tarry_escott(seed));
    if (all || which == "graphkit")
        out.push_back(suite_graphkit(seed));
    if (all || which == "structure")
        out.push_back(suite_structure(seed));
    if (all || which == "pipeline")
        out.push_back(suite_pipeline(seed));
    return out;
}

} // namespace sumsetlab

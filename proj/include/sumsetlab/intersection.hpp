#pragma once

/**
 * @file intersection.hpp
 * @brief Trivial intersections of multifold difference sets and the
 * halving algorithm that turns them into a growth certificate.
 *
 * Given A_1..A_(2^t) inside A with
 *   intersection over i of (F_i A_i - F_i A_i) = {0},  F_i = f(t,i) l^g(t,i),
 * the algorithm sets A_(0,i) = l^g(t,i) A_i and repeatedly pairs neighbours
 * with the covering split. A Disjoint outcome halts with
 * |X' + Y| = |X'||Y|; otherwise the Covered subsets form the next level. With
 * two sets left their sumset is a full product. Either way the certificate
 * records both size chains and the final inequality
 *   |(l^g1 + l^g2) A| >= rhs
 * in exact arithmetic, and verify_certificate recomputes all of it with its
 * own naive set code.
 */

#include <bit>
#include <cstdint>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "sumsetlab/fg.hpp"
#include "sumsetlab/graphkit.hpp"
#include "sumsetlab/setcalc.hpp"

namespace sumsetlab {

namespace detail {

inline long checked_pow(long base, unsigned e)
{
    long out = 1;
    for (unsigned i = 0; i < e; ++i) {
        if (out > (1L << 40) / std::max(base, 1L))
            fail(Errc::CapExceeded, "fold multiplicity overflows");
        out *= base;
    }
    return out;
}

inline void check_family(const std::vector<NumberSet>& sets, long ell, unsigned t)
{
    if (t == 0 || t > 20)
        fail(Errc::InvalidArgument, "t must be in 1..20");
    if (ell < 1)
        fail(Errc::InvalidArgument, "l must be positive");
    if (sets.size() != (std::size_t{1} << t))
        fail(Errc::InvalidArgument, "need 2^t = " + std::to_string(std::size_t{1} << t) + " sets, got "
                                        + std::to_string(sets.size()));
    for (const auto& s : sets)
        if (s.empty())
            fail(Errc::EmptyInput, "every A_i must be non-empty");
}

} // namespace detail

/// Fold multiplicity f(t,i) * l^g(t,i) of the i-th set (1-based).
inline long intersection_fold(const FGTable& fg, long ell, unsigned t, std::size_t i)
{
    return static_cast<long>(fg.f(t, i)) * detail::checked_pow(ell, fg.g(t, i));
}

struct TrivialIntersection {
    bool trivial = true;
    std::optional<Rational> beta;  // a positive common element when not trivial
    std::vector<Rational> betas;   // positive common elements found, ascending, beta first
    std::vector<long> folds;       // F_1..F_(2^t)
    long level = 0;                // fold depth at which the search stopped
};

/// Since 0 is in hY - hY, the h-fold difference sets grow with h. The
/// intersection is searched at depths 1, 2, 4, ... (each capped at F_i), so a
/// common element found early settles non-triviality without the full folds.
/// Up to `limit` positive witnesses are returned from the first depth having any.
inline TrivialIntersection check_trivial_intersection(const std::vector<NumberSet>& sets, long ell, unsigned t,
                                                      std::size_t cap = default_cap, std::size_t limit = 1)
{
    detail::check_family(sets, ell, t);
    const FGTable fg(t);
    TrivialIntersection out;
    long top = 1;
    for (std::size_t i = 1; i <= sets.size(); ++i) {
        out.folds.push_back(intersection_fold(fg, ell, t, i));
        top = std::max(top, out.folds.back());
    }
    for (long h = 1;; h = std::min(2 * h, top)) {
        out.level = h;
        std::optional<NumberSet> meet;
        for (std::size_t i = 0; i < sets.size(); ++i) {
            const long fold = std::min(h, out.folds[i]);
            const NumberSet d = signed_fold(sets[i], fold, fold, cap);
            meet = meet ? set_intersection(*meet, d) : d;
        }
        for (const auto& x : *meet) {
            if (x.sign() > 0 && out.betas.size() < limit)
                out.betas.push_back(x);
        }
        if (!out.betas.empty()) {
            out.trivial = false;
            out.beta = out.betas.front();
            return out;
        }
        if (h == top)
            return out;
    }
}

enum class IntersectionOutcome { DisjointHalt, FinalStep };

inline const char* to_string(IntersectionOutcome o)
{
    return o == IntersectionOutcome::DisjointHalt ? "DisjointHalt" : "FinalStep";
}

struct PairRecord {
    std::size_t pair = 0; // i, 1-based: X = A_(j,2i-1), Y = A_(j,2i)
    CoverCase case_tag = CoverCase::Covered;
    std::size_t x_size = 0;
    std::size_t y_size = 0;
    std::size_t subset_size = 0;
};

struct StepRecord {
    unsigned step = 0;
    BigInt k; // K_j = ceil(n^(1/3^(t-j)))
    std::vector<PairRecord> pairs;
};

struct IntersectionCertificate {
    unsigned t = 0;
    long ell = 0;
    std::size_t n = 0;
    std::vector<std::vector<NumberSet>> levels; // levels[j][i-1] = A_(j,i)
    std::vector<StepRecord> steps;
    IntersectionOutcome outcome = IntersectionOutcome::FinalStep;
    unsigned halt_step = 0;
    std::size_t halt_pair = 0;
    NumberSet x_prime;      // DisjointHalt: X'; FinalStep: A_(t-1,1)
    std::size_t left_index = 0;  // s1: the bottom-level index above X
    std::size_t right_index = 0; // s: the bottom-level index above Y
    unsigned g_left = 0;         // g(t, s1)
    unsigned g_right = 0;        // g(t, s)
    BigInt sumset_size;          // |X' + Y| (or |A_(t-1,1) + A_(t-1,2)|)
    BigInt product_size;         // |X'||Y|
    // DisjointHalt: |A_(j,2i)|, |A_(j-1,4i-1)|, ..., |A_(0,s)|.
    // FinalStep: |A_(m,1)||A_(m,2^(t-1-m)+1)| for m = t-1 down to 0.
    std::vector<BigInt> lower_chain;
    // |A_(m,left) + A_(m,right)| for m = halt level down to 0.
    std::vector<BigInt> upper_chain;
    BigInt lhs;   // |(l^g_left + l^g_right) A|
    Rational rhs; // DisjointHalt: K_j |A_(0,s)| / prod_(m<j) K_m; FinalStep: |A_(0,1)||A_(0,s)| / prod_(m<=t-2) K_m^2
    Rational growth_factor; // rhs / |A_(0,s)| = rhs / |l^g_right A_s|
};

/// Runs the halving algorithm; requires each A_i to be a subset of A and the
/// trivial-intersection hypothesis (HypothesisViolated otherwise).
inline IntersectionCertificate intersection_algorithm(const NumberSet& a, const std::vector<NumberSet>& sets,
                                                      long ell, unsigned t, std::size_t cap = default_cap)
{
    detail::check_family(sets, ell, t);
    if (ell < 2)
        fail(Errc::InvalidArgument, "l must be at least 2");
    for (const auto& s : sets)
        if (!is_subset(s, a))
            fail(Errc::InvalidArgument, "every A_i must be a subset of A");
    const auto hyp = check_trivial_intersection(sets, ell, t, cap);
    if (!hyp.trivial)
        fail(Errc::HypothesisViolated, "difference-set intersection contains beta = " + hyp.beta->str());

    const FGTable fg(t);
    IntersectionCertificate cert;
    cert.t = t;
    cert.ell = ell;
    cert.n = a.size();
    const BigInt n(static_cast<unsigned long>(a.size()));

    std::vector<NumberSet> level0;
    for (std::size_t i = 1; i <= sets.size(); ++i)
        level0.push_back(hfold_sum(sets[i - 1], detail::checked_pow(ell, fg.g(t, i)), cap));
    cert.levels.push_back(std::move(level0));

    std::vector<BigInt> ks;
    auto size_of = [](const NumberSet& s) { return BigInt(static_cast<unsigned long>(s.size())); };
    auto finish = [&](std::size_t left, std::size_t right) {
        cert.left_index = left;
        cert.right_index = right;
        cert.g_left = fg.g(t, left);
        cert.g_right = fg.g(t, right);
        const long fold = detail::checked_pow(ell, cert.g_left) + detail::checked_pow(ell, cert.g_right);
        cert.lhs = size_of(hfold_sum(a, fold, cap));
        cert.growth_factor = cert.rhs / Rational(size_of(cert.levels[0][right - 1]));
        if (Rational(cert.lhs) < cert.rhs)
            throw std::logic_error("intersection certificate inequality fails");
    };

    for (unsigned j = 0; j + 1 < t; ++j) {
        StepRecord step;
        step.step = j;
        step.k = ceil_root(n, static_cast<unsigned long>(detail::checked_pow(3, t - j)));
        ks.push_back(step.k);
        const auto& cur = cert.levels[j];
        std::vector<NumberSet> next;
        for (std::size_t i = 1; 2 * i <= cur.size(); ++i) {
            const NumberSet& x = cur[2 * i - 2];
            const NumberSet& y = cur[2 * i - 1];
            const auto split = covering_split(x, y, Rational(step.k));
            step.pairs.push_back({i, split.case_tag, x.size(), y.size(), split.subset.size()});
            if (split.case_tag == CoverCase::Disjoint) {
                cert.steps.push_back(std::move(step));
                cert.outcome = IntersectionOutcome::DisjointHalt;
                cert.halt_step = j;
                cert.halt_pair = i;
                cert.x_prime = split.subset;
                cert.product_size = size_of(split.subset) * size_of(y);
                cert.sumset_size = size_of(sumset(split.subset, y, cap));
                if (cert.sumset_size != cert.product_size)
                    throw std::logic_error("disjoint case without a full sumset");
                std::size_t left = 2 * i - 1;
                std::size_t right = 2 * i;
                Rational denom(1);
                for (unsigned m = j + 1; m-- > 0;) {
                    cert.lower_chain.push_back(size_of(cert.levels[m][right - 1]));
                    cert.upper_chain.push_back(size_of(sumset(cert.levels[m][left - 1], cert.levels[m][right - 1], cap)));
                    if (m > 0) {
                        left = 2 * left - 1;
                        right = 2 * right - 1;
                        denom *= Rational(ks[m - 1]);
                    }
                }
                cert.rhs = Rational(ks[j]) * Rational(cert.lower_chain.back()) / denom;
                finish(left, right);
                return cert;
            }
            next.push_back(split.subset);
        }
        cert.steps.push_back(std::move(step));
        cert.levels.push_back(std::move(next));
    }

    // Two sets left: A_(t-1,1) and A_(t-1,2).
    const auto& last = cert.levels[t - 1];
    cert.outcome = IntersectionOutcome::FinalStep;
    cert.halt_step = t - 1;
    cert.halt_pair = 1;
    cert.x_prime = last[0];
    cert.product_size = size_of(last[0]) * size_of(last[1]);
    cert.sumset_size = size_of(sumset(last[0], last[1], cap));
    if (cert.sumset_size != cert.product_size)
        throw std::logic_error("final step without a full sumset");
    std::size_t right = 2;
    Rational denom(1);
    for (unsigned m = t; m-- > 0;) {
        const auto& lv = cert.levels[m];
        cert.lower_chain.push_back(size_of(lv[0]) * size_of(lv[right - 1]));
        cert.upper_chain.push_back(size_of(sumset(lv[0], lv[right - 1], cap)));
        if (m > 0) {
            right = 2 * right - 1;
            denom *= Rational(ks[m - 1]) * Rational(ks[m - 1]);
        }
    }
    cert.rhs = Rational(cert.lower_chain.back()) / denom;
    finish(1, right);
    return cert;
}

// ---------------------------------------------------------------------------
// Independent verification. Nothing below calls the fold, merge or covering
// code above; sets are rebuilt with std::set.

namespace verify_detail {

using Set = std::set<Rational>;

inline Set to_set(const NumberSet& s)
{
    return {s.begin(), s.end()};
}

inline Set add(const Set& a, const Set& b)
{
    Set out;
    for (const auto& x : a)
        for (const auto& y : b)
            out.insert(x + y);
    return out;
}

inline Set diff(const Set& a, const Set& b)
{
    Set out;
    for (const auto& x : a)
        for (const auto& y : b)
            out.insert(x - y);
    return out;
}

inline Set fold(const Set& a, long h)
{
    Set out = a;
    for (long i = 1; i < h; ++i)
        out = add(out, a);
    return out;
}

inline bool subset(const Set& a, const Set& b)
{
    for (const auto& x : a)
        if (!b.count(x))
            return false;
    return true;
}

// f(a, b) = 2^popcount(b - 1) for any a with b <= 2^a.
inline std::uint64_t f_closed(std::uint64_t b)
{
    return std::uint64_t{1} << std::popcount(b - 1);
}

inline unsigned g_closed(std::uint64_t b)
{
    return static_cast<unsigned>(std::popcount(b - 1)) + 1;
}

inline BigInt root_up(const BigInt& n, unsigned long degree)
{
    BigInt k = 1;
    while (true) {
        BigInt p;
        mpz_pow_ui(p.get_mpz_t(), k.get_mpz_t(), degree);
        if (p >= n)
            return k;
        ++k;
    }
}

inline long ipow(long b, unsigned e)
{
    long out = 1;
    for (unsigned i = 0; i < e; ++i)
        out *= b;
    return out;
}

} // namespace verify_detail

/// Recomputes every set, size and inequality of a certificate from A and the
/// A_i; true iff everything matches and holds.
inline bool verify_certificate(const IntersectionCertificate& cert, const NumberSet& a,
                               const std::vector<NumberSet>& sets, long ell, unsigned t)
{
    using namespace verify_detail;
    try {
        if (cert.t != t || cert.ell != ell || cert.n != a.size() || t == 0 || ell < 2
            || sets.size() != (std::size_t{1} << t))
            return false;
        const Set aa = to_set(a);
        for (const auto& s : sets)
            if (s.empty() || !subset(to_set(s), aa))
                return false;

        // Hypothesis.
        std::optional<Set> meet;
        for (std::size_t i = 1; i <= sets.size(); ++i) {
            const long fold_count = static_cast<long>(f_closed(i)) * ipow(ell, g_closed(i));
            const Set fs = fold(to_set(sets[i - 1]), fold_count);
            const Set d = diff(fs, fs);
            if (!meet)
                meet = d;
            else {
                Set keep;
                for (const auto& x : *meet)
                    if (d.count(x))
                        keep.insert(x);
                meet = std::move(keep);
            }
        }
        if (meet->size() != 1 || !meet->begin()->is_zero())
            return false;

        // Level 0.
        if (cert.levels.empty() || cert.levels[0].size() != sets.size())
            return false;
        for (std::size_t i = 1; i <= sets.size(); ++i)
            if (to_set(cert.levels[0][i - 1]) != fold(to_set(sets[i - 1]), ipow(ell, g_closed(i))))
                return false;

        // K values and the recorded steps.
        const BigInt n(static_cast<unsigned long>(a.size()));
        std::vector<BigInt> ks;
        const unsigned halt = cert.halt_step;
        const bool disjoint = cert.outcome == IntersectionOutcome::DisjointHalt;
        if ((disjoint && halt + 1 >= t) || (!disjoint && halt != t - 1))
            return false;
        const unsigned covering_steps = disjoint ? halt + 1 : t - 1;
        if (cert.steps.size() != covering_steps || cert.levels.size() != (disjoint ? halt + 1 : t))
            return false;
        for (unsigned j = 0; j < covering_steps; ++j) {
            ks.push_back(root_up(n, static_cast<unsigned long>(ipow(3, t - j))));
            if (cert.steps[j].step != j || cert.steps[j].k != ks.back())
                return false;
        }

        // Levels above 0 come from Covered outcomes.
        for (std::size_t j = 1; j < cert.levels.size(); ++j) {
            const auto& prev = cert.levels[j - 1];
            const auto& cur = cert.levels[j];
            if (cur.size() * 2 != prev.size())
                return false;
            for (std::size_t i = 0; i < cur.size(); ++i) {
                const Set x = to_set(prev[2 * i]);
                const Set y = to_set(prev[2 * i + 1]);
                const Set xp = to_set(cur[i]);
                if (xp.empty() || !subset(xp, x))
                    return false;
                if (BigInt(static_cast<unsigned long>(xp.size())) * ks[j - 1] < BigInt(static_cast<unsigned long>(x.size())))
                    return false;
                const Set dy = diff(y, y);
                if (!subset(diff(xp, xp), add(dy, dy)))
                    return false;
                const auto& rec = cert.steps[j - 1].pairs;
                if (rec.size() != cur.size() || rec[i].case_tag != CoverCase::Covered || rec[i].subset_size != xp.size())
                    return false;
            }
        }

        // The halting pair.
        std::size_t left = 1, right = 2;
        Rational rhs;
        std::vector<BigInt> lower, upper;
        auto sz = [](const Set& s) { return BigInt(static_cast<unsigned long>(s.size())); };
        if (disjoint) {
            const auto& lv = cert.levels[halt];
            const std::size_t i = cert.halt_pair;
            if (i == 0 || 2 * i > lv.size() || cert.steps[halt].pairs.size() != i)
                return false;
            for (std::size_t p = 0; p + 1 < i; ++p)
                if (cert.steps[halt].pairs[p].case_tag != CoverCase::Covered)
                    return false;
            const Set x = to_set(lv[2 * i - 2]);
            const Set y = to_set(lv[2 * i - 1]);
            const Set xp = to_set(cert.x_prime);
            if (!subset(xp, x) || BigInt(static_cast<unsigned long>(xp.size())) < ks[halt])
                return false;
            const Set dx = diff(xp, xp);
            const Set dy = diff(y, y);
            for (const auto& v : dx)
                if (!v.is_zero() && dy.count(v))
                    return false;
            const BigInt s = sz(add(xp, y));
            if (s != sz(xp) * sz(y) || s != cert.sumset_size || s != cert.product_size)
                return false;
            left = 2 * i - 1;
            right = 2 * i;
            Rational denom(1);
            for (unsigned m = halt + 1; m-- > 0;) {
                lower.push_back(sz(to_set(cert.levels[m][right - 1])));
                upper.push_back(sz(add(to_set(cert.levels[m][left - 1]), to_set(cert.levels[m][right - 1]))));
                if (m > 0) {
                    left = 2 * left - 1;
                    right = 2 * right - 1;
                    denom *= Rational(ks[m - 1]);
                }
            }
            rhs = Rational(ks[halt]) * Rational(lower.back()) / denom;
            // |Y| shrinks by at most K per level.
            for (std::size_t m = 0; m + 1 < lower.size(); ++m)
                if (lower[m] * ks[halt - 1 - m] < lower[m + 1])
                    return false;
            if (Rational(cert.sumset_size) < rhs)
                return false;
        } else {
            const auto& lv = cert.levels[t - 1];
            if (lv.size() != 2 || to_set(cert.x_prime) != to_set(lv[0]))
                return false;
            const Set l1 = to_set(lv[0]);
            const Set l2 = to_set(lv[1]);
            const BigInt s = sz(add(l1, l2));
            if (s != sz(l1) * sz(l2) || s != cert.sumset_size || s != cert.product_size)
                return false;
            Rational denom(1);
            for (unsigned m = t; m-- > 0;) {
                const auto& cur = cert.levels[m];
                lower.push_back(sz(to_set(cur[0])) * sz(to_set(cur[right - 1])));
                upper.push_back(sz(add(to_set(cur[0]), to_set(cur[right - 1]))));
                if (m > 0) {
                    right = 2 * right - 1;
                    denom *= Rational(ks[m - 1]) * Rational(ks[m - 1]);
                }
            }
            rhs = Rational(lower.back()) / denom;
            for (std::size_t m = 0; m + 1 < lower.size(); ++m) {
                const BigInt& k = ks[t - 2 - m];
                if (lower[m] * k * k < lower[m + 1])
                    return false;
            }
        }
        if (lower != cert.lower_chain || upper != cert.upper_chain || rhs != cert.rhs)
            return false;
        // Subsets can only shrink sumsets.
        for (std::size_t m = 0; m + 1 < upper.size(); ++m)
            if (upper[m] > upper[m + 1])
                return false;
        if (cert.left_index != left || cert.right_index != right || cert.g_left != g_closed(left)
            || cert.g_right != g_closed(right))
            return false;
        const BigInt lhs = sz(fold(aa, ipow(ell, cert.g_left) + ipow(ell, cert.g_right)));
        if (lhs != cert.lhs || lhs < upper.back() || Rational(lhs) < rhs)
            return false;
        return cert.growth_factor == rhs / Rational(sz(to_set(cert.levels[0][right - 1])));
    } catch (const std::exception&) {
        return false;
    }
}

} // namespace sumsetlab

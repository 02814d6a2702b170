#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "sumsetlab/error.hpp"
#include "sumsetlab/intersection.hpp"
#include "sumsetlab/setcalc.hpp"
#include "sumsetlab/structure.hpp"
#include "sumsetlab/tarry_escott.hpp"

namespace sumsetlab {

/// k for a given h, exp(sqrt(ln(h/2) / 100)). Display only.
inline double k_from_h(double h)
{
    if (h <= 2)
        return 1.0;
    return std::exp(std::sqrt(std::log(h / 2) / 100));
}

/// The upper end of the exponent range {2, ..., log 8k^5}, natural log.
inline double exponent_range_top(unsigned k)
{
    return std::log(8.0 * std::pow(static_cast<double>(k), 5));
}

struct PropositionParams {
    unsigned k = 2;
    long ell = 2;
    Rational window_exponent{1, 5}; // s = max(2, floor(n^window_exponent))
    Rational gamma{1, 2};
    Rational gamma_floor{1, 1 << 20};
    bool dyadic_shortcut = true;
    std::size_t max_candidates = 8;   // theta != 1 candidates tried per window
    std::size_t beta_candidates = 16; // beta values tried per candidate
    SpreadParams spread{};
    std::size_t cap = default_cap;
    std::size_t certify_limit = 10'000;
    // Replaces the kept projections of stage 4; each set must lie in A.
    std::optional<std::vector<NumberSet>> engineered_sets;
};

enum class PropositionBranch { DyadicGrowth, DeltaGrowth, Subset };

inline const char* to_string(PropositionBranch b)
{
    switch (b) {
    case PropositionBranch::DyadicGrowth: return "dyadic-growth";
    case PropositionBranch::DeltaGrowth: return "delta-growth";
    case PropositionBranch::Subset: return "subset";
    }
    return "?";
}

struct DyadicWitness {
    std::size_t s = 0;
    std::size_t max_occupancy = 0;
    SparseSelection selection;
    BigInt count; // C(|B|, k) distinct k-sums of B
};

/// One summand sign * c * y * theta^power of the expansion; c*y*theta^power / alpha is in A.
struct ExpansionTerm {
    int sign = 1;
    Rational c;
    Rational y;
    std::size_t power = 0;
};

struct GrowthWitness {
    Rational beta;
    ProgressionWitness witness;
    Rational gamma;
    NumberSet window; // B
    std::vector<SignedPolynomial> polys;
    std::vector<std::size_t> support; // S
    std::vector<NumberSet> kept_sets; // Y_i for i in S
    // beta = sum(plus[i]) - sum(minus[i]) inside the i-th kept set
    std::vector<SignedRepresentation> beta_reps;
    NumberSet a_prime;
    std::size_t spacing = 0;
    NumberSet c;
    DecreasingPartition partition;
    DeltaSystem deltas;
    std::vector<int> delta_signs; // delta_i = delta_signs[i] * f_i(theta)
    DeltaCheck delta_check;
    BigInt count;       // |delta_sum_set|
    BigInt count_floor; // floor(|C|/k)^(k-1)
    long ell1 = 0;
    long ell2 = 0;
    std::size_t certified = 0; // sums re-expanded and checked
};

struct SubsetWitness {
    std::vector<NumberSet> sets; // padded to 2^t
    IntersectionCertificate certificate;
    NumberSet subset;            // A'
    unsigned exponent = 0;       // j in |(l^(j-1) + l^j) A| >= ... |l^j A'|
};

struct PropositionResult {
    PropositionBranch branch = PropositionBranch::DeltaGrowth;
    std::size_t n = 0;
    std::size_t product_size = 0; // |A.A|
    double epsilon = 0;           // log|A.A| / log|A| - 1, reported only
    std::optional<DyadicWitness> dyadic;
    std::optional<GrowthWitness> growth;
    std::optional<SubsetWitness> subset;
    std::vector<std::string> log;
};

namespace prop_detail {

[[noreturn]] inline void stage_failed(const std::string& stage, const std::string& reason,
                                      const std::vector<std::string>& log)
{
    std::string msg = "stage " + stage + ": " + reason;
    for (const auto& line : log)
        msg += "\n  " + line;
    fail(Errc::StageFailed, msg);
}

inline BigInt binomial(std::size_t n, std::size_t k)
{
    BigInt out;
    mpz_bin_uiui(out.get_mpz_t(), n, k);
    return out;
}

/// s consecutive same-sign elements (by |a|) with the smallest ratio of extremes.
inline std::vector<Rational> ratio_minimal_window(const NumberSet& a, std::size_t s)
{
    std::vector<Rational> pos, neg;
    for (const auto& x : a)
        (x.sign() > 0 ? pos : neg).push_back(x);
    std::reverse(neg.begin(), neg.end()); // increasing |x|
    std::optional<Rational> best_ratio;
    std::vector<Rational> best;
    for (const auto* side : {&pos, &neg}) {
        for (std::size_t i = 0; i + s <= side->size(); ++i) {
            const Rational ratio = (*side)[i + s - 1] / (*side)[i];
            if (!best_ratio || ratio < *best_ratio) {
                best_ratio = ratio;
                best.assign(side->begin() + static_cast<long>(i), side->begin() + static_cast<long>(i + s));
            }
        }
    }
    return best;
}

/// Largest run of the window inside [y, y + gamma x), x = |first|, y ranging
/// over the window; the whole window when that run has fewer than two elements.
inline NumberSet gamma_cluster(const std::vector<Rational>& window, const Rational& gamma)
{
    const Rational width = gamma * window.front().abs();
    std::size_t best_lo = 0, best_len = 0;
    for (std::size_t lo = 0; lo < window.size(); ++lo) {
        std::size_t hi = lo;
        while (hi < window.size() && window[hi].abs() < window[lo].abs() + width)
            ++hi;
        if (hi - lo > best_len) {
            best_len = hi - lo;
            best_lo = lo;
        }
    }
    if (best_len < 2)
        return NumberSet(window);
    return NumberSet(std::vector<Rational>(window.begin() + static_cast<long>(best_lo),
                                           window.begin() + static_cast<long>(best_lo + best_len)));
}

/// Shortest h <= max_h with target in hY - hY, and a representation.
inline std::optional<SignedRepresentation> shortest_representation(const NumberSet& y, long max_h,
                                                                   const Rational& target, std::size_t cap)
{
    for (long h = 1; h <= max_h; ++h)
        if (auto rep = difference_representation(y, h, target, cap))
            return rep;
    return std::nullopt;
}

struct DeltaAttempt {
    GrowthWitness w;
    bool ok = false;
    std::string why;
};

} // namespace prop_detail

/// Expands one sum beta * sum_j c_j delta_j by powers of theta, distributing
/// beta through its representation in each kept set.
inline std::vector<ExpansionTerm> expand_sum(const GrowthWitness& w, const std::vector<Rational>& cs)
{
    std::vector<ExpansionTerm> out;
    for (std::size_t s = 0; s < w.support.size(); ++s) {
        const std::size_t power = w.support[s];
        for (std::size_t j = 0; j < cs.size(); ++j) {
            const BigInt coef = w.polys[j].coefficient(power);
            if (coef == 0)
                continue;
            const int eps = w.delta_signs[j] * (coef > 0 ? 1 : -1);
            for (const auto& y : w.beta_reps[s].plus)
                out.push_back({eps, cs[j], y, power});
            for (const auto& y : w.beta_reps[s].minus)
                out.push_back({-eps, cs[j], y, power});
        }
    }
    return out;
}

/// Re-expands every sum (up to limit) and checks each term lies in +-alpha A
/// and that the terms add up to the sum. Returns the number checked, or
/// nullopt on the first failure.
inline std::optional<std::size_t> certify_growth(const GrowthWitness& w, const NumberSet& a, std::size_t limit)
{
    const std::size_t k = w.partition.blocks.size();
    std::vector<std::size_t> idx(k, 0);
    for (const auto& b : w.partition.blocks)
        if (b.empty())
            return std::nullopt;
    std::size_t checked = 0;
    std::set<Rational> seen;
    while (checked < limit) {
        std::vector<Rational> cs(k);
        Rational sigma = 0;
        for (std::size_t j = 0; j < k; ++j) {
            cs[j] = w.partition.blocks[j][idx[j]];
            sigma += cs[j] * w.deltas.deltas[j];
        }
        sigma *= w.beta;
        Rational total = 0;
        long plus = 0, minus = 0;
        for (const auto& term : expand_sum(w, cs)) {
            Rational value = term.c * term.y;
            for (std::size_t p = 0; p < term.power; ++p)
                value *= w.witness.theta;
            if (!a.contains(value / w.witness.alpha))
                return std::nullopt;
            total += term.sign > 0 ? value : -value;
            (term.sign > 0 ? plus : minus) += 1;
        }
        if (total != sigma || plus != w.ell1 || minus != w.ell2 || !seen.insert(sigma).second)
            return std::nullopt;
        ++checked;
        std::size_t pos = k;
        while (pos > 0 && ++idx[pos - 1] == w.partition.blocks[pos - 1].size()) {
            idx[pos - 1] = 0;
            --pos;
        }
        if (pos == 0)
            break;
    }
    return checked;
}

namespace prop_detail {

/// Stages 5b-7 for one beta: A', C, blocks, deltas, hypothesis and count.
inline DeltaAttempt try_beta(const NumberSet& a, const SpreadSets& spread, const std::vector<std::size_t>& support,
                             const std::vector<NumberSet>& kept, const std::vector<long>& folds,
                             const std::vector<SignedPolynomial>& polys, const Rational& beta,
                             const PropositionParams& p, std::size_t spacing)
{
    DeltaAttempt out;
    auto& w = out.w;
    w.beta = beta;
    w.witness = spread.witness;
    w.polys = polys;
    w.support = support;
    w.kept_sets = kept;
    w.spacing = spacing;
    std::vector<NumberSet> chosen(spread.projections.size());
    for (std::size_t s = 0; s < support.size(); ++s) {
        auto rep = shortest_representation(kept[s], folds[s], beta, p.cap);
        if (!rep) {
            out.why = "no representation of beta in kept set " + std::to_string(s);
            return out;
        }
        std::vector<Rational> used = rep->plus;
        used.insert(used.end(), rep->minus.begin(), rep->minus.end());
        chosen[support[s]] = set_union(chosen[support[s]], NumberSet(std::move(used)));
        w.beta_reps.push_back(std::move(*rep));
    }
    if (p.engineered_sets) {
        // No tuples behind engineered sets: take every multiplier that works.
        std::vector<Rational> keep;
        for (const auto& x : a) {
            bool ok = true;
            for (std::size_t i = 0; i < chosen.size() && ok; ++i) {
                Rational scale = x / w.witness.alpha;
                for (std::size_t q = 0; q < i; ++q)
                    scale *= w.witness.theta;
                for (const auto& y : chosen[i])
                    ok = ok && a.contains(scale * y);
            }
            if (ok)
                keep.push_back(x);
        }
        w.a_prime = NumberSet(std::move(keep));
    } else {
        w.a_prime = shared_multipliers(a, spread, chosen).multipliers;
    }
    const std::size_t k = p.k;
    std::vector<Rational> picked;
    for (std::size_t j = spacing; j <= w.a_prime.size(); j += spacing)
        picked.push_back(w.a_prime[j - 1]);
    w.c = NumberSet(std::move(picked));
    if (w.c.size() < k) {
        out.why = "|C| = " + std::to_string(w.c.size()) + " < k from |A'| = " + std::to_string(w.a_prime.size());
        return out;
    }
    try {
        w.partition = DecreasingPartition::balanced(w.c, k);
    } catch (const Error& e) {
        out.why = e.what();
        return out;
    }
    for (std::size_t i = 0; i < k; ++i) {
        const Rational v = eval_poly(polys[i], w.witness.theta);
        w.delta_signs.push_back(v.sign() < 0 ? -1 : 1);
        w.deltas.deltas.push_back(v.abs());
    }
    w.delta_check = check_delta_hypothesis(w.c, w.deltas, k);
    if (!w.delta_check.holds) {
        out.why = w.deltas.is_valid() ? "delta hypothesis fails, gap " + w.delta_check.min_gap->str() + " <= "
                                            + w.delta_check.requirement->str()
                                      : "deltas are not strictly decreasing";
        return out;
    }
    w.count = BigInt(delta_sum_set(w.partition, w.deltas, beta, p.cap).size());
    BigInt prod = 1;
    for (const auto& b : w.partition.blocks)
        prod *= BigInt(b.size());
    BigInt floor_block(w.c.size() / k);
    mpz_pow_ui(w.count_floor.get_mpz_t(), floor_block.get_mpz_t(), k - 1);
    if (w.count != prod || w.count < w.count_floor)
        throw std::logic_error("delta sums collide although the hypothesis holds");
    long terms = 0;
    for (std::size_t s = 0; s < support.size(); ++s)
        for (std::size_t j = 0; j < k; ++j)
            if (polys[j].coefficient(support[s]) != 0)
                terms += static_cast<long>(w.beta_reps[s].plus.size());
    w.ell1 = w.ell2 = terms;
    out.ok = true;
    return out;
}

} // namespace prop_detail

/// Runs the construction: dyadic check, window, polynomials, spread sets,
/// intersection test, then either the subset branch (certificate) or the
/// delta-sum growth branch with every sum re-expanded into +-alpha A terms.
inline PropositionResult proposition_run(const NumberSet& a, const PropositionParams& p)
{
    using prop_detail::stage_failed;
    PropositionResult out;
    auto& log = out.log;
    out.n = a.size();
    if (a.contains(Rational(0)))
        stage_failed("input", "0 is in A", log);
    if (a.size() < 2)
        stage_failed("input", "A needs at least two elements", log);
    if (p.k < 2 || p.ell < 2)
        stage_failed("input", "need k >= 2 and l >= 2", log);
    out.product_size = product_set(a, a, p.cap).size();
    out.epsilon = std::log(static_cast<double>(out.product_size)) / std::log(static_cast<double>(a.size())) - 1;

    // 1. dyadic occupancy
    const BigInt root = floor_rational_power(BigInt(static_cast<unsigned long>(a.size())),
                                             p.window_exponent.numerator().get_ui(),
                                             p.window_exponent.denominator().get_ui());
    const std::size_t s = std::max<std::size_t>(2, root.get_ui());
    const auto profile = dyadic_profile(a);
    log.push_back("window s = " + std::to_string(s) + ", max dyadic occupancy " + std::to_string(profile.max_occupancy));
    if (p.dyadic_shortcut && profile.max_occupancy <= s && sparse_half_size(a) >= 2 * s) {
        DyadicWitness d{s, profile.max_occupancy, sparse_subselect(a, s), 0};
        if (d.selection.selected.size() >= p.k) {
            const auto check = verify_distinct_ksums(d.selection.selected, p.k, p.cap);
            if (!check.distinct)
                throw std::logic_error("dyadic selection has colliding k-sums");
            d.count = prop_detail::binomial(d.selection.selected.size(), p.k);
            out.branch = PropositionBranch::DyadicGrowth;
            out.dyadic = std::move(d);
            return out;
        }
        log.push_back("dyadic selection has fewer than k elements, continuing");
    }

    // 3. polynomials and support
    std::vector<SignedPolynomial> polys;
    std::set<std::size_t> support_set;
    std::size_t big_n = 0;
    for (unsigned i = 0; i < p.k; ++i) {
        try {
            polys.push_back(construct_vanishing_poly(static_cast<int>(i)));
        } catch (const Error& e) {
            stage_failed("polynomials", e.what(), log);
        }
        big_n = std::max<std::size_t>(big_n, polys.back().degree());
        for (const auto& [e, c] : polys.back().terms())
            support_set.insert(e);
    }
    const std::vector<std::size_t> support(support_set.begin(), support_set.end());
    const std::size_t m_sets = support.size();
    unsigned t = 0;
    while ((std::size_t{1} << t) < m_sets)
        ++t;
    t = std::max(1u, t);
    log.push_back("N = " + std::to_string(big_n) + ", M = " + std::to_string(m_sets) + ", t = " + std::to_string(t));
    const auto fg = fg_table(t);
    std::vector<long> folds;
    for (std::size_t i = 1; i <= m_sets; ++i)
        folds.push_back(intersection_fold(fg, p.ell, t, i));
    const BigInt spacing_root = floor_rational_power(BigInt(static_cast<unsigned long>(a.size())), 1, 4);
    const std::size_t spacing = std::max<std::size_t>(1, spacing_root.get_ui());

    // 2. window, with adaptive gamma
    const auto window = prop_detail::ratio_minimal_window(a, s);
    if (window.size() < 2)
        stage_failed("window", "no " + std::to_string(s) + " same-sign elements", log);
    std::vector<NumberSet> tried;
    std::optional<prop_detail::DeltaAttempt> best;
    for (Rational gamma = p.gamma; gamma >= p.gamma_floor && !best; gamma = gamma / Rational(2)) {
        const NumberSet b = prop_detail::gamma_cluster(window, gamma);
        if (std::find(tried.begin(), tried.end(), b) != tried.end())
            continue;
        tried.push_back(b);
        log.push_back("gamma " + gamma.str() + ": |B| = " + std::to_string(b.size()));

        // 4. spread sets over the ranked theta != 1 candidates
        const auto ranking = progression_ranking(a, b, big_n);
        std::size_t used = 0;
        for (const auto& cand : ranking.candidates) {
            if (cand.theta == Rational(1))
                continue;
            if (used++ == p.max_candidates)
                break;
            const auto w = make_witness(a, b, big_n, cand);
            SpreadSets spread;
            std::vector<NumberSet> kept;
            if (p.engineered_sets) {
                spread.witness = w;
                kept = *p.engineered_sets;
                if (kept.size() != m_sets)
                    stage_failed("spread", "need " + std::to_string(m_sets) + " engineered sets", log);
                spread.projections.assign(big_n + 1, NumberSet{});
                for (std::size_t i = 0; i < m_sets; ++i)
                    spread.projections[support[i]] = kept[i];
            } else {
                try {
                    spread = find_spread_sets(a, w, p.spread);
                } catch (const Error& e) {
                    log.push_back("theta " + w.theta.str() + ", alpha " + w.alpha.str() + ": " + e.what());
                    continue;
                }
                for (auto i : support)
                    kept.push_back(spread.projections[i]);
            }
            if (std::any_of(kept.begin(), kept.end(), [](const NumberSet& y) { return y.empty(); })) {
                log.push_back("theta " + w.theta.str() + ": empty projection");
                continue;
            }

            // 5. intersection test on the kept sets padded to 2^t
            std::vector<NumberSet> padded = kept;
            while (padded.size() < (std::size_t{1} << t))
                padded.push_back(kept.back());
            TrivialIntersection ti;
            try {
                ti = check_trivial_intersection(padded, p.ell, t, p.cap, p.beta_candidates);
            } catch (const Error& e) {
                stage_failed("intersection", e.what(), log);
            }
            if (ti.trivial) {
                SubsetWitness sw;
                sw.sets = padded;
                try {
                    sw.certificate = intersection_algorithm(a, padded, p.ell, t, p.cap);
                } catch (const Error& e) {
                    stage_failed("intersection", e.what(), log);
                }
                sw.subset = padded[sw.certificate.right_index - 1];
                sw.exponent = sw.certificate.g_right;
                out.branch = PropositionBranch::Subset;
                out.subset = std::move(sw);
                return out;
            }
            for (const auto& beta : ti.betas) {
                auto attempt = prop_detail::try_beta(a, spread, support, kept, folds, polys, beta, p, spacing);
                if (!attempt.ok) {
                    log.push_back("theta " + w.theta.str() + ", beta " + beta.str() + ": " + attempt.why);
                    continue;
                }
                attempt.w.gamma = gamma;
                attempt.w.window = b;
                if (!best || attempt.w.count > best->w.count)
                    best = std::move(attempt);
            }
            if (best)
                break;
        }
    }
    if (!best)
        stage_failed("delta", "no candidate satisfied the delta hypothesis above the gamma floor", log);

    // 7. certify every sum by re-expansion
    auto& w = best->w;
    const auto certified = certify_growth(w, a, p.certify_limit);
    if (!certified)
        stage_failed("certify", "an expanded summand is not in +-alpha A", log);
    w.certified = *certified;
    out.branch = PropositionBranch::DeltaGrowth;
    out.growth = std::move(w);
    return out;
}

} // namespace sumsetlab

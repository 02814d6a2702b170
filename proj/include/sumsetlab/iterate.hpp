#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "sumsetlab/proposition.hpp"

namespace sumsetlab {

struct IterateParams {
    PropositionParams prop; // prop.ell is the starting l
    // engineered[j] replaces the kept projections at step j, when present
    std::vector<std::vector<NumberSet>> engineered;
};

enum class IterateOutcome { Growth, Completed };

inline const char* to_string(IterateOutcome o)
{
    return o == IterateOutcome::Growth ? "growth" : "completed";
}

struct IterateStep {
    unsigned step = 0;
    long ell = 0;                  // l_j = l - j
    std::uint64_t seed = 0;
    std::size_t size = 0;          // |A_j|
    std::size_t product_size = 0;  // |A_j . A_j|
    double epsilon = 0;            // measured; the bookkeeping value is (2c)^j eps_0
    unsigned doublings = 0;        // j
    bool ell_ok = true;            // l_j^2 + l_j <= l_(j-1)^2
    PropositionResult result;
    // subset branch only
    std::optional<unsigned> t_j;
    bool t_in_range = false;       // 2 <= t_j <= ln(8k^5)
    Rational factor;               // certified growth factor of the step
};

struct Telescoping {
    unsigned s = 0;                 // most frequent t_j
    std::vector<unsigned> steps;    // j_1..j_q
    Rational recorded_product;      // product of recorded factors
    Rational recomputed_product;    // product rebuilt from K values and level sizes
    bool matches = false;
};

struct IterateTranscript {
    long ell = 0;
    unsigned k = 0;
    double range_top = 0;           // ln(8k^5)
    IterateOutcome outcome = IterateOutcome::Growth;
    std::vector<IterateStep> steps;
    std::optional<Telescoping> telescoping;
};

/// Growth factor of a certificate rebuilt from its K values and level sizes.
inline Rational recompute_factor(const IntersectionCertificate& c)
{
    if (c.outcome == IntersectionOutcome::DisjointHalt) {
        Rational f(BigInt(c.steps[c.halt_step].k));
        for (unsigned m = 0; m < c.halt_step; ++m)
            f = f / Rational(BigInt(c.steps[m].k));
        return f;
    }
    Rational f(BigInt(static_cast<unsigned long>(c.levels[0][0].size())));
    for (unsigned m = 0; m + 2 <= c.t; ++m) {
        const Rational km(BigInt(c.steps[m].k));
        f = f / (km * km);
    }
    return f;
}

/// Repeats proposition_run, passing to A' with l decreased by one after every
/// subset outcome, for steps j = 0..l/2 while l_j >= 2. Throws
/// StepBudgetExhausted when a step at index >= max_steps would be needed.
inline IterateTranscript iterate_main(const NumberSet& a, const IterateParams& params, unsigned max_steps)
{
    IterateTranscript tr;
    tr.ell = params.prop.ell;
    tr.k = params.prop.k;
    tr.range_top = exponent_range_top(params.prop.k);
    NumberSet current = a;
    for (unsigned j = 0; j <= static_cast<unsigned long>(tr.ell / 2) && tr.ell - static_cast<long>(j) >= 2; ++j) {
        if (j >= max_steps)
            fail(Errc::StepBudgetExhausted, "step budget of " + std::to_string(max_steps) + " exhausted at step "
                                                + std::to_string(j));
        IterateStep st;
        st.step = j;
        st.ell = tr.ell - static_cast<long>(j);
        st.doublings = j;
        if (j > 0) {
            const long prev = st.ell + 1;
            st.ell_ok = st.ell * st.ell + st.ell <= prev * prev;
        }
        PropositionParams p = params.prop;
        p.ell = st.ell;
        p.spread.seed = params.prop.spread.seed + j;
        st.seed = p.spread.seed;
        p.engineered_sets.reset();
        if (j < params.engineered.size())
            p.engineered_sets = params.engineered[j];
        st.result = proposition_run(current, p);
        st.size = st.result.n;
        st.product_size = st.result.product_size;
        st.epsilon = st.result.epsilon;
        if (st.result.branch != PropositionBranch::Subset) {
            tr.steps.push_back(std::move(st));
            tr.outcome = IterateOutcome::Growth;
            return tr;
        }
        const auto& sw = *st.result.subset;
        st.t_j = sw.exponent;
        st.t_in_range = sw.exponent >= 2 && static_cast<double>(sw.exponent) <= tr.range_top;
        st.factor = sw.certificate.growth_factor;
        current = sw.subset;
        tr.steps.push_back(std::move(st));
    }
    tr.outcome = IterateOutcome::Completed;
    if (!tr.steps.empty()) {
        std::map<unsigned, std::vector<unsigned>> by_t;
        for (const auto& st : tr.steps)
            by_t[*st.t_j].push_back(st.step);
        auto best = by_t.begin();
        for (auto it = by_t.begin(); it != by_t.end(); ++it)
            if (it->second.size() > best->second.size())
                best = it;
        Telescoping tel;
        tel.s = best->first;
        tel.steps = best->second;
        tel.recorded_product = 1;
        tel.recomputed_product = 1;
        for (unsigned j : tel.steps) {
            tel.recorded_product *= tr.steps[j].factor;
            tel.recomputed_product *= recompute_factor(tr.steps[j].result.subset->certificate);
        }
        tel.matches = tel.recorded_product == tel.recomputed_product;
        tr.telescoping = std::move(tel);
    }
    return tr;
}

} // namespace sumsetlab

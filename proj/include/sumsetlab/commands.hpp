#pragma once

// Transcript builders shared by the command-line tool and the tests. Each one
// runs a module operation and wraps inputs and result in the versioned
// envelope {schema, command, seed, cap, inputs, result}.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "sumsetlab/lemma_check.hpp"
#include "sumsetlab/tarry_escott.hpp"
#include "sumsetlab/transcript.hpp"

namespace sumsetlab {

struct RunContext {
    std::uint64_t seed = 1;
    std::size_t cap = default_cap;
};

inline Json envelope(const std::string& command, const RunContext& ctx, Json inputs, Json result)
{
    return Json{{"schema", schema_version},
                {"command", command},
                {"seed", ctx.seed},
                {"cap", ctx.cap},
                {"inputs", std::move(inputs)},
                {"result", std::move(result)}};
}

/// op: sum, diff, prod, quot, hfold, energy. b is ignored by hfold.
inline Json transcript_calc(const std::string& op, const NumberSet& a, const NumberSet& b, long h,
                            const RunContext& ctx, bool elements = false)
{
    Json in{{"op", op}, {"a", to_json(a)}};
    if (op == "hfold")
        in["h"] = h;
    else
        in["b"] = to_json(b);
    if (op == "energy")
        return envelope("calc", ctx, std::move(in), Json{{"energy", to_json(additive_energy(a, b).value)}});
    NumberSet s;
    if (op == "sum")
        s = sumset(a, b, ctx.cap);
    else if (op == "diff")
        s = difference_set(a, b, ctx.cap);
    else if (op == "prod")
        s = product_set(a, b, ctx.cap);
    else if (op == "quot")
        s = quotient_set(a, b, ctx.cap);
    else if (op == "hfold")
        s = hfold_sum(a, h, ctx.cap);
    else
        fail(Errc::InvalidArgument, "unknown calc operation '" + op + "'");
    Json res{{"size", s.size()}};
    if (elements)
        res["elements"] = to_json(s);
    return envelope("calc", ctx, std::move(in), std::move(res));
}

inline Json transcript_vanish(int k, const RunContext& ctx)
{
    const auto p = construct_vanishing_poly(k);
    return envelope("vanish", ctx, Json{{"k", k}},
                    Json{{"text", p.str()}, {"poly", to_json(p)}, {"terms", p.term_count()},
                         {"order", vanishing_order(p)}});
}

inline Json transcript_cover(const NumberSet& x, const NumberSet& y, const Rational& k, const RunContext& ctx)
{
    const auto out = covering_split(x, y, k);
    Json res = to_json(out);
    res["verified"] = verify_cover(out, x, y, k);
    return envelope("cover", ctx, Json{{"x", to_json(x)}, {"y", to_json(y)}, {"K", to_json(k)}}, std::move(res));
}

inline Json transcript_drc(const BipartiteGraph& g, const DrcParams& p, std::size_t retries, const RunContext& ctx)
{
    const auto sel = drc_select(g, p, ctx.seed, retries);
    Json res = to_json(sel);
    res["verified"] = verify_drc(g, sel.selected, p.r, p.m);
    return envelope("drc", ctx,
                    Json{{"graph", to_json(g)}, {"t", p.t}, {"r", p.r}, {"m", p.m}, {"a", p.a}, {"retries", retries}},
                    std::move(res));
}

inline Json transcript_intersect(const NumberSet& a, const std::vector<NumberSet>& sets, long ell, unsigned t,
                                 const RunContext& ctx)
{
    const auto cert = intersection_algorithm(a, sets, ell, t, ctx.cap);
    return envelope("intersect", ctx,
                    Json{{"a", to_json(a)}, {"sets", to_json(sets)}, {"ell", ell}, {"t", t}}, to_json(cert));
}

inline Json transcript_grow(const FamilySpec& f, const std::vector<std::size_t>& n_list,
                            const std::vector<long>& h_list, unsigned jobs, const RunContext& ctx)
{
    const auto report = growth_experiment(f, n_list, h_list, ctx.cap, jobs);
    // jobs changes scheduling only, so it stays out of the transcript
    return envelope("grow", ctx, Json{{"family", f.str()}, {"n", n_list}, {"h", h_list}}, to_json(report));
}

struct PipelineRequest {
    NumberSet a;
    unsigned k = 2;
    long ell = 2;
    bool dyadic_shortcut = true;
    bool iterate = false;
    unsigned max_steps = 8;
    std::optional<std::vector<NumberSet>> engineered; // step 0 only
};

inline Json transcript_pipeline(const PipelineRequest& req, const RunContext& ctx)
{
    PropositionParams p;
    p.k = req.k;
    p.ell = req.ell;
    p.dyadic_shortcut = req.dyadic_shortcut;
    p.cap = ctx.cap;
    p.spread.seed = ctx.seed;
    Json in{{"a", to_json(req.a)},
            {"k", req.k},
            {"ell", req.ell},
            {"dyadic_shortcut", req.dyadic_shortcut},
            {"iterate", req.iterate},
            {"max_steps", req.max_steps},
            {"engineered", req.engineered ? to_json(*req.engineered) : Json(nullptr)}};
    if (!req.iterate) {
        p.engineered_sets = req.engineered;
        return envelope("pipeline", ctx, std::move(in), to_json(proposition_run(req.a, p)));
    }
    IterateParams ip{p, {}};
    if (req.engineered)
        ip.engineered.push_back(*req.engineered);
    return envelope("pipeline", ctx, std::move(in), to_json(iterate_main(req.a, ip, req.max_steps)));
}

inline Json transcript_lemma_check(const std::string& suite, const RunContext& ctx)
{
    Json suites = Json::array();
    std::size_t failures = 0;
    for (const auto& r : run_suites(suite, ctx.seed)) {
        failures += r.failures;
        suites.push_back(Json{{"name", r.name}, {"cases", r.cases}, {"failures", r.failures}, {"messages", r.messages}});
    }
    return envelope("lemma-check", ctx, Json{{"suite", suite}},
                    Json{{"suites", suites}, {"failures", failures}, {"passed", failures == 0}});
}

/// Process exit code for a library error.
inline int exit_code(Errc c)
{
    switch (c) {
    case Errc::ParseError: return 2;
    case Errc::CapExceeded: return 3;
    case Errc::UnsupportedDegree: return 4;
    case Errc::BudgetExceeded: return 5;
    case Errc::RetriesExhausted: return 6;
    case Errc::Infeasible:
    case Errc::HypothesisViolated: return 7;
    case Errc::StageFailed: return 8;
    case Errc::StepBudgetExhausted: return 9;
    default: return 10;
    }
}

} // namespace sumsetlab

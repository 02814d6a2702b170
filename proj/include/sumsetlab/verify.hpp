#pragma once

// Replays a transcript: every certificate it carries is checked again with the
// library verifiers against the inputs recorded next to it.

#include <string>
#include <vector>

#include "sumsetlab/lemma_check.hpp"
#include "sumsetlab/transcript.hpp"

namespace sumsetlab {

struct VerifyReport {
    bool ok = true;
    std::vector<std::string> checks; // one line per check, "ok: ..." or "FAIL: ..."

    void note(bool pass, const std::string& what)
    {
        ok = ok && pass;
        checks.push_back((pass ? "ok: " : "FAIL: ") + what);
    }
};

namespace replay_detail {

using json_detail::at;

inline void proposition_step(VerifyReport& rep, const Json& r, const NumberSet& a, unsigned k, long ell,
                             const std::string& where)
{
    const auto branch = at(r, "branch").get<std::string>();
    rep.note(at(r, "n").get<std::size_t>() == a.size(), where + " |A| matches");
    if (branch == "dyadic-growth") {
        const auto& d = at(r, "dyadic");
        const auto sel = set_from_json(at(d, "selected"));
        const auto check = verify_distinct_ksums(sel, k);
        NumberSet signed_a = at(d, "negated").get<bool>() ? negate(a) : a;
        BigInt count;
        mpz_bin_uiui(count.get_mpz_t(), sel.size(), k);
        rep.note(is_subset(sel, signed_a) && check.distinct && bigint_from_json(at(d, "count")) == count,
                 where + " dyadic selection has C(|B|, k) distinct k-sums");
    } else if (branch == "delta-growth") {
        auto w = growth_from_json(at(r, "growth"));
        bool deltas_ok = w.deltas.deltas.size() == k && w.polys.size() == k && w.delta_signs.size() == k;
        for (std::size_t i = 0; deltas_ok && i < k; ++i)
            deltas_ok = w.deltas.deltas[i] == Rational(w.delta_signs[i]) * eval_poly(w.polys[i], w.witness.theta)
                        && vanishing_order(w.polys[i]) == i;
        rep.note(deltas_ok, where + " deltas are |f_i(theta)| for polynomials of order i");
        rep.note(w.partition.validate() && w.partition.ground_set() == w.c && is_subset(w.c, w.a_prime)
                     && is_subset(w.a_prime, a),
                 where + " C is a decreasing partition inside A' inside A");
        rep.note(check_delta_hypothesis(w.c, w.deltas, k).holds, where + " delta hypothesis holds");
        const auto sums = delta_sum_set(w.partition, w.deltas, w.beta);
        BigInt floor_block(w.c.size() / k);
        BigInt floor_pow;
        mpz_pow_ui(floor_pow.get_mpz_t(), floor_block.get_mpz_t(), k - 1);
        rep.note(BigInt(static_cast<unsigned long>(sums.size())) == w.count && w.count >= floor_pow,
                 where + " count = |delta sums| >= floor(|C|/k)^(k-1)");
        bool reps_ok = w.beta_reps.size() == w.kept_sets.size();
        for (std::size_t i = 0; reps_ok && i < w.beta_reps.size(); ++i) {
            Rational s = 0;
            for (const auto& y : w.beta_reps[i].plus)
                s += y, reps_ok = reps_ok && w.kept_sets[i].contains(y);
            for (const auto& y : w.beta_reps[i].minus)
                s -= y, reps_ok = reps_ok && w.kept_sets[i].contains(y);
            reps_ok = reps_ok && s == w.beta && w.beta_reps[i].plus.size() == w.beta_reps[i].minus.size();
        }
        rep.note(reps_ok, where + " beta representations add up inside the kept sets");
        const auto certified = certify_growth(w, a, w.certified == 0 ? 1 : w.certified);
        rep.note(certified && *certified == w.certified, where + " every re-expanded summand lies in +-alpha A");
    } else if (branch == "subset") {
        const auto& s = at(r, "subset");
        const auto cert = certificate_from_json(at(s, "certificate"));
        const auto sets = sets_from_json(at(s, "sets"));
        rep.note(cert.ell == ell && verify_certificate(cert, a, sets, ell, cert.t),
                 where + " intersection certificate verifies");
        rep.note(set_from_json(at(s, "subset")) == sets.at(cert.right_index - 1), where + " A' is A_s");
    } else {
        rep.note(false, where + " unknown branch '" + branch + "'");
    }
}

} // namespace replay_detail

inline VerifyReport verify_transcript(const Json& doc)
{
    using replay_detail::at;
    VerifyReport rep;
    if (!doc.is_object() || !doc.contains("schema") || doc["schema"] != schema_version) {
        rep.note(false, std::string("schema is ") + schema_version);
        return rep;
    }
    const auto command = at(doc, "command").get<std::string>();
    const auto& in = at(doc, "inputs");
    const auto& res = at(doc, "result");
    const std::size_t cap = at(doc, "cap").get<std::size_t>();
    if (command == "calc") {
        const auto op = at(in, "op").get<std::string>();
        const auto a = set_from_json(at(in, "a"));
        if (op == "energy") {
            const auto b = set_from_json(at(in, "b"));
            rep.note(additive_energy(a, b).value == bigint_from_json(at(res, "energy")), "energy recomputed");
        } else {
            NumberSet s;
            if (op == "hfold")
                s = hfold_sum(a, at(in, "h").get<long>(), cap);
            else {
                const auto b = set_from_json(at(in, "b"));
                s = op == "sum" ? sumset(a, b, cap)
                    : op == "diff" ? difference_set(a, b, cap)
                    : op == "prod" ? product_set(a, b, cap)
                                   : quotient_set(a, b, cap);
            }
            rep.note(s.size() == at(res, "size").get<std::size_t>(), op + " size recomputed");
        }
    } else if (command == "vanish") {
        const auto p = poly_from_json(at(res, "poly"));
        const auto k = at(in, "k").get<unsigned long>();
        bool coeffs = true;
        for (const auto& [e, c] : p.terms())
            coeffs = coeffs && (c == 1 || c == -1);
        rep.note(coeffs && p.is_monic() && vanishing_order(p) == k && p.term_count() == at(res, "terms").get<std::size_t>()
                     && p.term_count() <= std::max<std::size_t>(k * k, 2),
                 "polynomial is monic, {-1,0,1}, order k, within the term bound");
    } else if (command == "cover") {
        const auto x = set_from_json(at(in, "x"));
        const auto y = set_from_json(at(in, "y"));
        const auto k = rational_from_json(at(in, "K"));
        rep.note(verify_cover(cover_from_json(res), x, y, k), "cover outcome satisfies its case invariant");
    } else if (command == "drc") {
        const auto g = bipartite_from_json(at(in, "graph"));
        const auto sel = at(res, "selected").get<std::vector<VertexId>>();
        bool range = true;
        for (auto v : sel)
            range = range && v < g.right_count();
        rep.note(range && verify_drc(g, sel, at(in, "r").get<unsigned>(), at(in, "m").get<unsigned long>()),
                 "every r selected vertices have m common neighbours");
    } else if (command == "intersect") {
        const auto a = set_from_json(at(in, "a"));
        const auto sets = sets_from_json(at(in, "sets"));
        const auto cert = certificate_from_json(res);
        rep.note(verify_certificate(cert, a, sets, at(in, "ell").get<long>(), at(in, "t").get<unsigned>()),
                 "intersection certificate verifies");
    } else if (command == "grow") {
        const auto report = growth_experiment(FamilySpec::parse(at(in, "family").get<std::string>()),
                                              at(in, "n").get<std::vector<std::size_t>>(),
                                              at(in, "h").get<std::vector<long>>(), cap);
        rep.note(to_json(report) == res, "growth rows recomputed");
    } else if (command == "pipeline") {
        const auto a = set_from_json(at(in, "a"));
        const auto k = at(in, "k").get<unsigned>();
        if (res.contains("steps")) {
            NumberSet current = a;
            for (const auto& st : res["steps"]) {
                const std::string where = "step " + std::to_string(at(st, "step").get<unsigned>());
                const auto& r = at(st, "result");
                replay_detail::proposition_step(rep, r, current, k, at(st, "ell").get<long>(), where);
                if (r.contains("subset"))
                    current = set_from_json(r["subset"]["subset"]);
            }
            if (!res["telescoping"].is_null()) {
                const auto& t = res["telescoping"];
                Rational recorded = 1;
                for (auto j : at(t, "steps").get<std::vector<unsigned>>())
                    recorded *= rational_from_json(res["steps"].at(j).at("factor"));
                rep.note(recorded == rational_from_json(at(t, "recorded_product"))
                             && at(t, "recorded_product") == at(t, "recomputed_product"),
                         "telescoping product");
            }
        } else {
            replay_detail::proposition_step(rep, res, a, k, at(in, "ell").get<long>(), "proposition");
        }
    } else if (command == "lemma-check") {
        const auto results = run_suites(at(in, "suite").get<std::string>(), at(doc, "seed").get<std::uint64_t>());
        bool same = results.size() == at(res, "suites").size();
        for (std::size_t i = 0; same && i < results.size(); ++i)
            same = results[i].failures == res["suites"][i]["failures"].get<std::size_t>()
                   && results[i].cases == res["suites"][i]["cases"].get<std::size_t>();
        rep.note(same, "suites rerun with the recorded seed");
    } else {
        rep.note(false, "unknown command '" + command + "'");
    }
    return rep;
}

} // namespace sumsetlab

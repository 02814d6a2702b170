#pragma once

// JSON forms of the certificates and reports, and the replay verifier.
// Exact values (rationals, big integers) are strings; sizes are numbers.

#include <string>
#include <vector>

#include <json.hpp>

#include "sumsetlab/graphkit.hpp"
#include "sumsetlab/growth.hpp"
#include "sumsetlab/intersection.hpp"
#include "sumsetlab/iterate.hpp"
#include "sumsetlab/proposition.hpp"

namespace sumsetlab {

using Json = nlohmann::ordered_json;

inline constexpr const char* schema_version = "sumsetlab/1";

// ---------------------------------------------------------------------------
// Scalars and sets

inline Json to_json(const Rational& x) { return x.str(); }
inline Json to_json(const BigInt& x) { return x.get_str(); }

inline Json to_json(const NumberSet& s)
{
    Json out = Json::array();
    for (const auto& x : s)
        out.push_back(x.str());
    return out;
}

inline Json to_json(const std::vector<NumberSet>& sets)
{
    Json out = Json::array();
    for (const auto& s : sets)
        out.push_back(to_json(s));
    return out;
}

inline Json to_json(const SignedPolynomial& p)
{
    Json out = Json::array();
    for (const auto& [e, c] : p.terms())
        out.push_back(Json::array({e, c.get_str()}));
    return out;
}

template <typename T>
Json opt_json(const std::optional<T>& v)
{
    if (!v)
        return nullptr;
    if constexpr (std::is_arithmetic_v<T> || std::is_same_v<T, std::string>)
        return *v;
    else
        return to_json(*v);
}

namespace json_detail {

inline const Json& at(const Json& j, const char* key)
{
    if (!j.is_object() || !j.contains(key))
        fail(Errc::ParseError, std::string("transcript is missing '") + key + "'");
    return j.at(key);
}

} // namespace json_detail

inline Rational rational_from_json(const Json& j)
{
    if (j.is_number_integer())
        return Rational(j.get<long>());
    if (!j.is_string())
        fail(Errc::ParseError, "expected an exact number string");
    return Rational::parse(j.get<std::string>());
}

inline BigInt bigint_from_json(const Json& j)
{
    const Rational r = rational_from_json(j);
    if (!r.is_integer())
        fail(Errc::ParseError, "expected an integer, got " + r.str());
    return r.numerator();
}

inline NumberSet set_from_json(const Json& j)
{
    if (!j.is_array())
        fail(Errc::ParseError, "expected an array of numbers");
    std::vector<Rational> v;
    for (const auto& x : j)
        v.push_back(rational_from_json(x));
    return NumberSet(std::move(v));
}

inline std::vector<NumberSet> sets_from_json(const Json& j)
{
    if (!j.is_array())
        fail(Errc::ParseError, "expected an array of sets");
    std::vector<NumberSet> out;
    for (const auto& s : j)
        out.push_back(set_from_json(s));
    return out;
}

inline SignedPolynomial poly_from_json(const Json& j)
{
    SignedPolynomial p;
    for (const auto& term : j)
        p.add_term(term.at(0).get<SignedPolynomial::Exponent>(), bigint_from_json(term.at(1)));
    return p;
}

// ---------------------------------------------------------------------------
// graphkit

inline Json to_json(const CoverOutcome& c)
{
    return Json{{"case", to_string(c.case_tag)}, {"subset", to_json(c.subset)}, {"hub", opt_json(c.hub)}};
}

inline CoverOutcome cover_from_json(const Json& j)
{
    using json_detail::at;
    CoverOutcome c;
    const auto tag = at(j, "case").get<std::string>();
    if (tag != "Disjoint" && tag != "Covered")
        fail(Errc::ParseError, "unknown cover case '" + tag + "'");
    c.case_tag = tag == "Disjoint" ? CoverCase::Disjoint : CoverCase::Covered;
    c.subset = set_from_json(at(j, "subset"));
    if (!at(j, "hub").is_null())
        c.hub = rational_from_json(j.at("hub"));
    return c;
}

inline Json to_json(const BipartiteGraph& g)
{
    Json edges = Json::array();
    for (VertexId x = 0; x < g.left_count(); ++x)
        for (VertexId y : g.left_neighbors(x))
            edges.push_back(Json::array({x, y}));
    return Json{{"left", g.left_count()}, {"right", g.right_count()}, {"edges", edges}};
}

inline BipartiteGraph bipartite_from_json(const Json& j)
{
    using json_detail::at;
    std::vector<Edge> edges;
    for (const auto& e : at(j, "edges"))
        edges.emplace_back(e.at(0).get<VertexId>(), e.at(1).get<VertexId>());
    return BipartiteGraph(at(j, "left").get<std::size_t>(), at(j, "right").get<std::size_t>(), edges);
}

inline Json to_json(const DrcSelection& s)
{
    return Json{{"feasible", s.feasibility.feasible},
                {"margin", to_json(s.feasibility.margin)},
                {"selected", s.selected},
                {"sample", s.sample},
                {"attempts", s.attempts}};
}

// ---------------------------------------------------------------------------
// intersection certificates

inline Json to_json(const IntersectionCertificate& c)
{
    Json levels = Json::array();
    for (const auto& level : c.levels)
        levels.push_back(to_json(level));
    Json steps = Json::array();
    for (const auto& st : c.steps) {
        Json pairs = Json::array();
        for (const auto& pr : st.pairs)
            pairs.push_back(Json{{"pair", pr.pair},
                                 {"case", to_string(pr.case_tag)},
                                 {"x_size", pr.x_size},
                                 {"y_size", pr.y_size},
                                 {"subset_size", pr.subset_size}});
        steps.push_back(Json{{"step", st.step}, {"k", to_json(st.k)}, {"pairs", pairs}});
    }
    Json lower = Json::array(), upper = Json::array();
    for (const auto& v : c.lower_chain)
        lower.push_back(to_json(v));
    for (const auto& v : c.upper_chain)
        upper.push_back(to_json(v));
    return Json{{"t", c.t},
                {"ell", c.ell},
                {"n", c.n},
                {"outcome", to_string(c.outcome)},
                {"halt_step", c.halt_step},
                {"halt_pair", c.halt_pair},
                {"left_index", c.left_index},
                {"right_index", c.right_index},
                {"g_left", c.g_left},
                {"g_right", c.g_right},
                {"x_prime", to_json(c.x_prime)},
                {"sumset_size", to_json(c.sumset_size)},
                {"product_size", to_json(c.product_size)},
                {"lower_chain", lower},
                {"upper_chain", upper},
                {"lhs", to_json(c.lhs)},
                {"rhs", to_json(c.rhs)},
                {"growth_factor", to_json(c.growth_factor)},
                {"steps", steps},
                {"levels", levels}};
}

inline IntersectionCertificate certificate_from_json(const Json& j)
{
    using json_detail::at;
    IntersectionCertificate c;
    c.t = at(j, "t").get<unsigned>();
    c.ell = at(j, "ell").get<long>();
    c.n = at(j, "n").get<std::size_t>();
    const auto outcome = at(j, "outcome").get<std::string>();
    c.outcome = outcome == "DisjointHalt" ? IntersectionOutcome::DisjointHalt : IntersectionOutcome::FinalStep;
    c.halt_step = at(j, "halt_step").get<unsigned>();
    c.halt_pair = at(j, "halt_pair").get<std::size_t>();
    c.left_index = at(j, "left_index").get<std::size_t>();
    c.right_index = at(j, "right_index").get<std::size_t>();
    c.g_left = at(j, "g_left").get<unsigned>();
    c.g_right = at(j, "g_right").get<unsigned>();
    c.x_prime = set_from_json(at(j, "x_prime"));
    c.sumset_size = bigint_from_json(at(j, "sumset_size"));
    c.product_size = bigint_from_json(at(j, "product_size"));
    for (const auto& v : at(j, "lower_chain"))
        c.lower_chain.push_back(bigint_from_json(v));
    for (const auto& v : at(j, "upper_chain"))
        c.upper_chain.push_back(bigint_from_json(v));
    c.lhs = bigint_from_json(at(j, "lhs"));
    c.rhs = rational_from_json(at(j, "rhs"));
    c.growth_factor = rational_from_json(at(j, "growth_factor"));
    for (const auto& st : at(j, "steps")) {
        StepRecord rec;
        rec.step = at(st, "step").get<unsigned>();
        rec.k = bigint_from_json(at(st, "k"));
        for (const auto& pr : at(st, "pairs")) {
            PairRecord p;
            p.pair = at(pr, "pair").get<std::size_t>();
            p.case_tag = at(pr, "case").get<std::string>() == "Disjoint" ? CoverCase::Disjoint : CoverCase::Covered;
            p.x_size = at(pr, "x_size").get<std::size_t>();
            p.y_size = at(pr, "y_size").get<std::size_t>();
            p.subset_size = at(pr, "subset_size").get<std::size_t>();
            rec.pairs.push_back(p);
        }
        c.steps.push_back(std::move(rec));
    }
    for (const auto& level : at(j, "levels"))
        c.levels.push_back(sets_from_json(level));
    return c;
}

// ---------------------------------------------------------------------------
// proposition and iteration

inline Json to_json(const ProgressionWitness& w)
{
    return Json{{"alpha", to_json(w.alpha)}, {"theta", to_json(w.theta)}, {"tuple_count", to_json(w.tuple_count)},
                {"n", w.n},                  {"b1", to_json(w.b1)},       {"b2", to_json(w.b2)},
                {"u", to_json(w.u)},         {"v", to_json(w.v)},         {"a1", to_json(w.a1)}};
}

inline ProgressionWitness progression_from_json(const Json& j)
{
    using json_detail::at;
    ProgressionWitness w;
    w.alpha = rational_from_json(at(j, "alpha"));
    w.theta = rational_from_json(at(j, "theta"));
    w.tuple_count = bigint_from_json(at(j, "tuple_count"));
    w.n = at(j, "n").get<std::size_t>();
    w.b1 = rational_from_json(at(j, "b1"));
    w.b2 = rational_from_json(at(j, "b2"));
    w.u = rational_from_json(at(j, "u"));
    w.v = rational_from_json(at(j, "v"));
    w.a1 = rational_from_json(at(j, "a1"));
    return w;
}

inline Json to_json(const DyadicWitness& d)
{
    return Json{{"s", d.s},
                {"max_occupancy", d.max_occupancy},
                {"negated", d.selection.negated},
                {"half_size", d.selection.half_size},
                {"selected", to_json(d.selection.selected)},
                {"count", to_json(d.count)}};
}

inline Json to_json(const GrowthWitness& w)
{
    Json polys = Json::array(), reps = Json::array(), deltas = Json::array();
    for (const auto& p : w.polys)
        polys.push_back(to_json(p));
    for (const auto& d : w.deltas.deltas)
        deltas.push_back(to_json(d));
    // Representations may repeat elements, so keep them as plain lists.
    for (std::size_t i = 0; i < w.beta_reps.size(); ++i) {
        Json plus = Json::array(), minus = Json::array();
        for (const auto& y : w.beta_reps[i].plus)
            plus.push_back(y.str());
        for (const auto& y : w.beta_reps[i].minus)
            minus.push_back(y.str());
        reps.push_back(Json{{"plus", plus}, {"minus", minus}});
    }
    return Json{{"beta", to_json(w.beta)},
                {"witness", to_json(w.witness)},
                {"gamma", to_json(w.gamma)},
                {"window", to_json(w.window)},
                {"polys", polys},
                {"support", w.support},
                {"kept_sets", to_json(w.kept_sets)},
                {"beta_reps", reps},
                {"a_prime", to_json(w.a_prime)},
                {"spacing", w.spacing},
                {"c", to_json(w.c)},
                {"blocks", to_json(w.partition.blocks)},
                {"deltas", deltas},
                {"delta_signs", w.delta_signs},
                {"delta_gap", opt_json(w.delta_check.min_gap)},
                {"delta_requirement", opt_json(w.delta_check.requirement)},
                {"count", to_json(w.count)},
                {"count_floor", to_json(w.count_floor)},
                {"ell1", w.ell1},
                {"ell2", w.ell2},
                {"certified", w.certified}};
}

inline GrowthWitness growth_from_json(const Json& j)
{
    using json_detail::at;
    GrowthWitness w;
    w.beta = rational_from_json(at(j, "beta"));
    w.witness = progression_from_json(at(j, "witness"));
    w.gamma = rational_from_json(at(j, "gamma"));
    w.window = set_from_json(at(j, "window"));
    for (const auto& p : at(j, "polys"))
        w.polys.push_back(poly_from_json(p));
    w.support = at(j, "support").get<std::vector<std::size_t>>();
    w.kept_sets = sets_from_json(at(j, "kept_sets"));
    for (const auto& r : at(j, "beta_reps")) {
        SignedRepresentation rep;
        for (const auto& y : at(r, "plus"))
            rep.plus.push_back(rational_from_json(y));
        for (const auto& y : at(r, "minus"))
            rep.minus.push_back(rational_from_json(y));
        w.beta_reps.push_back(std::move(rep));
    }
    w.a_prime = set_from_json(at(j, "a_prime"));
    w.spacing = at(j, "spacing").get<std::size_t>();
    w.c = set_from_json(at(j, "c"));
    w.partition.blocks = sets_from_json(at(j, "blocks"));
    for (const auto& d : at(j, "deltas"))
        w.deltas.deltas.push_back(rational_from_json(d));
    w.delta_signs = at(j, "delta_signs").get<std::vector<int>>();
    w.count = bigint_from_json(at(j, "count"));
    w.count_floor = bigint_from_json(at(j, "count_floor"));
    w.ell1 = at(j, "ell1").get<long>();
    w.ell2 = at(j, "ell2").get<long>();
    w.certified = at(j, "certified").get<std::size_t>();
    return w;
}

inline Json to_json(const SubsetWitness& s)
{
    return Json{{"exponent", s.exponent},
                {"subset", to_json(s.subset)},
                {"sets", to_json(s.sets)},
                {"certificate", to_json(s.certificate)}};
}

inline Json to_json(const PropositionResult& r)
{
    Json out{{"branch", to_string(r.branch)},
             {"n", r.n},
             {"product_size", r.product_size},
             {"epsilon", r.epsilon}};
    if (r.dyadic)
        out["dyadic"] = to_json(*r.dyadic);
    if (r.growth)
        out["growth"] = to_json(*r.growth);
    if (r.subset)
        out["subset"] = to_json(*r.subset);
    out["log"] = r.log;
    return out;
}

inline Json to_json(const IterateTranscript& tr)
{
    Json steps = Json::array();
    for (const auto& st : tr.steps)
        steps.push_back(Json{{"step", st.step},
                             {"ell", st.ell},
                             {"seed", st.seed},
                             {"size", st.size},
                             {"product_size", st.product_size},
                             {"epsilon", st.epsilon},
                             {"epsilon_doublings", st.doublings},
                             {"ell_ok", st.ell_ok},
                             {"t_j", opt_json(st.t_j)},
                             {"t_in_range", st.t_in_range},
                             {"factor", to_json(st.factor)},
                             {"result", to_json(st.result)}});
    Json out{{"ell", tr.ell},
             {"k", tr.k},
             {"range_top", tr.range_top},
             {"constant_c", "unspecified in source"},
             {"epsilon_prime", "unspecified in source"},
             {"outcome", to_string(tr.outcome)},
             {"steps", steps},
             {"telescoping", nullptr}};
    if (tr.telescoping) {
        const auto& t = *tr.telescoping;
        out["telescoping"] = Json{{"s", t.s},
                                  {"steps", t.steps},
                                  {"recorded_product", to_json(t.recorded_product)},
                                  {"recomputed_product", to_json(t.recomputed_product)},
                                  {"matches", t.matches}};
    }
    return out;
}

// ---------------------------------------------------------------------------
// growth reports

inline Json to_json(const GrowthReport& r)
{
    Json rows = Json::array();
    for (const auto& row : r.rows) {
        Json cells = Json::array();
        for (const auto& c : row.cells)
            cells.push_back(
                Json{{"h", c.h}, {"size", opt_json(c.size)}, {"exponent", opt_json(c.exponent)}, {"error", opt_json(c.error)}});
        rows.push_back(Json{{"n", row.n},
                            {"size", row.size},
                            {"product_size", opt_json(row.product_size)},
                            {"product_exponent", opt_json(row.product_exponent)},
                            {"product_error", opt_json(row.product_error)},
                            {"cells", cells}});
    }
    return Json{{"family", r.family}, {"h_list", r.h_list}, {"cap", r.cap}, {"rows", rows}};
}

inline std::string growth_csv(const GrowthReport& r)
{
    auto num = [](const auto& v) {
        if (!v)
            return std::string();
        if constexpr (std::is_floating_point_v<std::decay_t<decltype(*v)>>) {
            Json j = *v;
            return j.dump();
        } else
            return std::to_string(*v);
    };
    std::string out = "family,n,size,product_size,product_exponent";
    for (long h : r.h_list)
        out += ",h" + std::to_string(h) + "_size,h" + std::to_string(h) + "_exponent";
    out += "\n";
    for (const auto& row : r.rows) {
        out += r.family + "," + std::to_string(row.n) + "," + std::to_string(row.size) + "," + num(row.product_size)
               + "," + num(row.product_exponent);
        for (const auto& c : row.cells)
            out += "," + num(c.size) + "," + num(c.exponent);
        out += "\n";
    }
    return out;
}

} // namespace sumsetlab

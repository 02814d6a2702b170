// sumsetlab command-line front end.
//
// Exit codes: 0 ok, 1 verification failure or suite violation, 2 parse or
// usage error, 3 cap exceeded, 4 unsupported degree, 5 search budget,
// 6 retries exhausted, 7 infeasible or hypothesis violated, 8 pipeline stage
// failed, 9 step budget exhausted, 10 any other library error.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "sumsetlab/commands.hpp"
#include "sumsetlab/graph.hpp"
#include "sumsetlab/set_io.hpp"
#include "sumsetlab/verify.hpp"

using namespace sumsetlab;

namespace {

struct Options {
    std::uint64_t seed = 1;
    std::size_t cap = 0; // 0: SUMSETLAB_CAP or the library default
    std::string format = "auto";
    std::string output;
    std::string verify;
    bool verbose = false;

    // calc
    std::string op, a_path, b_path;
    long h = 2;
    bool elements = false;
    // vanish
    int k = 2;
    // cover
    std::string x_path, y_path, big_k = "1";
    // drc
    std::string graph_path;
    unsigned drc_t = 1, drc_r = 1;
    unsigned long drc_m = 1, drc_a = 1;
    std::size_t retries = default_drc_retries;
    // intersect
    std::vector<std::string> set_paths;
    long ell = 2;
    unsigned t = 1;
    // grow
    std::string family;
    std::vector<std::size_t> n_list;
    std::vector<long> h_list{2};
    unsigned jobs = 1;
    // pipeline
    unsigned pk = 2;
    bool no_dyadic = false, iterate = false;
    unsigned max_steps = 8;
    std::vector<std::string> engineered;
    // lemma-check
    std::string suite = "all";
};

std::size_t resolve_cap(std::size_t flag)
{
    if (flag > 0)
        return flag;
    if (const char* env = std::getenv("SUMSETLAB_CAP")) {
        try {
            std::size_t used = 0;
            const auto v = std::stoull(env, &used);
            if (used == std::string(env).size() && v > 0)
                return static_cast<std::size_t>(v);
        } catch (const std::exception&) {
        }
        fail(Errc::ParseError, std::string("SUMSETLAB_CAP must be a positive integer, got '") + env + "'");
    }
    return default_cap;
}

std::vector<NumberSet> read_sets(const std::vector<std::string>& paths)
{
    std::vector<NumberSet> out;
    for (const auto& p : paths)
        out.push_back(read_number_set_file(p));
    return out;
}

void emit(const Options& o, const std::string& text)
{
    if (o.output.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream out(o.output, std::ios::binary);
    if (!out)
        fail(Errc::InvalidArgument, "cannot write '" + o.output + "'");
    out << text;
}

std::string as_text(const Json& doc)
{
    const auto& cmd = doc["command"];
    const auto& r = doc["result"];
    std::ostringstream out;
    if (cmd == "calc") {
        if (r.contains("energy")) {
            out << "energy=" << r["energy"].get<std::string>() << '\n';
        } else {
            out << "size=" << r["size"] << '\n';
            if (r.contains("elements"))
                for (const auto& x : r["elements"])
                    out << x.get<std::string>() << '\n';
        }
    } else if (cmd == "vanish") {
        out << r["text"].get<std::string>() << ", terms=" << r["terms"] << ", order=" << r["order"] << '\n';
    } else if (cmd == "lemma-check") {
        for (const auto& s : r["suites"]) {
            out << s["name"].get<std::string>() << ": " << s["cases"] << " cases, " << s["failures"] << " failures\n";
            for (const auto& m : s["messages"])
                out << "  " << m.get<std::string>() << '\n';
        }
    } else if (cmd == "grow") {
        out << "family " << r["family"].get<std::string>() << '\n';
        for (const auto& row : r["rows"]) {
            out << "n=" << row["n"] << " |A.A|=" << (row["product_size"].is_null() ? "cap" : row["product_size"].dump());
            for (const auto& c : row["cells"])
                out << " |" << c["h"] << "A|=" << (c["size"].is_null() ? "cap" : c["size"].dump());
            out << '\n';
        }
    } else {
        out << doc.dump(2) << '\n';
    }
    return out.str();
}

int run(const std::string& command, const Options& o)
{
    const RunContext ctx{o.seed, resolve_cap(o.cap)};
    Json doc;
    if (command == "calc") {
        const auto a = read_number_set_file(o.a_path);
        const auto b = o.b_path.empty() ? a : read_number_set_file(o.b_path);
        doc = transcript_calc(o.op, a, b, o.h, ctx, o.elements);
    } else if (command == "vanish") {
        doc = transcript_vanish(o.k, ctx);
    } else if (command == "cover") {
        doc = transcript_cover(read_number_set_file(o.x_path), read_number_set_file(o.y_path), Rational::parse(o.big_k),
                               ctx);
    } else if (command == "drc") {
        const auto any = read_graph_file(o.graph_path);
        const auto* g = std::get_if<BipartiteGraph>(&any);
        if (!g)
            fail(Errc::ParseError, o.graph_path + ": drc needs a bipartite graph (header 'nX nY')");
        doc = transcript_drc(*g, DrcParams{o.drc_t, o.drc_r, o.drc_m, o.drc_a}, o.retries, ctx);
    } else if (command == "intersect") {
        doc = transcript_intersect(read_number_set_file(o.a_path), read_sets(o.set_paths), o.ell, o.t, ctx);
    } else if (command == "grow") {
        doc = transcript_grow(FamilySpec::parse(o.family), o.n_list, o.h_list, o.jobs, ctx);
    } else if (command == "pipeline") {
        PipelineRequest req;
        if (!o.a_path.empty())
            req.a = read_number_set_file(o.a_path);
        else if (!o.family.empty() && o.n_list.size() == 1)
            req.a = FamilySpec::parse(o.family).generate(o.n_list[0]);
        else
            fail(Errc::InvalidArgument, "pipeline needs --set FILE or --family F with a single --n");
        req.k = o.pk;
        req.ell = o.ell;
        req.dyadic_shortcut = !o.no_dyadic;
        req.iterate = o.iterate;
        req.max_steps = o.max_steps;
        if (!o.engineered.empty())
            req.engineered = read_sets(o.engineered);
        doc = transcript_pipeline(req, ctx);
    } else if (command == "lemma-check") {
        doc = transcript_lemma_check(o.suite, ctx);
    }

    std::string format = o.format;
    if (format == "auto")
        format = command == "calc" || command == "vanish" ? "text" : "json";
    if (format == "csv") {
        if (command != "grow")
            fail(Errc::InvalidArgument, "csv output is only available for grow");
        emit(o, growth_csv(growth_experiment(FamilySpec::parse(o.family), o.n_list, o.h_list, ctx.cap, o.jobs)));
    } else if (format == "text") {
        emit(o, as_text(doc));
    } else {
        emit(o, doc.dump(2) + "\n");
    }
    if (command == "lemma-check" && !doc["result"]["passed"].get<bool>())
        return 1;
    return 0;
}

int run_verify(const Options& o)
{
    std::ifstream in(o.verify, std::ios::binary);
    if (!in)
        fail(Errc::ParseError, "cannot open transcript '" + o.verify + "'");
    Json doc;
    try {
        doc = Json::parse(in);
    } catch (const nlohmann::json::exception& e) {
        fail(Errc::ParseError, o.verify + ": " + e.what());
    }
    const auto rep = verify_transcript(doc);
    for (const auto& line : rep.checks)
        if (o.verbose || line.rfind("ok: ", 0) != 0)
            std::cout << line << '\n';
    std::cout << (rep.ok ? "verified" : "verification failed") << '\n';
    return rep.ok ? 0 : 1;
}

} // namespace

int main(int argc, char** argv)
{
    Options o;
    CLI::App app{"Exact sumset and sum-product experiments with checkable transcripts"};
    app.set_help_flag("--help", "Print this help message and exit");
    app.option_defaults()->always_capture_default();
    app.add_option("--seed", o.seed, "Seed recorded in every transcript");
    app.add_option("--cap", o.cap, "Element cap for intermediate sets (default: SUMSETLAB_CAP or 10000000)")
        ->check(CLI::PositiveNumber);
    app.add_option("--format", o.format, "Output format")->check(CLI::IsMember({"auto", "json", "csv", "text"}));
    app.add_option("-o,--output", o.output, "Write output to a file instead of stdout");
    app.add_option("--verify", o.verify, "Re-check a transcript with the library verifiers");
    app.add_flag("-v,--verbose", o.verbose, "Print every check when verifying");
    app.require_subcommand(0, 1);
    app.fallthrough();

    auto* calc = app.add_subcommand("calc", "Set arithmetic on set files");
    calc->add_option("op", o.op, "Operation")
        ->required()
        ->check(CLI::IsMember({"sum", "diff", "prod", "quot", "hfold", "energy"}));
    calc->add_option("--a,--set", o.a_path, "Set file A")->required();
    calc->add_option("--b", o.b_path, "Set file B (defaults to A)");
    calc->add_option("--h", o.h, "Fold count for hfold")->check(CLI::PositiveNumber);
    calc->add_flag("--elements", o.elements, "Also list the elements");

    auto* vanish = app.add_subcommand("vanish", "Monic {-1,0,1} polynomial vanishing at 1 to order k");
    vanish->add_option("--k", o.k, "Order")->required()->check(CLI::NonNegativeNumber);

    auto* cover = app.add_subcommand("cover", "Covering split of X against Y");
    cover->add_option("--x", o.x_path, "Set file X")->required();
    cover->add_option("--y", o.y_path, "Set file Y")->required();
    cover->add_option("--K", o.big_k, "Threshold K (rational)");

    auto* drc = app.add_subcommand("drc", "Dependent random choice on a bipartite graph");
    drc->add_option("--graph", o.graph_path, "Graph file with header 'nX nY'")->required();
    drc->add_option("--t", o.drc_t, "Sample size")->check(CLI::PositiveNumber);
    drc->add_option("--r", o.drc_r, "Subset size")->check(CLI::PositiveNumber);
    drc->add_option("--m", o.drc_m, "Common neighbours required")->check(CLI::PositiveNumber);
    drc->add_option("--a", o.drc_a, "Target size")->check(CLI::PositiveNumber);
    drc->add_option("--retries", o.retries, "Attempts before giving up")->check(CLI::PositiveNumber);

    auto* intersect = app.add_subcommand("intersect", "Intersection algorithm on a family of 2^t sets");
    intersect->add_option("--a", o.a_path, "Set file A")->required();
    intersect->add_option("--sets", o.set_paths, "Set files A_1..A_(2^t)")->required();
    intersect->add_option("--ell", o.ell, "Fold parameter l")->check(CLI::Range(2L, 1L << 20));
    intersect->add_option("--t", o.t, "Depth t")->check(CLI::PositiveNumber);

    auto* grow = app.add_subcommand("grow", "Exact |A.A| and |hA| over a set family");
    grow->add_option("--family", o.family, "gp:R, ap:D, ugp:R1,R2 or rand:RANGE:SEED")->required();
    grow->add_option("--n", o.n_list, "Sizes")->required()->delimiter(',');
    grow->add_option("--h", o.h_list, "Fold counts")->delimiter(',');
    grow->add_option("--jobs", o.jobs, "Worker threads")->check(CLI::PositiveNumber);

    auto* pipeline = app.add_subcommand("pipeline", "Growth-or-subset proposition, optionally iterated");
    pipeline->add_option("--set", o.a_path, "Set file A");
    pipeline->add_option("--family", o.family, "Generate A from a family instead");
    pipeline->add_option("--n", o.n_list, "Size for --family");
    pipeline->add_option("--k", o.pk, "k")->check(CLI::Range(2u, 16u));
    pipeline->add_option("--ell", o.ell, "l")->check(CLI::Range(2L, 1L << 20));
    pipeline->add_flag("--no-dyadic", o.no_dyadic, "Skip the dyadic-sparse shortcut");
    pipeline->add_flag("--iterate", o.iterate, "Repeat on A' while the subset branch fires");
    pipeline->add_option("--max-steps", o.max_steps, "Step budget for --iterate");
    pipeline->add_option("--engineered", o.engineered, "Set files replacing the projections at step 0");

    auto* lemma = app.add_subcommand("lemma-check", "Seeded property suites");
    lemma->add_option("--suite", o.suite, "Suite name or 'all'");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (!o.verify.empty())
            return run_verify(o);
        const auto subs = app.get_subcommands();
        if (subs.empty()) {
            std::cerr << app.help();
            return 2;
        }
        return run(subs.front()->get_name(), o);
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return exit_code(e.code());
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 10;
    }
}

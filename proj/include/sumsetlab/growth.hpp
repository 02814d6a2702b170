#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <exception>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "sumsetlab/error.hpp"
#include "sumsetlab/random.hpp"
#include "sumsetlab/setcalc.hpp"

namespace sumsetlab {

/// Set families: "gp:R" = {R^0..R^(n-1)}, "ap:D" = {D, 2D, ..., nD},
/// "ugp:R1,R2" = GP(R1, ceil(n/2)) u GP(R2, floor(n/2)),
/// "rand:RANGE:SEED" = n distinct uniform integers in [1, RANGE].
struct FamilySpec {
    enum class Kind { Geometric, Arithmetic, UnionGeometric, Random };

    Kind kind = Kind::Geometric;
    Rational r1 = 2;
    Rational r2 = 3;
    unsigned long range = 0;
    std::uint64_t seed = 0;

    static FamilySpec parse(const std::string& text)
    {
        const auto colon = text.find(':');
        if (colon == std::string::npos)
            fail(Errc::ParseError, "family '" + text + "' needs the form kind:params");
        const std::string kind = text.substr(0, colon);
        const std::string rest = text.substr(colon + 1);
        FamilySpec f;
        auto parse_u64 = [&](const std::string& s) {
            std::size_t used = 0;
            unsigned long long v = 0;
            try {
                v = std::stoull(s, &used);
            } catch (const std::exception&) {
                used = 0;
            }
            if (s.empty() || used != s.size() || s[0] == '-')
                fail(Errc::ParseError, "bad number '" + s + "' in family '" + text + "'");
            return static_cast<std::uint64_t>(v);
        };
        if (kind == "gp") {
            f.kind = Kind::Geometric;
            f.r1 = Rational::parse(rest);
        } else if (kind == "ap") {
            f.kind = Kind::Arithmetic;
            f.r1 = Rational::parse(rest);
        } else if (kind == "ugp") {
            const auto comma = rest.find(',');
            if (comma == std::string::npos)
                fail(Errc::ParseError, "ugp needs two ratios, 'ugp:R1,R2'");
            f.kind = Kind::UnionGeometric;
            f.r1 = Rational::parse(rest.substr(0, comma));
            f.r2 = Rational::parse(rest.substr(comma + 1));
        } else if (kind == "rand") {
            const auto c2 = rest.find(':');
            if (c2 == std::string::npos)
                fail(Errc::ParseError, "rand needs 'rand:RANGE:SEED'");
            f.kind = Kind::Random;
            f.range = parse_u64(rest.substr(0, c2));
            f.seed = parse_u64(rest.substr(c2 + 1));
            if (f.range == 0)
                fail(Errc::ParseError, "rand range must be positive");
        } else {
            fail(Errc::ParseError, "unknown family kind '" + kind + "'");
        }
        if ((f.kind == Kind::Geometric || f.kind == Kind::UnionGeometric)
            && (f.r1.is_zero() || f.r1.abs() == Rational(1) || f.r2.is_zero() || f.r2.abs() == Rational(1)))
            fail(Errc::InvalidArgument, "geometric ratios must not be 0 or +-1");
        if (f.kind == Kind::Arithmetic && f.r1.is_zero())
            fail(Errc::InvalidArgument, "arithmetic step must be non-zero");
        return f;
    }

    std::string str() const
    {
        switch (kind) {
        case Kind::Geometric: return "gp:" + r1.str();
        case Kind::Arithmetic: return "ap:" + r1.str();
        case Kind::UnionGeometric: return "ugp:" + r1.str() + "," + r2.str();
        case Kind::Random: return "rand:" + std::to_string(range) + ":" + std::to_string(seed);
        }
        return "?";
    }

    NumberSet generate(std::size_t n) const
    {
        std::vector<Rational> v;
        auto gp = [&](const Rational& r, std::size_t len) {
            Rational x = 1;
            for (std::size_t i = 0; i < len; ++i, x *= r)
                v.push_back(x);
        };
        switch (kind) {
        case Kind::Geometric: gp(r1, n); break;
        case Kind::Arithmetic:
            for (std::size_t i = 1; i <= n; ++i)
                v.push_back(r1 * Rational(static_cast<long>(i)));
            break;
        case Kind::UnionGeometric:
            gp(r1, (n + 1) / 2);
            gp(r2, n / 2);
            break;
        case Kind::Random: {
            if (n > range)
                fail(Errc::InvalidArgument, "cannot draw " + std::to_string(n) + " distinct values from [1, "
                                                + std::to_string(range) + "]");
            SeededRng rng(seed ^ (0x9e3779b97f4a7c15ULL * (n + 1)));
            std::vector<unsigned long> picked;
            while (picked.size() < n) {
                const unsigned long x = rng.below(range) + 1;
                if (std::find(picked.begin(), picked.end(), x) == picked.end())
                    picked.push_back(x);
            }
            for (auto x : picked)
                v.emplace_back(static_cast<long>(x));
            break;
        }
        }
        return NumberSet(std::move(v));
    }
};

struct GrowthCell {
    long h = 0;
    std::optional<std::size_t> size;  // |hA|
    std::optional<double> exponent;   // log|hA| / log|A|
    std::optional<std::string> error; // e.g. cap exceeded
};

struct GrowthRow {
    std::size_t n = 0;                    // requested
    std::size_t size = 0;                 // |A|
    std::optional<std::size_t> product_size;
    std::optional<double> product_exponent;
    std::optional<std::string> product_error;
    std::vector<GrowthCell> cells;
};

struct GrowthReport {
    std::string family;
    std::vector<long> h_list;
    std::size_t cap = 0;
    std::vector<GrowthRow> rows;
};

inline std::optional<double> size_exponent(std::size_t s, std::size_t base)
{
    if (base < 2 || s == 0)
        return std::nullopt;
    return std::log(static_cast<double>(s)) / std::log(static_cast<double>(base));
}

inline GrowthRow growth_row(const FamilySpec& f, std::size_t n, const std::vector<long>& h_list, std::size_t cap)
{
    GrowthRow row;
    row.n = n;
    const NumberSet a = f.generate(n);
    row.size = a.size();
    try {
        row.product_size = product_set(a, a, cap).size();
        row.product_exponent = size_exponent(*row.product_size, row.size);
    } catch (const Error& e) {
        if (e.code() != Errc::CapExceeded)
            throw;
        row.product_error = e.what();
    }
    for (long h : h_list) {
        GrowthCell cell;
        cell.h = h;
        try {
            cell.size = hfold_sum(a, h, cap).size();
            cell.exponent = size_exponent(*cell.size, row.size);
        } catch (const Error& e) {
            if (e.code() != Errc::CapExceeded)
                throw;
            cell.error = e.what();
        }
        row.cells.push_back(std::move(cell));
    }
    return row;
}

/// Exact |A.A| and |hA| for each n; cap overruns are recorded per cell.
/// Rows are computed on up to `jobs` threads and returned in n_list order.
inline GrowthReport growth_experiment(const FamilySpec& f, const std::vector<std::size_t>& n_list,
                                      const std::vector<long>& h_list, std::size_t cap = default_cap,
                                      unsigned jobs = 1)
{
    for (long h : h_list)
        if (h < 1)
            fail(Errc::InvalidArgument, "h must be at least 1");
    GrowthReport report{f.str(), h_list, cap, std::vector<GrowthRow>(n_list.size())};
    std::vector<std::exception_ptr> errors(n_list.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i = next++; i < n_list.size(); i = next++) {
            try {
                report.rows[i] = growth_row(f, n_list[i], h_list, cap);
            } catch (...) {
                errors[i] = std::current_exception();
            }
        }
    };
    const unsigned threads = std::max(1u, std::min<unsigned>(jobs, static_cast<unsigned>(n_list.size())));
    std::vector<std::thread> pool;
    for (unsigned t = 1; t < threads; ++t)
        pool.emplace_back(worker);
    worker();
    for (auto& t : pool)
        t.join();
    for (auto& e : errors)
        if (e)
            std::rethrow_exception(e);
    return report;
}

} // namespace sumsetlab

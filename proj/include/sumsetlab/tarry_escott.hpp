#pragma once

/**
 * @file tarry_escott.hpp
 * @brief Tarry-Escott solutions and {-1,0,1} polynomials with a prescribed
 * order of vanishing at x = 1.
 *
 * A solution is a pair of integer multisets with equal power sums up to some
 * degree k. Its exact degree is the largest such k. The polynomial
 * x^(-a) * sum_i (x^(a_i) - x^(b_i)) vanishes at 1 to order exactly k + 1:
 * the value at 1 is s - s = 0 and the first k derivatives vanish as well.
 * `construct_vanishing_poly` uses this for order k >= 4 with a degree k - 1
 * solution taken from a table of ideal solutions that is re-verified by exact
 * power sums whenever it is loaded.
 */

#include <algorithm>
#include <cstdint>
#include <fstream>
#include <map>
#include <optional>
#include <span>
#include <sstream>
#include <string>
#include <vector>

#include "sumsetlab/polynomial.hpp"

namespace sumsetlab {

struct TarryEscottSolution {
    std::vector<long> left;
    std::vector<long> right;
    int claimed_degree = 0;

    std::size_t size() const noexcept { return left.size(); }
};

inline BigInt power_sum(std::span<const long> values, unsigned long j)
{
    BigInt sum = 0;
    BigInt term;
    for (long v : values) {
        BigInt base(v);
        mpz_pow_ui(term.get_mpz_t(), base.get_mpz_t(), j);
        sum += term;
    }
    return sum;
}

/// Largest k with equal power sums for j = 1..k (0 when the plain sums differ).
inline int verify_te(const TarryEscottSolution& sol)
{
    if (sol.left.size() != sol.right.size())
        fail(Errc::DegenerateInput, "sides have different lengths");
    auto l = sol.left;
    auto r = sol.right;
    std::sort(l.begin(), l.end());
    std::sort(r.begin(), r.end());
    if (l == r)
        fail(Errc::DegenerateInput, "sides are equal as multisets");
    // Distinct multisets of size s cannot agree on s power sums, so this ends by j = s.
    int k = 0;
    while (power_sum(l, static_cast<unsigned long>(k + 1)) == power_sum(r, static_cast<unsigned long>(k + 1)))
        ++k;
    return k;
}

inline constexpr std::uint64_t default_te_budget = 5'000'000;

/// Exhaustive search for two distinct s-element subsets of [0, range] whose
/// power sums agree for j = 1..k. Subsets are visited in lexicographic order
/// and the first collision is returned, translated so the smallest element is
/// 0 and the side holding it comes first.
inline std::optional<TarryEscottSolution> search_te(int k, int s, long range,
                                                    std::uint64_t budget = default_te_budget)
{
    if (k < 1 || s < 2 || range < 1)
        fail(Errc::InvalidArgument, "search_te needs k >= 1, s >= 2, range >= 1");
    {
        BigInt count;
        mpz_bin_uiui(count.get_mpz_t(), static_cast<unsigned long>(range + 1), static_cast<unsigned long>(s));
        if (count > BigInt(static_cast<unsigned long>(budget)))
            fail(Errc::BudgetExceeded, "search space of " + count.get_str() + " subsets exceeds budget");
    }
    if (s > range + 1)
        return std::nullopt;

    std::map<std::vector<BigInt>, std::vector<long>> seen;
    std::vector<long> subset(static_cast<std::size_t>(s));
    for (int i = 0; i < s; ++i)
        subset[static_cast<std::size_t>(i)] = i;
    while (true) {
        std::vector<BigInt> signature;
        signature.reserve(static_cast<std::size_t>(k));
        for (int j = 1; j <= k; ++j)
            signature.push_back(power_sum(subset, static_cast<unsigned long>(j)));
        auto [it, inserted] = seen.try_emplace(std::move(signature), subset);
        if (!inserted) {
            TarryEscottSolution sol{it->second, subset, 0};
            const long shift = std::min(sol.left.front(), sol.right.front());
            for (auto& v : sol.left)
                v -= shift;
            for (auto& v : sol.right)
                v -= shift;
            if (sol.right < sol.left)
                std::swap(sol.left, sol.right);
            sol.claimed_degree = verify_te(sol);
            return sol;
        }
        // next combination
        int i = s - 1;
        while (i >= 0 && subset[static_cast<std::size_t>(i)] == range - (s - 1 - i))
            --i;
        if (i < 0)
            return std::nullopt;
        ++subset[static_cast<std::size_t>(i)];
        for (int j = i + 1; j < s; ++j)
            subset[static_cast<std::size_t>(j)] = subset[static_cast<std::size_t>(j - 1)] + 1;
    }
}

/// x^(-a) * sum_i (x^(left_i) - x^(right_i)), a = min element when negative
/// entries are present and 0 otherwise. With `monic`, a leading -1 is flipped.
/// Vanishes at 1 to order verify_te(sol) + 1.
inline SignedPolynomial te_to_polynomial(const TarryEscottSolution& sol, bool monic = true)
{
    if (verify_te(sol) < 1)
        fail(Errc::DegenerateInput, "first power sums differ");
    auto has_repeat = [](std::vector<long> v) {
        std::sort(v.begin(), v.end());
        return std::adjacent_find(v.begin(), v.end()) != v.end();
    };
    if (has_repeat(sol.left) || has_repeat(sol.right))
        fail(Errc::DegenerateInput, "repeated element within one side");
    long shift = 0;
    for (long v : sol.left)
        shift = std::min(shift, v);
    for (long v : sol.right)
        shift = std::min(shift, v);
    SignedPolynomial p;
    for (long v : sol.left)
        p.add_term(static_cast<SignedPolynomial::Exponent>(v - shift), BigInt(1));
    for (long v : sol.right)
        p.add_term(static_cast<SignedPolynomial::Exponent>(v - shift), BigInt(-1));
    if (p.is_zero())
        fail(Errc::DegenerateInput, "all terms cancel");
    if (monic && p.leading_coefficient() < 0)
        p = -p;
    return p;
}

/// Verified table of Tarry-Escott solutions keyed by degree.
class TeTable {
public:
    /// Lines "k; a_1,...,a_s; b_1,...,b_s". Each entry must verify at degree k.
    static TeTable parse(std::istream& in, const std::string& source = "<table>")
    {
        TeTable table;
        std::string line;
        std::size_t line_no = 0;
        auto where = [&] { return source + ":" + std::to_string(line_no) + ": "; };
        auto parse_list = [&](const std::string& text) {
            std::vector<long> out;
            std::stringstream ss(text);
            std::string item;
            while (std::getline(ss, item, ',')) {
                const auto r = Rational::parse(item);
                if (!r.is_integer() || !r.numerator().fits_slong_p())
                    fail(Errc::ParseError, where() + "bad integer '" + item + "'");
                out.push_back(r.numerator().get_si());
            }
            return out;
        };
        while (std::getline(in, line)) {
            ++line_no;
            if (const auto hash = line.find('#'); hash != std::string::npos)
                line.erase(hash);
            if (line.find_first_not_of(" \t\r") == std::string::npos)
                continue;
            std::vector<std::string> fields;
            std::stringstream ss(line);
            std::string field;
            while (std::getline(ss, field, ';'))
                fields.push_back(field);
            if (fields.size() != 3)
                fail(Errc::ParseError, where() + "expected 'k; left; right'");
            TarryEscottSolution sol;
            try {
                const auto k = Rational::parse(fields[0]);
                if (!k.is_integer() || k.sign() <= 0 || !k.numerator().fits_sint_p())
                    fail(Errc::ParseError, "bad degree");
                sol.claimed_degree = static_cast<int>(k.numerator().get_si());
                sol.left = parse_list(fields[1]);
                sol.right = parse_list(fields[2]);
                if (verify_te(sol) != sol.claimed_degree)
                    fail(Errc::ParseError, "power sums do not verify at the claimed degree");
            } catch (const Error& e) {
                fail(Errc::ParseError, where() + e.what());
            }
            table.entries_[sol.claimed_degree] = sol;
        }
        return table;
    }

    static TeTable parse(const std::string& text, const std::string& source = "<table>")
    {
        std::istringstream in(text);
        return parse(in, source);
    }

    static TeTable load_file(const std::string& path)
    {
        std::ifstream in(path);
        if (!in)
            fail(Errc::ParseError, "cannot open table file '" + path + "'");
        return parse(in, path);
    }

    /// Ideal solutions (s = k + 1) for degrees 1..9.
    static const TeTable& builtin()
    {
        static const TeTable table = parse(builtin_text(), "<builtin>");
        return table;
    }

    static const char* builtin_text()
    {
        return "1; 0,3; 1,2\n"
               "2; 1,5,6; 2,3,7\n"
               "3; 0,4,7,11; 1,2,9,10\n"
               "4; 0,4,8,16,17; 1,2,10,14,18\n"
               "5; 0,5,6,16,17,22; 1,2,10,12,20,21\n"
               "6; 0,18,27,58,64,89,101; 1,13,38,44,75,84,102\n"
               "7; 0,4,9,23,27,41,46,50; 1,2,11,20,30,39,48,49\n"
               "8; 0,24,30,83,86,133,157,181,197; 1,17,41,65,112,115,168,174,198\n"
               "9; 0,12,125,213,214,412,413,501,614,626; 5,6,133,182,242,384,444,493,620,621\n";
    }

    const TarryEscottSolution* find(int k) const
    {
        auto it = entries_.find(k);
        return it == entries_.end() ? nullptr : &it->second;
    }

    int max_degree() const { return entries_.empty() ? 0 : entries_.rbegin()->first; }
    const std::map<int, TarryEscottSolution>& entries() const noexcept { return entries_; }

private:
    std::map<int, TarryEscottSolution> entries_;
};

struct VanishingOptions {
    const TeTable* table = nullptr; // builtin when null
    std::uint64_t search_budget = 200'000;
};

/// Monic {-1,0,1} polynomial vanishing at x = 1 to order exactly k, with at
/// most max(k^2, 2) terms.
inline SignedPolynomial construct_vanishing_poly(int k, const VanishingOptions& options = {})
{
    if (k < 0)
        fail(Errc::InvalidArgument, "degree must be non-negative");
    SignedPolynomial p = SignedPolynomial::constant(1);
    if (k <= 3) {
        // (x - 1)(x^2 - 1)...(x^(2^(k-1)) - 1)
        for (int i = 0; i < k; ++i)
            p = p * SignedPolynomial::power_minus_one(1ul << i);
    } else {
        // A degree k - 1 solution gives order exactly k.
        const int degree = k - 1;
        const TeTable& table = options.table ? *options.table : TeTable::builtin();
        std::optional<TarryEscottSolution> sol;
        if (const auto* entry = table.find(degree))
            sol = *entry;
        else {
            try {
                sol = search_te(degree, k, 2L * k * k, options.search_budget);
            } catch (const Error& e) {
                if (e.code() != Errc::BudgetExceeded)
                    throw;
            }
            if (sol && sol->claimed_degree != degree)
                sol.reset();
        }
        if (!sol)
            fail(Errc::UnsupportedDegree, "no Tarry-Escott solution of degree " + std::to_string(k) + " available");
        p = te_to_polynomial(*sol, true);
    }
    const std::size_t term_bound = std::max<std::size_t>(static_cast<std::size_t>(k) * static_cast<std::size_t>(k), 2);
    if (!p.is_monic() || !p.is_signed() || p.term_count() > term_bound
        || vanishing_order(p) != static_cast<unsigned long>(k))
        fail(Errc::UnsupportedDegree, "constructed polynomial failed verification for k = " + std::to_string(k));
    return p;
}

} // namespace sumsetlab

#pragma once

// Set text format: one element per line ("p/q" or an integer), '#' starts a
// comment, blank lines are ignored. The writer emits the canonical sorted form.

#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "sumsetlab/number_set.hpp"

namespace sumsetlab {

inline NumberSet read_number_set(std::istream& in, const std::string& source = "<input>")
{
    std::vector<Rational> elements;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (const auto hash = line.find('#'); hash != std::string::npos)
            line.erase(hash);
        if (line.find_first_not_of(" \t\r") == std::string::npos)
            continue;
        try {
            elements.push_back(Rational::parse(line));
        } catch (const Error& e) {
            fail(Errc::ParseError, source + ":" + std::to_string(line_no) + ": " + e.detail());
        }
    }
    return NumberSet(std::move(elements));
}

inline NumberSet parse_number_set(const std::string& text, const std::string& source = "<string>")
{
    std::istringstream in(text);
    return read_number_set(in, source);
}

inline NumberSet read_number_set_file(const std::string& path)
{
    std::ifstream in(path);
    if (!in)
        fail(Errc::ParseError, "cannot open set file '" + path + "'");
    return read_number_set(in, path);
}

inline void write_number_set(std::ostream& out, const NumberSet& s)
{
    for (const auto& x : s)
        out << x.str() << '\n';
}

inline std::string format_number_set(const NumberSet& s)
{
    std::ostringstream out;
    write_number_set(out, s);
    return out.str();
}

} // namespace sumsetlab

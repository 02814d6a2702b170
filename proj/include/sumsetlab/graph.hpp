#pragma once

#include <algorithm>
#include <cstddef>
#include <fstream>
#include <istream>
#include <sstream>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "sumsetlab/error.hpp"

namespace sumsetlab {

using VertexId = std::size_t;
using Edge = std::pair<VertexId, VertexId>;

namespace detail {
inline bool insert_sorted(std::vector<VertexId>& v, VertexId x)
{
    auto it = std::lower_bound(v.begin(), v.end(), x);
    if (it != v.end() && *it == x)
        return false;
    v.insert(it, x);
    return true;
}
} // namespace detail

/// Undirected graph on 0..n-1 without self-loops.
class SimpleGraph {
public:
    explicit SimpleGraph(std::size_t n = 0) : adj_(n) {}

    SimpleGraph(std::size_t n, const std::vector<Edge>& edges) : adj_(n)
    {
        for (const auto& [u, v] : edges)
            add_edge(u, v);
    }

    void add_edge(VertexId u, VertexId v)
    {
        if (u >= adj_.size() || v >= adj_.size())
            fail(Errc::InvalidArgument, "edge endpoint out of range");
        if (u == v)
            fail(Errc::InvalidArgument, "self-loop at vertex " + std::to_string(u));
        if (detail::insert_sorted(adj_[u], v)) {
            detail::insert_sorted(adj_[v], u);
            ++edges_;
        }
    }

    std::size_t vertex_count() const noexcept { return adj_.size(); }
    std::size_t edge_count() const noexcept { return edges_; }
    std::size_t degree(VertexId v) const { return adj_.at(v).size(); }
    const std::vector<VertexId>& neighbors(VertexId v) const { return adj_.at(v); }

    bool has_edge(VertexId u, VertexId v) const
    {
        return std::binary_search(adj_.at(u).begin(), adj_.at(u).end(), v);
    }

    std::size_t max_degree() const
    {
        std::size_t d = 0;
        for (const auto& n : adj_)
            d = std::max(d, n.size());
        return d;
    }

private:
    std::vector<std::vector<VertexId>> adj_;
    std::size_t edges_ = 0;
};

/// Bipartite graph [X, Y]; left ids 0..|X|-1 and right ids 0..|Y|-1 are separate.
class BipartiteGraph {
public:
    BipartiteGraph(std::size_t left = 0, std::size_t right = 0) : left_(left), right_(right) {}

    BipartiteGraph(std::size_t left, std::size_t right, const std::vector<Edge>& edges)
        : BipartiteGraph(left, right)
    {
        for (const auto& [x, y] : edges)
            add_edge(x, y);
    }

    void add_edge(VertexId x, VertexId y)
    {
        if (x >= left_.size() || y >= right_.size())
            fail(Errc::InvalidArgument, "bipartite edge endpoint out of range");
        if (detail::insert_sorted(left_[x], y)) {
            detail::insert_sorted(right_[y], x);
            ++edges_;
        }
    }

    std::size_t left_count() const noexcept { return left_.size(); }
    std::size_t right_count() const noexcept { return right_.size(); }
    std::size_t edge_count() const noexcept { return edges_; }
    const std::vector<VertexId>& left_neighbors(VertexId x) const { return left_.at(x); }
    const std::vector<VertexId>& right_neighbors(VertexId y) const { return right_.at(y); }

    bool has_edge(VertexId x, VertexId y) const
    {
        return std::binary_search(left_.at(x).begin(), left_.at(x).end(), y);
    }

private:
    std::vector<std::vector<VertexId>> left_;
    std::vector<std::vector<VertexId>> right_;
    std::size_t edges_ = 0;
};

using AnyGraph = std::variant<SimpleGraph, BipartiteGraph>;

/// Graph file: first line "n" (simple) or "nX nY" (bipartite), then one edge
/// "u v" per line. '#' comments and blank lines are ignored.
inline AnyGraph read_graph(std::istream& in, const std::string& source = "<graph>")
{
    std::string line;
    std::size_t line_no = 0;
    auto where = [&] { return source + ":" + std::to_string(line_no) + ": "; };
    auto numbers = [&](const std::string& text) {
        std::istringstream ss(text);
        std::vector<long long> out;
        std::string tok;
        while (ss >> tok) {
            std::size_t used = 0;
            long long v = 0;
            try {
                v = std::stoll(tok, &used);
            } catch (const std::exception&) {
                used = 0;
            }
            if (used != tok.size() || v < 0)
                fail(Errc::ParseError, where() + "bad vertex count or id '" + tok + "'");
            out.push_back(v);
        }
        return out;
    };
    std::vector<long long> header;
    std::vector<Edge> edges;
    while (std::getline(in, line)) {
        ++line_no;
        if (const auto hash = line.find('#'); hash != std::string::npos)
            line.erase(hash);
        if (line.find_first_not_of(" \t\r") == std::string::npos)
            continue;
        auto nums = numbers(line);
        if (header.empty()) {
            if (nums.size() != 1 && nums.size() != 2)
                fail(Errc::ParseError, where() + "header must be 'n' or 'nX nY'");
            header = nums;
            continue;
        }
        if (nums.size() != 2)
            fail(Errc::ParseError, where() + "edge line must be 'u v'");
        edges.emplace_back(static_cast<VertexId>(nums[0]), static_cast<VertexId>(nums[1]));
    }
    if (header.empty())
        fail(Errc::ParseError, source + ": missing header line");
    try {
        if (header.size() == 1)
            return SimpleGraph(static_cast<std::size_t>(header[0]), edges);
        return BipartiteGraph(static_cast<std::size_t>(header[0]), static_cast<std::size_t>(header[1]), edges);
    } catch (const Error& e) {
        fail(Errc::ParseError, source + ": " + e.detail());
    }
}

inline AnyGraph read_graph_file(const std::string& path)
{
    std::ifstream in(path);
    if (!in)
        fail(Errc::ParseError, "cannot open graph file '" + path + "'");
    return read_graph(in, path);
}

} // namespace sumsetlab

#pragma once

#include <compare>
#include <cstddef>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "scot/error.hpp"

namespace scot {

// A vertex name. Plain graphs use atomic names; the Cartesian product
// labels each vertex with an ordered pair whose first half comes from the
// left operand.
struct VertexLabel {
    std::string first;
    std::optional<std::string> second;

    VertexLabel() = default;
    VertexLabel(std::string name) : first(std::move(name)) {}
    VertexLabel(const char* name) : first(name) {}
    VertexLabel(std::string a, std::string b)
        : first(std::move(a)), second(std::move(b)) {}

    bool is_pair() const { return second.has_value(); }
    std::string str() const;

    auto operator<=>(const VertexLabel&) const = default;
    bool operator==(const VertexLabel&) const = default;
};

// Finite simple undirected graph. Immutable once built; structural
// properties are computed in the constructor.
class Graph {
public:
    static constexpr std::size_t npos = std::numeric_limits<std::size_t>::max();

    using Edge = std::pair<std::size_t, std::size_t>;  // first < second

    Graph(std::vector<VertexLabel> vertices,
          const std::vector<std::pair<VertexLabel, VertexLabel>>& edges);

    std::size_t order() const { return vertices_.size(); }
    std::size_t size() const { return edges_.size(); }
    bool empty() const { return vertices_.empty(); }

    const std::vector<VertexLabel>& vertices() const { return vertices_; }
    const VertexLabel& label(std::size_t v) const { return vertices_.at(v); }
    const std::vector<Edge>& edges() const { return edges_; }

    std::optional<std::size_t> find(const VertexLabel& label) const;
    std::size_t index(const VertexLabel& label) const;

    std::span<const std::size_t> neighbours(std::size_t v) const {
        return adjacency_.at(v);
    }
    std::size_t degree(std::size_t v) const { return adjacency_.at(v).size(); }
    bool adjacent(std::size_t u, std::size_t v) const;

    bool connected() const { return connected_; }
    bool acyclic() const { return acyclic_; }
    bool complete() const { return complete_; }

    // Throws GraphError naming an unreachable pair when disconnected.
    std::size_t diameter() const;

    // Hop counts from `from`; npos marks unreachable vertices.
    std::vector<std::size_t> distances_from(std::size_t from) const;

private:
    std::vector<VertexLabel> vertices_;
    std::vector<Edge> edges_;
    std::vector<std::vector<std::size_t>> adjacency_;
    bool connected_ = true;
    bool acyclic_ = true;
    bool complete_ = true;
    std::size_t diameter_ = 0;
    std::optional<std::pair<std::size_t, std::size_t>> unreachable_;
};

// G □ H. Vertex (g, h) is adjacent to (g', h') iff g = g' and hh' is an
// edge of H, or gg' is an edge of G and h = h'. Only atomic-labelled
// operands are accepted.
Graph cartesian_product(const Graph& g, const Graph& h);

inline std::size_t diameter(const Graph& g) { return g.diameter(); }
inline bool is_acyclic(const Graph& g) { return g.acyclic(); }
inline bool is_complete(const Graph& g) { return g.complete(); }

Graph make_path(std::size_t n);
Graph make_star(std::size_t n);
Graph make_complete(std::size_t n);
// Vertices appear in first-mention order. The edges must form one tree.
Graph make_tree(const std::vector<std::pair<std::string, std::string>>& edges);

// Natural order for labels: integers numerically, everything else
// lexicographically, integers before non-integers.
bool natural_less(const std::string& a, const std::string& b);

}  // namespace scot

#include "scot/graph.hpp"

#include <algorithm>
#include <charconv>
#include <deque>
#include <map>

#include <fmt/format.h>

namespace scot {

std::string VertexLabel::str() const {
    if (!second) return first;
    return fmt::format("({},{})", first, *second);
}

Graph::Graph(std::vector<VertexLabel> vertices,
             const std::vector<std::pair<VertexLabel, VertexLabel>>& edges)
    : vertices_(std::move(vertices)), adjacency_(vertices_.size()) {
    std::map<VertexLabel, std::size_t> index;
    for (std::size_t i = 0; i < vertices_.size(); ++i) {
        if (!index.emplace(vertices_[i], i).second)
            throw GraphError(fmt::format("duplicate vertex label {}", vertices_[i].str()));
    }
    auto lookup = [&](const VertexLabel& l) {
        auto it = index.find(l);
        if (it == index.end())
            throw GraphError(fmt::format("edge endpoint {} is not a vertex", l.str()));
        return it->second;
    };
    for (const auto& [a, b] : edges) {
        std::size_t u = lookup(a);
        std::size_t v = lookup(b);
        if (u == v) throw GraphError(fmt::format("self-loop at {}", a.str()));
        if (u > v) std::swap(u, v);
        if (std::find(adjacency_[u].begin(), adjacency_[u].end(), v) != adjacency_[u].end())
            throw GraphError(fmt::format("parallel edge {}-{}", a.str(), b.str()));
        adjacency_[u].push_back(v);
        adjacency_[v].push_back(u);
        edges_.emplace_back(u, v);
    }
    for (auto& adj : adjacency_) std::sort(adj.begin(), adj.end());

    const std::size_t n = vertices_.size();
    for (std::size_t s = 0; s < n; ++s) {
        auto dist = distances_from(s);
        for (std::size_t t = 0; t < n; ++t) {
            if (dist[t] == npos) {
                connected_ = false;
                if (!unreachable_) unreachable_ = std::make_pair(s, t);
            } else {
                diameter_ = std::max(diameter_, dist[t]);
            }
        }
    }
    std::size_t components = 0;
    {
        std::vector<bool> seen(n, false);
        for (std::size_t s = 0; s < n; ++s) {
            if (seen[s]) continue;
            ++components;
            auto dist = distances_from(s);
            for (std::size_t t = 0; t < n; ++t)
                if (dist[t] != npos) seen[t] = true;
        }
    }
    acyclic_ = edges_.size() + components == n;
    complete_ = n > 0 && edges_.size() == n * (n - 1) / 2;
}

std::optional<std::size_t> Graph::find(const VertexLabel& label) const {
    auto it = std::find(vertices_.begin(), vertices_.end(), label);
    if (it == vertices_.end()) return std::nullopt;
    return static_cast<std::size_t>(it - vertices_.begin());
}

std::size_t Graph::index(const VertexLabel& label) const {
    if (auto i = find(label)) return *i;
    throw GraphError(fmt::format("unknown vertex {}", label.str()));
}

bool Graph::adjacent(std::size_t u, std::size_t v) const {
    const auto& adj = adjacency_.at(u);
    return std::binary_search(adj.begin(), adj.end(), v);
}

std::size_t Graph::diameter() const {
    if (vertices_.empty()) throw GraphError("diameter of an empty graph");
    if (unreachable_) {
        throw GraphError(fmt::format("graph is disconnected: {} cannot reach {}",
                                     vertices_[unreachable_->first].str(),
                                     vertices_[unreachable_->second].str()));
    }
    return diameter_;
}

std::vector<std::size_t> Graph::distances_from(std::size_t from) const {
    std::vector<std::size_t> dist(vertices_.size(), npos);
    std::deque<std::size_t> frontier{from};
    dist.at(from) = 0;
    while (!frontier.empty()) {
        std::size_t u = frontier.front();
        frontier.pop_front();
        for (std::size_t v : adjacency_[u]) {
            if (dist[v] == npos) {
                dist[v] = dist[u] + 1;
                frontier.push_back(v);
            }
        }
    }
    return dist;
}

Graph cartesian_product(const Graph& g, const Graph& h) {
    if (g.empty() || h.empty()) throw GraphError("Cartesian product of an empty graph");
    for (const Graph* operand : {&g, &h}) {
        for (const auto& l : operand->vertices()) {
            if (l.is_pair())
                throw GraphError("Cartesian product operands must have atomic labels");
        }
    }
    std::vector<VertexLabel> vertices;
    vertices.reserve(g.order() * h.order());
    for (const auto& a : g.vertices())
        for (const auto& b : h.vertices()) vertices.emplace_back(a.first, b.first);

    std::vector<std::pair<VertexLabel, VertexLabel>> edges;
    edges.reserve(g.size() * h.order() + g.order() * h.size());
    for (const auto& a : g.vertices()) {
        for (const auto& [x, y] : h.edges())
            edges.emplace_back(VertexLabel(a.first, h.label(x).first),
                               VertexLabel(a.first, h.label(y).first));
    }
    for (const auto& [x, y] : g.edges()) {
        for (const auto& b : h.vertices())
            edges.emplace_back(VertexLabel(g.label(x).first, b.first),
                               VertexLabel(g.label(y).first, b.first));
    }
    return Graph(std::move(vertices), edges);
}

namespace {

std::vector<VertexLabel> numbered(std::size_t n) {
    if (n == 0) throw GraphError("generator needs at least one vertex");
    std::vector<VertexLabel> v;
    for (std::size_t i = 0; i < n; ++i) v.emplace_back(std::to_string(i));
    return v;
}

}  // namespace

Graph make_path(std::size_t n) {
    auto v = numbered(n);
    std::vector<std::pair<VertexLabel, VertexLabel>> e;
    for (std::size_t i = 0; i + 1 < n; ++i) e.emplace_back(v[i], v[i + 1]);
    return Graph(std::move(v), e);
}

Graph make_star(std::size_t n) {
    auto v = numbered(n);
    std::vector<std::pair<VertexLabel, VertexLabel>> e;
    for (std::size_t i = 1; i < n; ++i) e.emplace_back(v[0], v[i]);
    return Graph(std::move(v), e);
}

Graph make_complete(std::size_t n) {
    auto v = numbered(n);
    std::vector<std::pair<VertexLabel, VertexLabel>> e;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) e.emplace_back(v[i], v[j]);
    return Graph(std::move(v), e);
}

Graph make_tree(const std::vector<std::pair<std::string, std::string>>& edges) {
    if (edges.empty()) throw GraphError("tree edge list is empty");
    std::vector<VertexLabel> v;
    std::vector<std::pair<VertexLabel, VertexLabel>> e;
    auto note = [&](const std::string& name) {
        if (name.empty()) throw GraphError("empty vertex name in tree edge list");
        if (std::find(v.begin(), v.end(), VertexLabel(name)) == v.end()) v.emplace_back(name);
    };
    for (const auto& [a, b] : edges) {
        note(a);
        note(b);
        e.emplace_back(a, b);
    }
    Graph g(std::move(v), e);
    if (!g.acyclic()) throw GraphError("tree edge list contains a cycle");
    if (!g.connected()) throw GraphError("tree edge list is not connected");
    return g;
}

bool natural_less(const std::string& a, const std::string& b) {
    auto as_int = [](const std::string& s) -> std::optional<long long> {
        long long value = 0;
        auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
        if (ec != std::errc() || ptr != s.data() + s.size() || s.empty()) return std::nullopt;
        return value;
    };
    auto x = as_int(a);
    auto y = as_int(b);
    if (x && y) return *x < *y;
    if (x.has_value() != y.has_value()) return x.has_value();
    return a < b;
}

}  // namespace scot

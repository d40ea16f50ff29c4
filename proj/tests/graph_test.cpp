#include <gtest/gtest.h>

#include <random>

#include "scot/samples.hpp"
#include "scot/graph.hpp"

using namespace scot;

namespace {

// Floyd-Warshall, kept separate from the BFS in the library.
std::size_t fw_diameter(const Graph& g) {
    const std::size_t n = g.order();
    const std::size_t inf = 1 << 20;
    std::vector<std::vector<std::size_t>> d(n, std::vector<std::size_t>(n, inf));
    for (std::size_t i = 0; i < n; ++i) d[i][i] = 0;
    for (auto [u, v] : g.edges()) d[u][v] = d[v][u] = 1;
    for (std::size_t k = 0; k < n; ++k)
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) d[i][j] = std::min(d[i][j], d[i][k] + d[k][j]);
    std::size_t best = 0;
    for (auto& row : d)
        for (auto x : row) best = std::max(best, x);
    return best;
}

Graph random_tree(std::mt19937_64& rng, std::size_t n) {
    std::vector<std::pair<std::string, std::string>> edges;
    for (std::size_t v = 1; v < n; ++v)
        edges.push_back({"v" + std::to_string(rng() % v), "v" + std::to_string(v)});
    return make_tree(edges);
}

}  // namespace

TEST(Graph, RejectsMalformedInput) {
    EXPECT_THROW(Graph({"a", "a"}, {}), GraphError);
    EXPECT_THROW(Graph({"a"}, {{"a", "a"}}), GraphError);
    EXPECT_THROW(Graph({"a", "b"}, {{"a", "c"}}), GraphError);
    EXPECT_THROW(Graph({"a", "b"}, {{"a", "b"}, {"b", "a"}}), GraphError);
}

TEST(Graph, Properties) {
    Graph h = samples::h_tree();
    EXPECT_EQ(h.order(), 6u);
    EXPECT_EQ(h.size(), 5u);
    EXPECT_TRUE(h.acyclic());
    EXPECT_TRUE(h.connected());
    EXPECT_FALSE(h.complete());
    EXPECT_EQ(h.diameter(), 3u);

    Graph k3 = make_complete(3);
    EXPECT_TRUE(k3.complete());
    EXPECT_FALSE(k3.acyclic());
    EXPECT_EQ(k3.diameter(), 1u);
    EXPECT_EQ(make_complete(1).diameter(), 0u);

    Graph split({"a", "b", "c"}, {{"a", "b"}});
    EXPECT_FALSE(split.connected());
    EXPECT_THROW(split.diameter(), GraphError);
}

TEST(Graph, DiameterMatchesFloydWarshall) {
    std::mt19937_64 rng(7);
    for (int round = 0; round < 50; ++round) {
        Graph t = random_tree(rng, 2 + rng() % 11);
        EXPECT_EQ(t.diameter(), fw_diameter(t));
        Graph p = cartesian_product(t, make_complete(1 + rng() % 4));
        EXPECT_EQ(p.diameter(), fw_diameter(p));
    }
    EXPECT_EQ(samples::roman_tree().diameter(), 6u);
}

TEST(Graph, ProductMatchesAdjacencyRule) {
    Graph g = samples::h_tree();
    Graph h = make_complete(3);
    Graph p = cartesian_product(g, h);
    ASSERT_EQ(p.order(), 18u);
    std::size_t edges = 0;
    for (std::size_t a = 0; a < g.order(); ++a)
        for (std::size_t b = 0; b < h.order(); ++b)
            for (std::size_t c = 0; c < g.order(); ++c)
                for (std::size_t d = 0; d < h.order(); ++d) {
                    bool want = (a == c && h.adjacent(b, d)) || (b == d && g.adjacent(a, c));
                    auto u = p.index({g.label(a).first, h.label(b).first});
                    auto v = p.index({g.label(c).first, h.label(d).first});
                    EXPECT_EQ(p.adjacent(u, v), want);
                    if (want && u < v) ++edges;
                }
    EXPECT_EQ(edges, 33u);
    EXPECT_EQ(p.size(), 33u);
    EXPECT_EQ(p.label(0).str(), "(a,0)");
}

TEST(Graph, ProductRejectsEmptyAndPairOperands) {
    Graph empty({}, {});
    EXPECT_THROW(cartesian_product(empty, make_complete(2)), GraphError);
    Graph p = cartesian_product(make_path(2), make_complete(2));
    EXPECT_THROW(cartesian_product(p, make_complete(2)), GraphError);
}

TEST(Graph, NaturalOrder) {
    EXPECT_TRUE(natural_less("2", "10"));
    EXPECT_TRUE(natural_less("10", "a"));
    EXPECT_TRUE(natural_less("a", "b"));
    EXPECT_FALSE(natural_less("10", "2"));
}

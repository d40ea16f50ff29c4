#include <gtest/gtest.h>

#include "scot/samples.hpp"
#include "scot/topology.hpp"

using namespace scot;

namespace {

BrokerId B(const char* region, ClusterIndex c) { return BrokerId{region, c}; }

std::vector<BrokerId> ids(const ScotTopology& t, const std::vector<BrokerIndex>& v) {
    std::vector<BrokerId> out;
    for (auto b : v) out.push_back(t.broker(b));
    return out;
}

}  // namespace

TEST(Topology, HTreeCounts) {
    auto t = ScotTopology::build(samples::h_tree(), make_complete(3));
    EXPECT_EQ(t.broker_count(), 18u);
    EXPECT_EQ(t.cluster_count(), 3u);
    EXPECT_EQ(t.region_count(), 6u);
    EXPECT_EQ(t.acol_count(), 15u);
    EXPECT_EQ(t.icol_count(), 18u);
    EXPECT_EQ(t.overlay_link_count(), 33u);
    EXPECT_EQ(t.link_count(), 66u);
    EXPECT_EQ(t.product().size(), 33u);
    EXPECT_EQ(topology_summary(t), "18 brokers, 33 links, 3 clusters, 6 regions");
}

TEST(Topology, RomanTreeCounts) {
    auto t = ScotTopology::build(samples::roman_tree(), make_complete(5));
    EXPECT_EQ(t.broker_count(), 75u);
    EXPECT_EQ(t.cluster_count(), 5u);
    EXPECT_EQ(t.region_count(), 15u);
    EXPECT_EQ(t.acol_count(), 70u);
    EXPECT_EQ(t.icol_count(), 150u);
    std::size_t inner = 0;
    for (BrokerIndex b = 0; b < t.broker_count(); ++b) {
        bool spine = false;
        for (const char* r : {"vi", "vii", "viii", "ix", "x"}) spine |= t.region_of(b) == r;
        EXPECT_EQ(t.classify(b) == BrokerKind::Inner, spine) << t.broker(b).str();
        inner += spine;
    }
    EXPECT_EQ(inner, 25u);
}

TEST(Topology, NeighboursOfBroker) {
    auto t = ScotTopology::build(samples::h_tree(), make_complete(3));
    BrokerIndex b0 = t.find(B("b", 0));
    EXPECT_EQ(t.cluster_of(b0), 0u);
    EXPECT_EQ(t.region_of(b0), "b");
    EXPECT_EQ(ids(t, t.primary_neighbours(b0)), (std::vector<BrokerId>{B("a", 0), B("c", 0), B("e", 0)}));
    EXPECT_EQ(ids(t, t.secondary_neighbours(b0)), (std::vector<BrokerId>{B("b", 1), B("b", 2)}));
    for (BrokerIndex b = 0; b < t.broker_count(); ++b) {
        EXPECT_EQ(t.secondary_neighbours(b).size(), 2u);
        EXPECT_EQ(t.classify(b), t.classify(t.find(B(t.region_of(b).c_str(), 0))));
    }
    EXPECT_EQ(t.classify(t.find(B("a", 1))), BrokerKind::Edge);
    EXPECT_EQ(t.classify(t.find(B("e", 2))), BrokerKind::Inner);

    auto p = ScotTopology::build(make_path(2), make_complete(3));
    EXPECT_EQ(ids(p, p.primary_neighbours(p.find(B("0", 0)))), (std::vector<BrokerId>{B("1", 0)}));
}

TEST(Topology, LinkKinds) {
    auto t = ScotTopology::build(samples::path_abc(), make_complete(3));
    BrokerIndex b2 = t.find(B("b", 2));
    LinkIndex l = t.icol_toward(b2, 0);
    EXPECT_EQ(t.link_name(l), "l<(b,2),(b,0)>");
    EXPECT_EQ(t.link(l).kind, LinkKind::iCOL);
    EXPECT_THROW(t.icol_toward(b2, 2), TopologyError);
    EXPECT_THROW(t.icol_toward(b2, 3), TopologyError);
    std::size_t acol = 0, icol = 0;
    for (LinkIndex x = 0; x < t.link_count(); ++x) {
        const auto& r = t.link(x);
        const auto& u = t.broker(r.source);
        const auto& v = t.broker(r.destination);
        if (r.kind == LinkKind::aCOL) {
            ++acol;
            EXPECT_EQ(u.cluster, v.cluster);
        } else {
            ++icol;
            EXPECT_EQ(u.region, v.region);
        }
        EXPECT_TRUE(t.find_link(r.destination, r.source).has_value());
    }
    EXPECT_EQ(acol, 2 * t.acol_count());
    EXPECT_EQ(icol, 2 * t.icol_count());
}

TEST(Topology, PropertyViolations) {
    EXPECT_THROW(ScotTopology::build(make_complete(3), make_complete(3)), AcyclicPropertyViolation);
    Graph split({"a", "b", "c"}, {{"a", "b"}});
    EXPECT_THROW(ScotTopology::build(split, make_complete(2)), TopologyError);
    EXPECT_THROW(ScotTopology::build(make_path(3), make_path(3)), ConnectivityPropertyViolation);

    Graph cf({"x", "y"}, {{"x", "y"}});
    auto relabelled = ScotTopology::build(make_path(2), cf);
    EXPECT_EQ(relabelled.original_cluster_label(0), "x");
    EXPECT_EQ(relabelled.cluster_from_label("y"), 1u);
    EXPECT_THROW(ScotTopology::build(make_path(2), cf, {.strict_index = true}), IndexPropertyViolation);
}

TEST(Topology, SingleBroker) {
    auto t = ScotTopology::build(make_path(1), make_complete(1));
    EXPECT_EQ(t.broker_count(), 1u);
    EXPECT_EQ(t.link_count(), 0u);
    EXPECT_EQ(t.classify(0), BrokerKind::Edge);
}

TEST(Topology, ParseBrokerId) {
    EXPECT_EQ(parse_broker_id("(b,2)"), B("b", 2));
    EXPECT_EQ(parse_broker_id("b,2"), B("b", 2));
    EXPECT_EQ(parse_broker_id("B(b, 2)"), B("b", 2));
    EXPECT_THROW(parse_broker_id("(b)"), Error);
    auto t = ScotTopology::build(samples::h_tree(), make_complete(3));
    EXPECT_THROW(t.find(B("z", 0)), UnknownBroker);
}

TEST(Topology, HopDistance) {
    auto t = ScotTopology::build(samples::h_tree(), make_complete(3));
    EXPECT_EQ(t.hop_distance(t.find(B("a", 0)), t.find(B("f", 2))), 4u);
    EXPECT_EQ(t.product().diameter(), t.af_diameter() + 1);
}

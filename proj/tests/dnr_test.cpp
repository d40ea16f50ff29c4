#include <gtest/gtest.h>

#include <set>

#include "overlay.hpp"
#include "scot/error.hpp"
#include "scot/samples.hpp"

using namespace scot;
using scot::testing::Overlay;

namespace {

BrokerId B(const char* region, ClusterIndex c) { return BrokerId{region, c}; }

class ThreeByThree : public ::testing::Test {
protected:
    ScotTopology t = ScotTopology::build(samples::path_abc(), make_complete(3));
    FixedLinkStatus lst;

    void overload(BrokerId from, BrokerId to, std::size_t q = 20) {
        lst.set(t.link_between(from, to), {true, q});
    }
    void queue(BrokerId from, BrokerId to, std::size_t q) {
        lst.set(t.link_between(from, to), {false, q});
    }

    std::vector<BrokerId> path_of(const scot::testing::Flow& f, ClientId c) {
        std::vector<BrokerId> out;
        for (auto b : f.deliveries.at(c).at(0).path) out.push_back(t.broker(b));
        return out;
    }

    void expect_all_delivered_once(const scot::testing::Flow& f, std::size_t n) {
        EXPECT_EQ(f.deliveries.size(), n);
        for (const auto& [c, d] : f.deliveries) EXPECT_EQ(d.size(), 1u) << c;
    }
};

}  // namespace

TEST_F(ThreeByThree, UnoverloadedIcolCarriesCbv) {
    Overlay o(t, RoutingMode::Clustered);
    o.subscribe(B("c", 0), 1, "x eq 1");
    o.subscribe(B("c", 1), 2, "x eq 1");
    o.subscribe(B("a", 2), 3, "x eq 1");
    o.subscribe(B("c", 2), 4, "x eq 1");
    overload(B("b", 2), B("b", 0));
    o.set_status(&lst);

    auto snr = o.publish(B("b", 2), "x=1", Overlay::Notify::Snr);
    EXPECT_EQ(snr.ims, 6u);
    auto dnr = o.publish(B("b", 2), "x=1", Overlay::Notify::Dnr);
    EXPECT_EQ(dnr.ims, 6u);
    expect_all_delivered_once(dnr, 4);
    EXPECT_EQ(dnr.decisions[0].dnr_case, DnrCase::UnoverloadedIcol);
    EXPECT_EQ(dnr.decisions[0].cbv_p->str(), "001");
    EXPECT_EQ(path_of(dnr, 1), (std::vector<BrokerId>{B("b", 2), B("b", 1), B("b", 0), B("c", 0)}));
    EXPECT_EQ(dnr.link_use.count({t.find(B("b", 2)), t.find(B("b", 0))}), 0u);
}

TEST_F(ThreeByThree, OverloadedIcolsShiftToAcol) {
    Overlay o(t, RoutingMode::Clustered);
    o.subscribe(B("c", 0), 1, "x eq 1");
    o.subscribe(B("c", 1), 2, "x eq 1");
    o.subscribe(B("a", 2), 3, "x eq 1");
    o.subscribe(B("c", 2), 4, "x eq 1");
    overload(B("b", 2), B("b", 0));
    overload(B("b", 2), B("b", 1));
    queue(B("b", 2), B("a", 2), 3);
    o.set_status(&lst);

    EXPECT_EQ(o.publish(B("b", 2), "x=1", Overlay::Notify::Snr).ims, 6u);
    auto dnr = o.publish(B("b", 2), "x=1", Overlay::Notify::Dnr);
    EXPECT_EQ(dnr.ims, 4u);
    expect_all_delivered_once(dnr, 4);
    const auto& host = dnr.decisions[0];
    EXPECT_EQ(host.dnr_case, DnrCase::AllIcolsOverloaded);
    EXPECT_EQ(host.cbv_p->str(), "011");
    EXPECT_EQ(*host.cbv_carrier, t.link_between(B("b", 2), B("c", 2)));
}

TEST_F(ThreeByThree, AllTargetsOverloaded) {
    Overlay o(t, RoutingMode::Clustered);
    o.subscribe(B("a", 0), 1, "x eq 1");
    o.subscribe(B("c", 1), 2, "x eq 1");
    o.subscribe(B("c", 2), 3, "x eq 1");
    o.subscribe(B("c", 2), 4, "x eq 1");
    overload(B("b", 2), B("b", 0), 30);
    overload(B("b", 2), B("b", 1), 10);
    overload(B("b", 2), B("c", 2), 5);
    overload(B("b", 1), B("b", 0));
    overload(B("c", 1), B("c", 0));
    o.set_status(&lst);

    auto snr = o.publish(B("b", 2), "x=1", Overlay::Notify::Snr);
    EXPECT_EQ(snr.ims, 5u);
    auto dnr = o.publish(B("b", 2), "x=1", Overlay::Notify::Dnr);
    expect_all_delivered_once(dnr, 4);
    EXPECT_EQ(dnr.ims, 6u);
    EXPECT_EQ(dnr.decisions[0].dnr_case, DnrCase::AllTargetsOverloaded);
    EXPECT_EQ(path_of(dnr, 1), (std::vector<BrokerId>{B("b", 2), B("b", 1), B("c", 1), B("c", 0),
                                                      B("b", 0), B("a", 0)}));
    EXPECT_EQ(dnr.link_use.count({t.find(B("c", 1)), t.find(B("c", 0))}), 1u);
}

TEST_F(ThreeByThree, NoCongestionMatchesSnr) {
    Overlay o(t, RoutingMode::Clustered);
    o.subscribe(B("a", 0), 1, "x eq 1");
    o.subscribe(B("c", 1), 2, "x eq 1");
    o.subscribe(B("b", 2), 3, "x eq 1");
    auto snr = o.publish(B("b", 2), "x=1", Overlay::Notify::Snr);
    auto dnr = o.publish(B("b", 2), "x=1", Overlay::Notify::Dnr);
    EXPECT_EQ(snr.ims, dnr.ims);
    EXPECT_EQ(snr.link_use, dnr.link_use);
    for (const auto& d : dnr.decisions) EXPECT_EQ(d.dnr_case, DnrCase::Static);
}

TEST_F(ThreeByThree, OwnClusterBitIsRejected) {
    RoutingTable rt;
    BrokerIndex b1 = t.find(B("b", 1));
    RouteContext ctx{t.view(b1), rt, nullptr, RoutingMode::Clustered};
    auto n = std::make_shared<Notification>();
    n->content = parse_content("x=1");
    ClusterBitVector cbv(3);
    cbv.set_bit(1);
    NotificationMessage m{n, cbv, false, 1};
    EXPECT_THROW(scot_dnr(ctx, m, NextHop::via(t.icol_toward(b1, 2))), ProtocolViolation);
}

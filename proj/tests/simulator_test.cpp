#include <gtest/gtest.h>

#include "scot/error.hpp"
#include "scot/samples.hpp"
#include "scot/simulator.hpp"

using namespace scot;

namespace {

BrokerId B(const char* region, ClusterIndex c) { return BrokerId{region, c}; }

SubscribeRequest sub(const ScotTopology& t, BrokerId at, ClientId c, const char* f, Tick when = 0) {
    return {when, t.find(at), c, parse_filter(f)};
}

PublishRequest pub(const ScotTopology& t, BrokerId at, ClientId c, const char* n, Tick when) {
    return {when, t.find(at), c, parse_content(n)};
}

}  // namespace

TEST(Congestion, ThresholdEvaluations) {
    LinkStatusRecord lsr;
    EXPECT_FALSE(congested(lsr, 0, 10));
    lsr.last_ce = congestion_element(10, 10);
    EXPECT_TRUE(congested(lsr, 20, 10));
    lsr.last_ce = congestion_element(0, 4);
    EXPECT_DOUBLE_EQ(lsr.last_ce, 0.2);
    EXPECT_FALSE(congested(lsr, 5, 10));
    lsr.last_ce = congestion_element(1000, 0);
    EXPECT_FALSE(congested(lsr, 0, 10));
}

TEST(Congestion, WindowRoll) {
    LinkStatusRecord lsr;
    roll_window(lsr, 0, 10);
    EXPECT_DOUBLE_EQ(lsr.last_ce, 1.0);
    lsr.q_in = 100;
    lsr.q_out = 50;
    roll_window(lsr, 8, 10);
    EXPECT_DOUBLE_EQ(lsr.last_ce, 101.0 / 51.0);
    EXPECT_GT(lsr.last_ce, 1.0);
    EXPECT_TRUE(lsr.congested_flag);
    EXPECT_EQ(lsr.q_in, 0u);
    EXPECT_EQ(lsr.q_out, 0u);
    lsr.q_out = 60;
    roll_window(lsr, 8, 10);
    EXPECT_DOUBLE_EQ(lsr.last_ce, 1.0 / 61.0);
    EXPECT_FALSE(lsr.congested_flag);
}

TEST(Simulator, EmptyWorkload) {
    auto t = ScotTopology::build(samples::h_tree(), make_complete(3));
    auto r = simulate(t, SimConfig{}, Workload{});
    EXPECT_EQ(r.total_ims(), 0u);
    EXPECT_EQ(r.delivery_count(), 0u);
    EXPECT_EQ(r.events, 0u);
}

TEST(Simulator, FifoServiceSpacing) {
    auto t = ScotTopology::build(make_path(2), make_complete(1));
    SimConfig cfg;
    cfg.link.latency = 4;
    Workload w;
    w.subscriptions.push_back(sub(t, B("1", 0), 1, "k eq 1"));
    for (int i = 0; i < 3; ++i) w.publications.push_back(pub(t, B("0", 0), 2, "k=1", 100));
    auto r = simulate(t, cfg, w);
    ASSERT_EQ(r.delivery_count(), 3u);
    EXPECT_EQ(r.notifications[0].deliveries[0].delivered, 104);
    EXPECT_EQ(r.notifications[1].deliveries[0].delivered, 105);
    EXPECT_EQ(r.notifications[2].deliveries[0].delivered, 106);
    for (const auto& l : r.links) EXPECT_EQ(l.enqueued, l.serviced);
}

TEST(Simulator, FractionalServiceRate) {
    auto t = ScotTopology::build(make_path(2), make_complete(1));
    SimConfig cfg;
    cfg.link.latency = 1;
    cfg.link.service_rate = 0.5;
    Workload w;
    w.subscriptions.push_back(sub(t, B("1", 0), 1, "k eq 1"));
    for (int i = 0; i < 3; ++i) w.publications.push_back(pub(t, B("0", 0), 2, "k=1", 10));
    auto r = simulate(t, cfg, w);
    EXPECT_EQ(r.notifications[0].deliveries[0].delivered, 11);
    EXPECT_EQ(r.notifications[1].deliveries[0].delivered, 13);
    EXPECT_EQ(r.notifications[2].deliveries[0].delivered, 15);
}

TEST(Simulator, HTreeDelaysAreHopsTimesLatency) {
    auto t = ScotTopology::build(samples::h_tree(), make_complete(3));
    SimConfig cfg;
    cfg.link.latency = 3;
    Workload w;
    w.subscriptions = {sub(t, B("a", 0), 1, "x ge 2"), sub(t, B("f", 0), 2, "x ge 2"),
                       sub(t, B("f", 1), 3, "x neq 2"), sub(t, B("a", 2), 4, "x ge 2")};
    w.publications = {pub(t, B("f", 2), 11, "x=3", 1000), pub(t, B("f", 1), 12, "x=2", 2000),
                      pub(t, B("a", 1), 13, "x=1", 3000)};
    auto r = simulate(t, cfg, w);
    std::vector<std::vector<ClientId>> expect = {{1, 2, 3, 4}, {1, 2, 4}, {3}};
    for (std::size_t i = 0; i < 3; ++i) {
        const auto& n = r.notifications[i];
        std::vector<ClientId> got;
        for (const auto& d : n.deliveries) {
            got.push_back(d.subscriber);
            EXPECT_EQ(d.delivered - n.issued, 3 * static_cast<Tick>(d.hops));
            EXPECT_LE(d.hops, t.af_diameter() + 1);
        }
        EXPECT_EQ(got, expect[i]);
    }
    EXPECT_EQ(r.subscription_ims, 4u * (5 + 6 * 2));
    EXPECT_EQ(r.link_revisits, 0u);
}

TEST(Simulator, SubscriptionCountsOnRomanOverlay) {
    auto t = ScotTopology::build(samples::roman_tree(), make_complete(5));
    Workload w;
    for (BrokerIndex b = 0; b < t.broker_count(); b += 5)
        w.subscriptions.push_back({static_cast<Tick>(b), b, b, parse_filter("x eq 1")});
    SimConfig cfg;
    auto clustered = simulate(t, cfg, w);
    for (const auto& s : clustered.subscriptions) {
        EXPECT_EQ(s.ims, 74u);
        EXPECT_EQ(s.duplicates, 0u);
        EXPECT_LE(s.max_hops, t.af_diameter() + 1);
    }
    cfg.mode = Mode::Bid;
    auto flooded = simulate(t, cfg, w);
    for (const auto& s : flooded.subscriptions) {
        EXPECT_EQ(s.ims, 366u);
        EXPECT_EQ(s.duplicates, 292u);
    }
}

TEST(Simulator, HighRatePublisherBuildsQueue) {
    auto t = ScotTopology::build(make_path(2), make_complete(1));
    SimConfig cfg;
    cfg.link.service_rate = 0.5;
    Workload w;
    w.subscriptions.push_back(sub(t, B("1", 0), 1, "k eq 1"));
    for (int i = 0; i < 200; ++i) w.publications.push_back(pub(t, B("0", 0), 2, "k=1", 100 + i));
    auto r = simulate(t, cfg, w);
    LinkIndex l = t.link_between(B("0", 0), B("1", 0));
    // Input one per tick, service one per two ticks: the backlog grows by
    // half a copy per tick for the 200-tick burst.
    EXPECT_EQ(r.links[l].max_queue, 100u);
    EXPECT_GT(r.links[l].congested_windows, 0u);
    bool any_congested = false;
    for (const auto& row : r.windows) any_congested |= row.congested;
    EXPECT_TRUE(any_congested);
}

TEST(Simulator, NoCongestionBelowServiceRate) {
    auto t = ScotTopology::build(samples::h_tree(), make_complete(3));
    Workload w;
    for (ClientId c = 0; c < 18; ++c)
        w.subscriptions.push_back({0, c, c, parse_filter("k eq 1")});
    for (int i = 0; i < 100; ++i)
        w.publications.push_back({static_cast<Tick>(1000 + 20 * i), static_cast<BrokerIndex>(i % 18),
                                  static_cast<ClientId>(100 + i % 18), parse_content("k=1")});
    SimConfig cfg;
    cfg.mode = Mode::Dnr;
    cfg.publish_after_subscriptions = true;
    auto r = simulate(t, cfg, w);
    for (const auto& l : r.links) EXPECT_EQ(l.congested_windows, 0u);
    EXPECT_EQ(r.delivery_count(), 100u * 18);
    EXPECT_EQ(r.dnr_cases.count("case1"), 0u);
    EXPECT_GT(r.publish_offset, 0);
}

TEST(Simulator, BudgetExhaustionThrows) {
    auto t = ScotTopology::build(samples::h_tree(), make_complete(3));
    Workload w;
    w.subscriptions.push_back({0, 0, 0, parse_filter("k eq 1")});
    SimConfig cfg;
    cfg.event_budget = 5;
    EXPECT_THROW(simulate(t, cfg, w), TimeoutError);
}

TEST(Simulator, Deterministic) {
    auto t = ScotTopology::build(samples::h_tree(), make_complete(3));
    Workload w;
    for (ClientId c = 0; c < 18; ++c)
        w.subscriptions.push_back({c, c, c, parse_filter(c % 2 ? "k eq 1" : "k neq 1")});
    for (int i = 0; i < 50; ++i)
        w.publications.push_back({static_cast<Tick>(i), static_cast<BrokerIndex>(i % 18), 100,
                                  parse_content(i % 3 ? "k=1" : "k=2")});
    SimConfig cfg;
    cfg.mode = Mode::Dnr;
    cfg.link.service_rate = 0.25;
    auto a = simulate(t, cfg, w);
    auto b = simulate(t, cfg, w);
    EXPECT_EQ(messages_csv(a), messages_csv(b));
    EXPECT_EQ(links_csv(t, a), links_csv(t, b));
    EXPECT_EQ(summary_text(t, a), summary_text(t, b));
}

TEST(Simulator, ProcessingDelay) {
    auto t = ScotTopology::build(make_path(3), make_complete(1));
    SimConfig cfg;
    cfg.processing.per_message = 2;
    Workload w;
    w.subscriptions.push_back(sub(t, B("2", 0), 1, "k eq 1"));
    w.publications.push_back(pub(t, B("0", 0), 2, "k=1", 100));
    auto r = simulate(t, cfg, w);
    // Three brokers each charge two ticks; two hops of one tick each.
    EXPECT_EQ(r.notifications[0].deliveries[0].delivered, 108);
}

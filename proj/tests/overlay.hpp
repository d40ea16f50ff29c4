#pragma once

// Synchronous breadth-first driver over the routing engines, with no
// queues or clock. Tests use it to check routing decisions independently
// of the simulator.

#include <deque>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "scot/routing.hpp"
#include "scot/topology.hpp"

namespace scot::testing {

struct Delivery {
    std::vector<BrokerIndex> path;
};

struct Flow {
    std::size_t ims = 0;
    std::size_t duplicates = 0;
    std::map<ClientId, std::vector<Delivery>> deliveries;
    std::vector<RouteDecision> decisions;
    std::map<std::pair<BrokerIndex, BrokerIndex>, std::size_t> link_use;
};

class Overlay {
public:
    enum class Notify { Bid, Snr, Dnr };

    Overlay(const ScotTopology& t, RoutingMode mode) : t_(t), mode_(mode), rts_(t.broker_count()) {}

    void set_status(const LinkStatusView* lst) { lst_ = lst; }
    const RoutingTable& rt(BrokerIndex b) const { return rts_[b]; }

    Flow subscribe(const BrokerId& host, ClientId client, const std::string& filter) {
        auto sub = std::make_shared<Subscription>();
        BrokerIndex h = t_.find(host);
        sub->id = SubscriptionId{h, seq_[h]++};
        sub->subscriber = client;
        sub->filter = parse_filter(filter);
        Flow flow;
        struct Item {
            BrokerIndex at;
            SubscriptionMessage msg;
            NextHop sender;
        };
        std::deque<Item> q;
        SubscriptionMessage m;
        m.subscription = sub;
        q.push_back({h, m, NextHop::local(client)});
        while (!q.empty()) {
            Item it = std::move(q.front());
            q.pop_front();
            RouteContext ctx{t_.view(it.at), rts_[it.at], lst_, mode_};
            RouteDecision d;
            auto out = mode_ == RoutingMode::Clustered ? scot_sbp(ctx, it.msg, it.sender, &d)
                                                       : flood_sbp(ctx, it.msg, it.sender, &d);
            if (d.duplicate) ++flow.duplicates;
            for (auto& dst : out) {
                ++flow.ims;
                const auto& ref = t_.link(dst.next.link);
                ++flow.link_use[{ref.source, ref.destination}];
                q.push_back({ref.destination, dst.message,
                             NextHop::via(*t_.find_link(ref.destination, ref.source))});
            }
        }
        return flow;
    }

    Flow publish(const BrokerId& host, const std::string& content, Notify how) {
        auto n = std::make_shared<Notification>();
        n->content = parse_content(content);
        Flow flow;
        struct Item {
            BrokerIndex at;
            NotificationMessage msg;
            NextHop sender;
            std::vector<BrokerIndex> path;
        };
        std::deque<Item> q;
        BrokerIndex h = t_.find(host);
        q.push_back({h, NotificationMessage{n, {}, true, 0}, NextHop::local(9999), {h}});
        while (!q.empty()) {
            Item it = std::move(q.front());
            q.pop_front();
            RouteContext ctx{t_.view(it.at), rts_[it.at], lst_, mode_};
            RouteDecision d;
            DestinationList<NotificationMessage> out;
            switch (how) {
                case Notify::Bid: out = pub_bid(ctx, it.msg, it.sender, &d); break;
                case Notify::Snr: out = scot_snr(ctx, it.msg, it.sender, &d); break;
                case Notify::Dnr: out = scot_dnr(ctx, it.msg, it.sender, &d); break;
            }
            flow.decisions.push_back(d);
            for (auto& dst : out) {
                if (dst.next.is_local()) {
                    flow.deliveries[dst.next.client].push_back({it.path});
                    continue;
                }
                ++flow.ims;
                const auto& ref = t_.link(dst.next.link);
                ++flow.link_use[{ref.source, ref.destination}];
                auto path = it.path;
                path.push_back(ref.destination);
                q.push_back({ref.destination, dst.message,
                             NextHop::via(*t_.find_link(ref.destination, ref.source)), path});
            }
        }
        return flow;
    }

private:
    const ScotTopology& t_;
    RoutingMode mode_;
    std::vector<RoutingTable> rts_;
    const LinkStatusView* lst_ = nullptr;
    std::map<BrokerIndex, std::uint32_t> seq_;
};

}  // namespace scot::testing

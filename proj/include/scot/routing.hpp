#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <vector>

#include "scot/messages.hpp"
#include "scot/routing_table.hpp"

namespace scot {

enum class RoutingMode : std::uint8_t { Clustered, Unclustered };

// Read side of a broker's Link Status Table.
class LinkStatusView {
public:
    virtual ~LinkStatusView() = default;
    virtual bool overloaded(LinkIndex link) const = 0;
    virtual std::size_t queue_length(LinkIndex link) const = 0;
};

class UncongestedLinks final : public LinkStatusView {
public:
    bool overloaded(LinkIndex) const override { return false; }
    std::size_t queue_length(LinkIndex) const override { return 0; }
};

// Fixed per-link status, for fixtures and tests.
class FixedLinkStatus final : public LinkStatusView {
public:
    struct Status {
        bool overloaded = false;
        std::size_t queue_length = 0;
    };

    void set(LinkIndex link, Status status) { status_[link] = status; }
    bool overloaded(LinkIndex link) const override;
    std::size_t queue_length(LinkIndex link) const override;

private:
    std::map<LinkIndex, Status> status_;
};

struct RouteContext {
    const BrokerView& view;
    RoutingTable& rt;
    const LinkStatusView* lst = nullptr;
    RoutingMode mode = RoutingMode::Clustered;
};

template <class Message>
struct Destination {
    Message message;
    NextHop next;
};

template <class Message>
using DestinationList = std::vector<Destination<Message>>;

enum class DnrCase : std::uint8_t {
    Static,                // no CBV_p left to place
    UnoverloadedIcol,      // Case I
    AllIcolsOverloaded,    // Case II
    AllTargetsOverloaded,  // Case III
    Carried,               // CBV_p rides an overloaded aCOL, no target iCOL here
    Dropped,               // CBV_p bits with no copy to ride on
};

const char* to_string(DnrCase c);

// What a routing call decided, beyond the destination list.
struct RouteDecision {
    bool duplicate = false;
    bool matched = false;  // content matching was run
    std::size_t entries_scanned = 0;
    MatchDiagnostics match;

    DnrCase dnr_case = DnrCase::Static;
    std::vector<LinkIndex> targets;           // mu
    std::vector<LinkIndex> overloaded_icols;  // eta1
    std::optional<LinkIndex> cbv_carrier;
    std::optional<ClusterBitVector> cbv_p;
    std::size_t unresolved_bits = 0;
};

// Clustered subscription broadcast: PRIMARY copies inside the host
// cluster, SECONDARY copies one iCOL out, and every broker stores the
// subscription exactly once.
DestinationList<SubscriptionMessage> scot_sbp(RouteContext& ctx, SubscriptionMessage s,
                                              NextHop sender, RouteDecision* decision = nullptr);

// Unclustered flooding with BIDs. A second arrival of the same
// subscription is discarded (decision->duplicate).
DestinationList<SubscriptionMessage> flood_sbp(RouteContext& ctx, SubscriptionMessage s,
                                               NextHop sender, RouteDecision* decision = nullptr);

// BID-list notification routing. Only the publisher's host broker matches
// content; everybody else splits the BID list by stored last hop.
DestinationList<NotificationMessage> pub_bid(const RouteContext& ctx, NotificationMessage n,
                                             NextHop sender, RouteDecision* decision = nullptr);

// Static notification routing over subscription trees.
DestinationList<NotificationMessage> scot_snr(const RouteContext& ctx, NotificationMessage n,
                                              NextHop sender, RouteDecision* decision = nullptr);

// Inter-cluster dynamic notification routing with CBV_p.
DestinationList<NotificationMessage> scot_dnr(const RouteContext& ctx, NotificationMessage n,
                                              NextHop sender, RouteDecision* decision = nullptr);

}  // namespace scot

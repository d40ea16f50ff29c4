#pragma once

#include <compare>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "scot/cbv.hpp"
#include "scot/content.hpp"
#include "scot/topology.hpp"

namespace scot {

using ClientId = std::uint32_t;
using Tick = std::int64_t;

// Issuing broker plus a per-broker sequence number. Doubles as the BID
// token carried by notifications in unclustered routing.
struct SubscriptionId {
    BrokerIndex host = 0;
    std::uint32_t seq = 0;

    auto operator<=>(const SubscriptionId&) const = default;
    bool operator==(const SubscriptionId&) const = default;
};

struct Subscription {
    SubscriptionId id;
    ClientId subscriber = 0;
    Filter filter;
};

enum class SubscriptionState : std::uint8_t { Primary, Secondary };

const char* to_string(SubscriptionState s);

// One in-flight copy of a subscription.
struct SubscriptionMessage {
    std::shared_ptr<const Subscription> subscription;
    SubscriptionState state = SubscriptionState::Primary;
    ClusterBitVector cbv_s;
    bool host_broker = true;
    std::optional<SubscriptionId> bid;
    std::uint32_t hops = 0;
};

struct Notification {
    std::uint64_t id = 0;
    ClientId publisher = 0;
    Tick issued = 0;
    Content content;
};

using BidList = std::vector<SubscriptionId>;

// Routing header: nothing, a BID list (unclustered) or CBV_p (clustered
// dynamic routing). Never both.
using NotificationHeader = std::variant<std::monostate, BidList, ClusterBitVector>;

struct NotificationMessage {
    std::shared_ptr<const Notification> notification;
    NotificationHeader header;
    bool host_broker = true;
    std::uint32_t hops = 0;

    const BidList* bids() const { return std::get_if<BidList>(&header); }
    const ClusterBitVector* cbv_p() const { return std::get_if<ClusterBitVector>(&header); }
    // Attaches CBV_p, or drops the header when every bit is zero.
    void set_cbv_p(const ClusterBitVector& cbv);
};

// Where a message goes next (or came from): an outgoing overlay link, or a
// client hosted by this broker.
struct NextHop {
    LinkIndex link = kNoLink;
    ClientId client = 0;

    static NextHop local(ClientId c) { return NextHop{kNoLink, c}; }
    static NextHop via(LinkIndex l) { return NextHop{l, 0}; }

    bool is_local() const { return link == kNoLink; }
    bool operator==(const NextHop&) const = default;
};

}  // namespace scot

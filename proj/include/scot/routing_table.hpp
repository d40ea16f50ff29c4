#pragma once

#include <map>
#include <memory>
#include <optional>
#include <span>
#include <vector>

#include "scot/messages.hpp"

namespace scot {

// {subscription, last hop, CBV_s} in clustered mode; {subscription, last
// hop, BID} in unclustered mode.
struct RoutingTableEntry {
    std::shared_ptr<const Subscription> subscription;
    NextHop last_hop;
    std::optional<ClusterBitVector> cbv_s;
    std::optional<SubscriptionId> bid;

    const SubscriptionId& id() const { return subscription->id; }
    // PRIMARY iff the set CBV_s bit is the storing broker's cluster.
    SubscriptionState state_at(ClusterIndex own_cluster) const;
    // Cluster hosting the subscriber, from CBV_s.
    std::optional<ClusterIndex> host_cluster() const;
};

// Per-broker table. Iterates in insertion order.
class RoutingTable {
public:
    bool contains(const SubscriptionId& id) const { return index_.count(id) != 0; }
    const RoutingTableEntry* find(const SubscriptionId& id) const;

    // Throws ProtocolViolation when the id is already stored.
    void insert(RoutingTableEntry entry);

    std::span<const RoutingTableEntry> entries() const { return entries_; }
    std::size_t size() const { return entries_.size(); }
    bool empty() const { return entries_.empty(); }

private:
    std::vector<RoutingTableEntry> entries_;
    std::map<SubscriptionId, std::size_t> index_;
};

using EntryList = std::vector<const RoutingTableEntry*>;

// Entries whose subscription matches `n`, in insertion order.
EntryList match_all(const RoutingTable& rt, const Content& n, MatchDiagnostics* diag = nullptr);

enum class HopFilter : std::uint8_t { All, AcolOnly };

// Deduplicated last hops in first-seen order. Local hops are kept one per
// hosted subscriber. AcolOnly drops entries that point over an iCOL.
// `exclude` removes the link the message arrived on.
std::vector<NextHop> distinct_next_hops(std::span<const RoutingTableEntry* const> entries,
                                        HopFilter filter, const BrokerView& view,
                                        std::optional<LinkIndex> exclude = std::nullopt);

}  // namespace scot

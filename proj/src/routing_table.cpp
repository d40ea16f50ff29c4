#include "scot/routing_table.hpp"

#include <algorithm>

#include <fmt/format.h>

#include "scot/error.hpp"

namespace scot {

const char* to_string(SubscriptionState s) {
    return s == SubscriptionState::Primary ? "PRIMARY" : "SECONDARY";
}

void NotificationMessage::set_cbv_p(const ClusterBitVector& cbv) {
    if (cbv.is_empty())
        header = std::monostate{};
    else
        header = cbv;
}

SubscriptionState RoutingTableEntry::state_at(ClusterIndex own_cluster) const {
    auto host = host_cluster();
    return host && *host == own_cluster ? SubscriptionState::Primary : SubscriptionState::Secondary;
}

std::optional<ClusterIndex> RoutingTableEntry::host_cluster() const {
    if (!cbv_s) return std::nullopt;
    auto bits = cbv_s->set_indexes();
    if (bits.size() != 1) return std::nullopt;
    return static_cast<ClusterIndex>(bits.front());
}

const RoutingTableEntry* RoutingTable::find(const SubscriptionId& id) const {
    auto it = index_.find(id);
    return it == index_.end() ? nullptr : &entries_[it->second];
}

void RoutingTable::insert(RoutingTableEntry entry) {
    const SubscriptionId id = entry.id();
    if (!index_.emplace(id, entries_.size()).second)
        throw ProtocolViolation(
            fmt::format("subscription {}:{} stored twice in one routing table", id.host, id.seq));
    entries_.push_back(std::move(entry));
}

EntryList match_all(const RoutingTable& rt, const Content& n, MatchDiagnostics* diag) {
    EntryList out;
    for (const auto& e : rt.entries())
        if (matches(n, e.subscription->filter, diag)) out.push_back(&e);
    return out;
}

std::vector<NextHop> distinct_next_hops(std::span<const RoutingTableEntry* const> entries,
                                        HopFilter filter, const BrokerView& view,
                                        std::optional<LinkIndex> exclude) {
    std::vector<NextHop> out;
    for (const RoutingTableEntry* e : entries) {
        const NextHop& hop = e->last_hop;
        if (!hop.is_local()) {
            if (exclude && hop.link == *exclude) continue;
            if (filter == HopFilter::AcolOnly && view.kind_of(hop.link) != LinkKind::aCOL) continue;
        }
        if (std::find(out.begin(), out.end(), hop) == out.end()) out.push_back(hop);
    }
    return out;
}

}  // namespace scot

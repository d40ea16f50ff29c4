#include "scot/routing.hpp"

#include <algorithm>

#include <fmt/format.h>

#include "scot/error.hpp"

namespace scot {

bool FixedLinkStatus::overloaded(LinkIndex link) const {
    auto it = status_.find(link);
    return it != status_.end() && it->second.overloaded;
}

std::size_t FixedLinkStatus::queue_length(LinkIndex link) const {
    auto it = status_.find(link);
    return it == status_.end() ? 0 : it->second.queue_length;
}

const char* to_string(DnrCase c) {
    switch (c) {
        case DnrCase::Static: return "static";
        case DnrCase::UnoverloadedIcol: return "case1";
        case DnrCase::AllIcolsOverloaded: return "case2";
        case DnrCase::AllTargetsOverloaded: return "case3";
        case DnrCase::Carried: return "carried";
        case DnrCase::Dropped: return "dropped";
    }
    return "?";
}

namespace {

void require_mode(const RouteContext& ctx, RoutingMode want, const char* what) {
    if (ctx.mode != want)
        throw ProtocolViolation(fmt::format("{} called on a broker in {} mode", what,
                                            ctx.mode == RoutingMode::Clustered ? "clustered"
                                                                               : "unclustered"));
}

std::optional<LinkIndex> sender_link(NextHop sender) {
    if (sender.is_local()) return std::nullopt;
    return sender.link;
}

// The link a message arrived on is the reverse of the sender's outgoing
// link, so `sender` here names our own outgoing link back to it.
bool is_sender(const NeighbourLink& n, NextHop sender) {
    return !sender.is_local() && n.link == sender.link;
}

const LinkStatusView& status_of(const RouteContext& ctx) {
    static const UncongestedLinks none;
    return ctx.lst ? *ctx.lst : none;
}

void record_match(RouteDecision* d, const RoutingTable& rt, const MatchDiagnostics& diag) {
    if (!d) return;
    d->matched = true;
    d->entries_scanned += rt.size();
    d->match.evaluations += diag.evaluations;
    d->match.type_mismatches += diag.type_mismatches;
}

// Prefers links that are not overloaded, then the shortest queue, then the
// smallest destination broker id.
std::optional<LinkIndex> pick_link(const std::vector<LinkIndex>& links, const BrokerView& view,
                                   const LinkStatusView& lst) {
    std::optional<LinkIndex> best;
    for (LinkIndex l : links) {
        if (!best) {
            best = l;
            continue;
        }
        auto key = [&](LinkIndex x) {
            return std::make_tuple(lst.overloaded(x), lst.queue_length(x),
                                   std::cref(view.outgoing(x).destination_id));
        };
        if (key(l) < key(*best)) best = l;
    }
    return best;
}

}  // namespace

DestinationList<SubscriptionMessage> scot_sbp(RouteContext& ctx, SubscriptionMessage s,
                                              NextHop sender, RouteDecision*) {
    require_mode(ctx, RoutingMode::Clustered, "scot_sbp");
    const BrokerView& view = ctx.view;
    if (s.host_broker) {
        s.cbv_s = ClusterBitVector(view.cluster_count());
        s.cbv_s.set_bit(view.cluster());
        s.state = SubscriptionState::Primary;
        s.host_broker = false;
    } else if (s.state == SubscriptionState::Primary && !s.cbv_s.test(view.cluster())) {
        throw ProtocolViolation(fmt::format("PRIMARY copy of a subscription from cluster {} at {}",
                                            s.cbv_s.str(), view.id().str()));
    }

    ctx.rt.insert(RoutingTableEntry{s.subscription, sender, s.cbv_s, std::nullopt});

    DestinationList<SubscriptionMessage> out;
    if (s.state != SubscriptionState::Primary) return out;
    for (const auto& n : view.primary()) {
        if (is_sender(n, sender)) continue;
        SubscriptionMessage copy = s;
        copy.state = SubscriptionState::Primary;
        out.push_back({std::move(copy), NextHop::via(n.link)});
    }
    for (const auto& n : view.secondary()) {
        if (is_sender(n, sender)) continue;
        SubscriptionMessage copy = s;
        copy.state = SubscriptionState::Secondary;
        out.push_back({std::move(copy), NextHop::via(n.link)});
    }
    return out;
}

DestinationList<SubscriptionMessage> flood_sbp(RouteContext& ctx, SubscriptionMessage s,
                                               NextHop sender, RouteDecision* decision) {
    require_mode(ctx, RoutingMode::Unclustered, "flood_sbp");
    if (s.host_broker) {
        s.bid = s.subscription->id;
        s.host_broker = false;
    }
    if (!s.bid) throw ProtocolViolation("flooded subscription without a BID");
    if (ctx.rt.contains(s.subscription->id)) {
        if (decision) decision->duplicate = true;
        return {};
    }
    ctx.rt.insert(RoutingTableEntry{s.subscription, sender, std::nullopt, s.bid});

    std::vector<const NeighbourLink*> all;
    for (const auto& n : ctx.view.primary()) all.push_back(&n);
    for (const auto& n : ctx.view.secondary()) all.push_back(&n);
    std::sort(all.begin(), all.end(),
              [](auto* a, auto* b) { return a->destination_id < b->destination_id; });

    DestinationList<SubscriptionMessage> out;
    for (const NeighbourLink* n : all) {
        if (is_sender(*n, sender)) continue;
        out.push_back({s, NextHop::via(n->link)});
    }
    return out;
}

DestinationList<NotificationMessage> pub_bid(const RouteContext& ctx, NotificationMessage n,
                                             NextHop, RouteDecision* decision) {
    require_mode(ctx, RoutingMode::Unclustered, "pub_bid");
    BidList bids;
    if (n.host_broker) {
        MatchDiagnostics diag;
        for (const RoutingTableEntry* e : match_all(ctx.rt, n.notification->content, &diag))
            bids.push_back(e->bid ? *e->bid : e->id());
        record_match(decision, ctx.rt, diag);
        n.host_broker = false;
    } else if (const BidList* carried = n.bids()) {
        bids = *carried;
    }

    DestinationList<NotificationMessage> out;
    std::vector<std::pair<LinkIndex, BidList>> groups;
    for (const SubscriptionId& bid : bids) {
        const RoutingTableEntry* e = ctx.rt.find(bid);
        if (!e)
            throw ProtocolViolation(fmt::format("BID {}:{} unknown at {}", bid.host, bid.seq,
                                                ctx.view.id().str()));
        if (e->last_hop.is_local()) {
            NotificationMessage copy = n;
            copy.header = std::monostate{};
            bool seen = std::any_of(out.begin(), out.end(),
                                    [&](const auto& d) { return d.next == e->last_hop; });
            if (!seen) out.push_back({std::move(copy), e->last_hop});
            continue;
        }
        auto it = std::find_if(groups.begin(), groups.end(),
                               [&](const auto& g) { return g.first == e->last_hop.link; });
        if (it == groups.end())
            groups.push_back({e->last_hop.link, BidList{bid}});
        else
            it->second.push_back(bid);
    }
    for (auto& [link, group] : groups) {
        NotificationMessage copy = n;
        copy.header = std::move(group);
        out.push_back({std::move(copy), NextHop::via(link)});
    }
    return out;
}

DestinationList<NotificationMessage> scot_snr(const RouteContext& ctx, NotificationMessage n,
                                              NextHop sender, RouteDecision* decision) {
    require_mode(ctx, RoutingMode::Clustered, "scot_snr");
    MatchDiagnostics diag;
    EntryList is = match_all(ctx.rt, n.notification->content, &diag);
    record_match(decision, ctx.rt, diag);

    std::vector<NextHop> hops;
    if (n.host_broker) {
        hops = distinct_next_hops(is, HopFilter::All, ctx.view);
        n.host_broker = false;
    } else {
        hops = distinct_next_hops(is, HopFilter::AcolOnly, ctx.view, sender_link(sender));
    }
    n.header = std::monostate{};

    DestinationList<NotificationMessage> out;
    for (const NextHop& h : hops) out.push_back({n, h});
    return out;
}

DestinationList<NotificationMessage> scot_dnr(const RouteContext& ctx, NotificationMessage n,
                                              NextHop sender, RouteDecision* decision) {
    require_mode(ctx, RoutingMode::Clustered, "scot_dnr");
    const BrokerView& view = ctx.view;
    const LinkStatusView& lst = status_of(ctx);
    const std::size_t k = view.cluster_count();

    MatchDiagnostics diag;
    EntryList is = match_all(ctx.rt, n.notification->content, &diag);
    record_match(decision, ctx.rt, diag);

    ClusterBitVector incoming(k);
    if (const ClusterBitVector* c = n.cbv_p()) incoming = *c;
    if (incoming.width() != k)
        throw ProtocolViolation(fmt::format("CBV_p of width {} in a {}-cluster overlay",
                                            incoming.width(), k));
    if (incoming.test(view.cluster()))
        throw ProtocolViolation(fmt::format("CBV_p {} flags the cluster of {}", incoming.str(),
                                            view.id().str()));

    DestinationList<NotificationMessage> out;
    std::vector<LinkIndex> targets;
    ClusterBitVector cbv(k);

    const bool host = n.host_broker;
    n.host_broker = false;
    n.header = std::monostate{};

    if (host) {
        for (const NextHop& h : distinct_next_hops(is, HopFilter::All, view)) {
            if (h.is_local())
                out.push_back({n, h});
            else
                targets.push_back(h.link);
        }
    } else {
        for (const NextHop& h : distinct_next_hops(is, HopFilter::AcolOnly, view, sender_link(sender))) {
            if (h.is_local())
                out.push_back({n, h});
            else
                targets.push_back(h.link);
        }
        for (std::size_t c : incoming.set_indexes()) {
            LinkIndex icol = view.icol_toward(static_cast<ClusterIndex>(c));
            bool wanted = std::any_of(is.begin(), is.end(), [&](const RoutingTableEntry* e) {
                return !e->last_hop.is_local() && e->last_hop.link == icol;
            });
            if (wanted) {
                if (std::find(targets.begin(), targets.end(), icol) == targets.end())
                    targets.push_back(icol);
            } else {
                cbv.set_bit(c);
                if (decision) ++decision->unresolved_bits;
            }
        }
    }

    std::vector<LinkIndex> eta1, icols, acols;
    for (LinkIndex l : targets) {
        const NeighbourLink& nl = view.outgoing(l);
        if (nl.kind == LinkKind::iCOL) {
            icols.push_back(l);
            if (lst.overloaded(l)) {
                eta1.push_back(l);
                cbv.set_bit(nl.destination_id.cluster);
            }
        } else {
            acols.push_back(l);
        }
    }

    std::size_t first_link_copy = out.size();
    for (LinkIndex l : targets) {
        if (std::find(eta1.begin(), eta1.end(), l) != eta1.end()) continue;
        out.push_back({n, NextHop::via(l)});
    }

    DnrCase kase = DnrCase::Static;
    std::optional<LinkIndex> carrier;
    auto attach = [&](LinkIndex l) {
        for (std::size_t i = first_link_copy; i < out.size(); ++i) {
            if (out[i].next.link == l) {
                out[i].message.set_cbv_p(cbv);
                return;
            }
        }
        throw ProtocolViolation("CBV_p carrier has no copy");
    };

    if (!cbv.is_empty()) {
        auto eta2 = pick_link(icols, view, lst);
        auto ell = pick_link(acols, view, lst);
        if (eta2 && !lst.overloaded(*eta2)) {
            kase = DnrCase::UnoverloadedIcol;
            carrier = *eta2;
            attach(*eta2);
        } else if (ell && !lst.overloaded(*ell)) {
            kase = DnrCase::AllIcolsOverloaded;
            carrier = *ell;
            attach(*ell);
        } else if (eta2) {
            kase = DnrCase::AllTargetsOverloaded;
            carrier = *eta2;
            ClusterBitVector rest = cbv;
            rest.clear_bit(view.outgoing(*eta2).destination_id.cluster);
            NotificationMessage copy = n;
            copy.set_cbv_p(rest);
            out.push_back({std::move(copy), NextHop::via(*eta2)});
        } else if (ell) {
            kase = DnrCase::Carried;
            carrier = *ell;
            attach(*ell);
        } else {
            kase = DnrCase::Dropped;
        }
    }

    if (decision) {
        decision->dnr_case = kase;
        decision->targets = std::move(targets);
        decision->overloaded_icols = std::move(eta1);
        decision->cbv_carrier = carrier;
        if (!cbv.is_empty()) decision->cbv_p = cbv;
    }
    return out;
}

}  // namespace scot

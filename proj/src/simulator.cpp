#include "scot/simulator.hpp"

#include <algorithm>
#include <deque>
#include <memory>
#include <queue>
#include <set>
#include <variant>

#include <fmt/format.h>

#include "scot/error.hpp"

namespace scot {

const char* to_string(Mode m) {
    switch (m) {
        case Mode::Bid: return "bid";
        case Mode::Snr: return "snr";
        case Mode::Dnr: return "dnr";
    }
    return "?";
}

Mode parse_mode(const std::string& text) {
    if (text == "bid") return Mode::Bid;
    if (text == "snr") return Mode::Snr;
    if (text == "dnr") return Mode::Dnr;
    throw ConfigError(fmt::format("unknown mode '{}' (expected bid, snr or dnr)", text));
}

RoutingMode routing_mode(Mode m) {
    return m == Mode::Bid ? RoutingMode::Unclustered : RoutingMode::Clustered;
}

std::uint64_t SimResult::delivery_count() const {
    std::uint64_t n = 0;
    for (const auto& r : notifications) n += r.deliveries.size();
    return n;
}

namespace {

constexpr std::int64_t kMilli = 1000;

enum class EventKind : std::uint8_t { Roll, Subscribe, Publish, SubArrive, NotifArrive };

// Links a single copy has crossed, newest first.
struct PathNode {
    LinkIndex link;
    std::shared_ptr<const PathNode> up;
};
using Path = std::shared_ptr<const PathNode>;

struct Event {
    Tick at = 0;
    std::uint64_t seq = 0;
    EventKind kind = EventKind::Roll;
    std::size_t index = 0;  // subscription / notification index
    BrokerIndex broker = 0;
    NextHop sender;
    bool processed = false;  // handling delay already charged
    Path path;
    std::variant<std::monostate, SubscriptionMessage, NotificationMessage> message;

    // Window rolls run before anything else scheduled for the same tick.
    auto key() const { return std::make_tuple(at, kind != EventKind::Roll, seq); }
};

struct EventLater {
    bool operator()(const Event& a, const Event& b) const { return a.key() > b.key(); }
};

struct LinkState {
    std::deque<Tick> departures;  // pending copies, by departure tick
    std::int64_t free_at = 0;     // milli-ticks
    LinkStatusRecord lsr;
};

class Engine;

class EngineLinkStatus final : public LinkStatusView {
public:
    explicit EngineLinkStatus(Engine& e) : engine_(e) {}
    bool overloaded(LinkIndex link) const override;
    std::size_t queue_length(LinkIndex link) const override;

private:
    Engine& engine_;
};

class Engine {
public:
    Engine(const ScotTopology& topology, const SimConfig& config, const Workload& workload)
        : topo_(topology),
          cfg_(config),
          work_(workload),
          tables_(topology.broker_count()),
          links_(topology.link_count()),
          reverse_(topology.link_count()),
          status_(*this) {
        if (cfg_.link.service_rate <= 0) throw ConfigError("link service_rate must be positive");
        if (cfg_.link.latency < 0 || cfg_.link.client_latency < 0)
            throw ConfigError("latencies must be non-negative");
        if (cfg_.congestion.window <= 0) throw ConfigError("congestion window must be positive");
        service_cost_ = std::max<std::int64_t>(
            1, static_cast<std::int64_t>(static_cast<double>(kMilli) / cfg_.link.service_rate));
        for (LinkIndex l = 0; l < topo_.link_count(); ++l) {
            const LinkRef& ref = topo_.link(l);
            reverse_[l] = *topo_.find_link(ref.destination, ref.source);
        }
        for (const auto& o : cfg_.overrides) {
            if (o.link >= topo_.link_count())
                throw TopologyError(fmt::format("override on unknown link {}", o.link));
            overrides_[o.link] = o;
        }
        result_.mode = cfg_.mode;
        result_.links.resize(topo_.link_count());
    }

    SimResult run() {
        const auto& subs = work_.subscriptions;
        const auto& pubs = work_.publications;
        for (const auto& s : subs)
            if (s.broker >= topo_.broker_count())
                throw UnknownBroker(fmt::format("subscriber on unknown broker {}", s.broker));
        for (const auto& p : pubs)
            if (p.broker >= topo_.broker_count())
                throw UnknownBroker(fmt::format("publisher on unknown broker {}", p.broker));

        std::vector<std::uint32_t> seq_per_broker(topo_.broker_count(), 0);
        for (std::size_t i = 0; i < subs.size(); ++i) {
            auto sub = std::make_shared<Subscription>();
            sub->id = SubscriptionId{subs[i].broker, seq_per_broker[subs[i].broker]++};
            sub->subscriber = subs[i].client;
            sub->filter = subs[i].filter;
            subscriptions_.push_back(sub);
            SubscriptionRecord rec;
            rec.id = sub->id;
            rec.subscriber = sub->subscriber;
            rec.host = subs[i].broker;
            rec.issued = subs[i].at;
            rec.registered = subs[i].at;
            result_.subscriptions.push_back(rec);
            Event e;
            e.at = subs[i].at;
            e.kind = EventKind::Subscribe;
            e.index = i;
            e.broker = subs[i].broker;
            e.sender = NextHop::local(subs[i].client);
            push(std::move(e));
        }
        result_.notifications.resize(pubs.size());
        delivered_to_.resize(pubs.size());
        if (!cfg_.publish_after_subscriptions || subs.empty()) schedule_publications(0);

        if (live_ > 0) schedule_roll(cfg_.congestion.window);

        while (!events_.empty()) {
            if (++result_.events > cfg_.event_budget) throw_timeout();
            Event e = events_.top();
            events_.pop();
            now_ = e.at;
            if (e.kind == EventKind::Roll) {
                roll();
                if (live_ > 0 || pending_publications_) schedule_roll(now_ + cfg_.congestion.window);
                continue;
            }
            --live_;
            handle(std::move(e));
            result_.quiescence = std::max(result_.quiescence, now_);
            if (live_ == 0 && pending_publications_) schedule_publications(now_);
        }

        for (const auto& rt : tables_) result_.table_sizes.push_back(rt.size());
        for (auto& n : result_.notifications)
            std::sort(n.deliveries.begin(), n.deliveries.end(),
                      [](const auto& a, const auto& b) { return a.subscriber < b.subscriber; });
        return std::move(result_);
    }

    std::size_t queue_length(LinkIndex l) {
        advance(l, now_);
        return links_[l].departures.size();
    }

    bool overloaded(LinkIndex l) {
        auto it = overrides_.find(l);
        if (it != overrides_.end() && it->second.overloaded) return true;
        return congested(links_[l].lsr, queue_length(l), cfg_.congestion.tau);
    }

    std::optional<std::size_t> pinned_queue(LinkIndex l) const {
        auto it = overrides_.find(l);
        return it == overrides_.end() ? std::nullopt : it->second.queue_length;
    }

private:
    void push(Event e) {
        if (e.at < now_) throw Error("event scheduled in the past");
        e.seq = next_seq_++;
        if (e.kind != EventKind::Roll) ++live_;
        events_.push(std::move(e));
    }

    void schedule_roll(Tick at) {
        Event e;
        e.at = at;
        e.kind = EventKind::Roll;
        push(std::move(e));
    }

    void schedule_publications(Tick offset) {
        pending_publications_ = false;
        result_.publish_offset = offset;
        const auto& pubs = work_.publications;
        for (std::size_t i = 0; i < pubs.size(); ++i) {
            auto n = std::make_shared<Notification>();
            n->id = i;
            n->publisher = pubs[i].client;
            n->issued = offset + pubs[i].at;
            n->content = pubs[i].content;
            auto& rec = result_.notifications[i];
            rec.id = i;
            rec.publisher = n->publisher;
            rec.host = pubs[i].broker;
            rec.issued = n->issued;
            Event e;
            e.at = n->issued + cfg_.link.client_latency;
            e.kind = EventKind::Publish;
            e.index = i;
            e.broker = pubs[i].broker;
            e.sender = NextHop::local(pubs[i].client);
            e.message = NotificationMessage{n, {}, true, 0};
            push(std::move(e));
        }
    }

    // Services every copy that departs at or before `upto`.
    void advance(LinkIndex l, Tick upto) {
        auto& ls = links_[l];
        while (!ls.departures.empty() && ls.departures.front() <= upto) {
            ls.departures.pop_front();
            ++ls.lsr.q_out;
            ++result_.links[l].serviced;
        }
    }

    // Appends a copy to the output queue; returns its departure tick.
    Tick enqueue(LinkIndex l) {
        advance(l, now_);
        auto& ls = links_[l];
        std::int64_t start = std::max(now_ * kMilli, ls.free_at);
        ls.free_at = start + service_cost_;
        Tick dep = start / kMilli;
        ls.departures.push_back(dep);
        ++ls.lsr.q_in;
        auto& tot = result_.links[l];
        ++tot.enqueued;
        tot.queue_ticks += static_cast<std::uint64_t>(dep - now_);
        std::size_t waiting = ls.departures.size() - (dep == now_ ? 1 : 0);
        tot.max_queue = std::max(tot.max_queue, waiting);
        return dep;
    }

    void roll() {
        const Tick start = now_ - cfg_.congestion.window;
        for (LinkIndex l = 0; l < links_.size(); ++l) {
            advance(l, now_ - 1);
            auto& ls = links_[l];
            const std::size_t q = ls.departures.size();
            const std::uint64_t qi = ls.lsr.q_in, qo = ls.lsr.q_out;
            roll_window(ls.lsr, q, cfg_.congestion.tau);
            if (ls.lsr.congested_flag) ++result_.links[l].congested_windows;
            if (qi || qo || q)
                result_.windows.push_back(
                    {start, l, qi, qo, q, ls.lsr.last_ce, ls.lsr.congested_flag});
        }
    }

    Path extend(const Path& path, LinkIndex l) {
        for (const PathNode* n = path.get(); n; n = n->up.get())
            if (n->link == l) {
                ++result_.link_revisits;
                break;
            }
        return std::make_shared<const PathNode>(PathNode{l, path});
    }

    Tick handling_delay(BrokerIndex b) const {
        const double d = cfg_.processing.per_message +
                         cfg_.processing.per_entry * static_cast<double>(tables_[b].size());
        return d > 0 ? static_cast<Tick>(d) : 0;
    }

    void handle(Event e) {
        if (!e.processed) {
            Tick d = handling_delay(e.broker);
            if (d > 0) {
                e.processed = true;
                e.at = now_ + d;
                push(std::move(e));
                return;
            }
        }
        switch (e.kind) {
            case EventKind::Subscribe: {
                SubscriptionMessage s;
                s.subscription = subscriptions_[e.index];
                route_subscription(e.index, e.broker, std::move(s), e.sender, nullptr);
                break;
            }
            case EventKind::SubArrive:
                route_subscription(e.index, e.broker,
                                   std::get<SubscriptionMessage>(std::move(e.message)), e.sender, e.path);
                break;
            case EventKind::Publish:
            case EventKind::NotifArrive:
                route_notification(e.index, e.broker,
                                   std::get<NotificationMessage>(std::move(e.message)), e.sender, e.path);
                break;
            case EventKind::Roll: break;
        }
    }

    RouteContext context(BrokerIndex b) {
        return RouteContext{topo_.view(b), tables_[b], &status_, routing_mode(cfg_.mode)};
    }

    void route_subscription(std::size_t i, BrokerIndex b, SubscriptionMessage s, NextHop sender,
                            const Path& path) {
        RouteContext ctx = context(b);
        RouteDecision d;
        const std::uint32_t hops = s.hops;
        auto out = cfg_.mode == Mode::Bid ? flood_sbp(ctx, std::move(s), sender, &d)
                                          : scot_sbp(ctx, std::move(s), sender, &d);
        auto& rec = result_.subscriptions[i];
        if (d.duplicate) {
            ++rec.duplicates;
            ++result_.duplicate_subscriptions;
        } else {
            rec.registered = std::max(rec.registered, now_);
            rec.max_hops = std::max(rec.max_hops, hops);
        }
        if (cfg_.trace)
            result_.trace.push_back(fmt::format("{} {} sub s{} hops={}{} out={}", now_,
                                                topo_.broker(b).str(), i, hops,
                                                d.duplicate ? " duplicate" : "", out.size()));
        for (auto& dst : out) {
            LinkIndex l = dst.next.link;
            ++rec.ims;
            ++result_.subscription_ims;
            Tick dep = enqueue(l);
            Event e;
            e.at = dep + cfg_.link.latency;
            e.kind = EventKind::SubArrive;
            e.index = i;
            e.broker = topo_.link(l).destination;
            e.sender = NextHop::via(reverse_[l]);
            e.path = extend(path, l);
            dst.message.hops = hops + 1;
            e.message = std::move(dst.message);
            push(std::move(e));
        }
    }

    void route_notification(std::size_t i, BrokerIndex b, NotificationMessage n, NextHop sender,
                            const Path& path) {
        RouteContext ctx = context(b);
        RouteDecision d;
        const std::uint32_t hops = n.hops;
        DestinationList<NotificationMessage> out;
        switch (cfg_.mode) {
            case Mode::Bid: out = pub_bid(ctx, std::move(n), sender, &d); break;
            case Mode::Snr: out = scot_snr(ctx, std::move(n), sender, &d); break;
            case Mode::Dnr: out = scot_dnr(ctx, std::move(n), sender, &d); break;
        }
        if (d.matched) {
            ++result_.matching_invocations;
            result_.entries_scanned += d.entries_scanned;
        }
        if (cfg_.mode == Mode::Dnr) {
            ++result_.dnr_cases[to_string(d.dnr_case)];
            result_.unresolved_cbv_bits += d.unresolved_bits;
        }
        if (cfg_.trace) {
            std::string line = fmt::format("{} {} pub n{} hops={}", now_, topo_.broker(b).str(), i,
                                           hops);
            if (cfg_.mode == Mode::Dnr) {
                line += fmt::format(" case={}", to_string(d.dnr_case));
                if (d.cbv_p) line += fmt::format(" cbv_p={}", d.cbv_p->str());
                if (d.cbv_carrier) line += " carrier=" + topo_.link_name(*d.cbv_carrier);
            }
            for (const auto& dst : out)
                line += dst.next.is_local() ? fmt::format(" ->c{}", dst.next.client)
                                            : " ->" + topo_.link_name(dst.next.link);
            result_.trace.push_back(std::move(line));
        }
        auto& rec = result_.notifications[i];
        for (auto& dst : out) {
            if (dst.next.is_local()) {
                if (!delivered_to_[i].insert(dst.next.client).second) {
                    ++result_.duplicate_deliveries;
                    continue;
                }
                rec.deliveries.push_back({dst.next.client, now_ + cfg_.link.client_latency, hops});
                continue;
            }
            LinkIndex l = dst.next.link;
            ++rec.ims;
            ++result_.notification_ims;
            Tick dep = enqueue(l);
            Event e;
            e.at = dep + cfg_.link.latency;
            e.kind = EventKind::NotifArrive;
            e.index = i;
            e.broker = topo_.link(l).destination;
            e.sender = NextHop::via(reverse_[l]);
            e.path = extend(path, l);
            dst.message.hops = hops + 1;
            e.message = std::move(dst.message);
            push(std::move(e));
        }
    }

    [[noreturn]] void throw_timeout() {
        std::vector<std::pair<std::size_t, LinkIndex>> busiest;
        for (LinkIndex l = 0; l < links_.size(); ++l)
            if (!links_[l].departures.empty()) busiest.push_back({links_[l].departures.size(), l});
        std::sort(busiest.rbegin(), busiest.rend());
        std::string snapshot;
        for (std::size_t j = 0; j < std::min<std::size_t>(5, busiest.size()); ++j)
            snapshot += fmt::format(" {}={}", topo_.link_name(busiest[j].second), busiest[j].first);
        throw TimeoutError(fmt::format(
            "event budget of {} exhausted at tick {}; {} events pending; longest queues:{}",
            cfg_.event_budget, now_, events_.size(), snapshot.empty() ? " none" : snapshot));
    }

    const ScotTopology& topo_;
    const SimConfig& cfg_;
    const Workload& work_;
    std::vector<RoutingTable> tables_;
    std::vector<LinkState> links_;
    std::vector<LinkIndex> reverse_;
    std::map<LinkIndex, LinkOverride> overrides_;
    EngineLinkStatus status_;
    std::int64_t service_cost_ = kMilli;

    std::priority_queue<Event, std::vector<Event>, EventLater> events_;
    std::uint64_t next_seq_ = 0;
    std::uint64_t live_ = 0;
    Tick now_ = 0;
    bool pending_publications_ = true;

    std::vector<std::shared_ptr<const Subscription>> subscriptions_;
    std::vector<std::set<ClientId>> delivered_to_;
    SimResult result_;
};

bool EngineLinkStatus::overloaded(LinkIndex link) const { return engine_.overloaded(link); }

std::size_t EngineLinkStatus::queue_length(LinkIndex link) const {
    if (auto q = engine_.pinned_queue(link)) return *q;
    return engine_.queue_length(link);
}

template <class T>
std::pair<double, T> mean_max(const std::vector<T>& v) {
    if (v.empty()) return {0.0, T{}};
    double sum = 0;
    for (T x : v) sum += static_cast<double>(x);
    return {sum / static_cast<double>(v.size()), *std::max_element(v.begin(), v.end())};
}

}  // namespace

SimResult simulate(const ScotTopology& topology, const SimConfig& config, const Workload& workload) {
    return Engine(topology, config, workload).run();
}

std::string messages_csv(const SimResult& r) {
    std::string out = "message_id,kind,client,issue_tick,delivery_tick,hops,ims,mode\n";
    const char* mode = to_string(r.mode);
    for (std::size_t i = 0; i < r.subscriptions.size(); ++i) {
        const auto& s = r.subscriptions[i];
        out += fmt::format("s{},sub,{},{},{},{},{},{}\n", i, s.subscriber, s.issued, s.registered,
                           s.max_hops, s.ims, mode);
    }
    for (const auto& n : r.notifications) {
        std::string last;
        std::uint32_t max_hops = 0;
        if (!n.deliveries.empty()) {
            Tick t = n.issued;
            for (const auto& d : n.deliveries) {
                t = std::max(t, d.delivered);
                max_hops = std::max(max_hops, d.hops);
            }
            last = fmt::format("{}", t);
        }
        out += fmt::format("n{},pub,{},{},{},{},{},{}\n", n.id, n.publisher, n.issued, last,
                           max_hops, n.ims, mode);
        for (const auto& d : n.deliveries)
            out += fmt::format("n{},deliver,{},{},{},{},,{}\n", n.id, d.subscriber, n.issued,
                               d.delivered, d.hops, mode);
    }
    return out;
}

std::string links_csv(const ScotTopology& topology, const SimResult& r) {
    std::string out = "window_start,link,q_in,q_out,q_len,ce,congested\n";
    for (const auto& w : r.windows)
        out += fmt::format("{},\"{}\",{},{},{},{:.6f},{}\n", w.window_start,
                           topology.link_name(w.link), w.q_in, w.q_out, w.queue_length, w.ce,
                           w.congested ? 1 : 0);
    return out;
}

std::string summary_text(const ScotTopology& topology, const SimResult& r) {
    std::vector<Tick> sub_delay, notif_delay;
    for (const auto& s : r.subscriptions) sub_delay.push_back(s.registered - s.issued);
    for (const auto& n : r.notifications)
        for (const auto& d : n.deliveries) notif_delay.push_back(d.delivered - n.issued);
    auto [sub_mean, sub_max] = mean_max(sub_delay);
    auto [notif_mean, notif_max] = mean_max(notif_delay);

    std::size_t max_queue = 0;
    std::uint64_t congested_windows = 0;
    for (const auto& l : r.links) {
        max_queue = std::max(max_queue, l.max_queue);
        congested_windows += l.congested_windows;
    }

    std::string out;
    auto kv = [&](std::string_view k, const auto& v) { out += fmt::format("{}={}\n", k, v); };
    kv("mode", to_string(r.mode));
    kv("topology", topology_summary(topology));
    kv("subscriptions", r.subscriptions.size());
    kv("notifications", r.notifications.size());
    kv("subscription_ims", r.subscription_ims);
    kv("notification_ims", r.notification_ims);
    kv("total_ims", r.total_ims());
    kv("duplicate_subscriptions", r.duplicate_subscriptions);
    kv("deliveries", r.delivery_count());
    kv("duplicate_deliveries", r.duplicate_deliveries);
    kv("link_revisits", r.link_revisits);
    kv("mean_subscription_delay", fmt::format("{:.3f}", sub_mean));
    kv("max_subscription_delay", sub_max);
    kv("mean_notification_delay", fmt::format("{:.3f}", notif_mean));
    kv("max_notification_delay", notif_max);
    kv("matching_invocations", r.matching_invocations);
    kv("max_queue", max_queue);
    kv("congested_windows", congested_windows);
    for (const auto& [name, count] : r.dnr_cases) kv("dnr_" + name, count);
    kv("unresolved_cbv_bits", r.unresolved_cbv_bits);
    kv("publish_offset", r.publish_offset);
    kv("quiescence_tick", r.quiescence);
    kv("events", r.events);
    return out;
}

}  // namespace scot

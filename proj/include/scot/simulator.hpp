#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "scot/congestion.hpp"
#include "scot/messages.hpp"
#include "scot/routing.hpp"
#include "scot/topology.hpp"

namespace scot {

enum class Mode : std::uint8_t { Bid, Snr, Dnr };

const char* to_string(Mode m);
Mode parse_mode(const std::string& text);
RoutingMode routing_mode(Mode m);

struct LinkParams {
    Tick latency = 1;
    double service_rate = 1.0;  // copies per tick
    Tick client_latency = 0;
};

// Modeled broker handling delay: per_message + per_entry * |RT| ticks,
// rounded down.
struct ProcessingParams {
    double per_message = 0.0;
    double per_entry = 0.0;
};

// Pins a link's status as seen by routing. With `overloaded` set the link
// is overloaded regardless of its queue; `queue_length` replaces the
// reported Q_l.
struct LinkOverride {
    LinkIndex link = kNoLink;
    bool overloaded = true;
    std::optional<std::size_t> queue_length;
};

struct SimConfig {
    Mode mode = Mode::Snr;
    LinkParams link;
    ProcessingParams processing;
    CongestionParams congestion;
    std::vector<LinkOverride> overrides;
    std::uint64_t event_budget = 100'000'000;
    // Publications are timed relative to the tick at which subscription
    // traffic has drained.
    bool publish_after_subscriptions = false;
    bool trace = false;
};

struct SubscribeRequest {
    Tick at = 0;
    BrokerIndex broker = 0;
    ClientId client = 0;
    Filter filter;
};

struct PublishRequest {
    Tick at = 0;
    BrokerIndex broker = 0;
    ClientId client = 0;
    Content content;
};

struct Workload {
    std::vector<SubscribeRequest> subscriptions;
    std::vector<PublishRequest> publications;
};

struct SubscriptionRecord {
    SubscriptionId id;
    ClientId subscriber = 0;
    BrokerIndex host = 0;
    Tick issued = 0;
    Tick registered = 0;  // last broker to store it
    std::uint32_t max_hops = 0;
    std::uint64_t ims = 0;
    std::uint64_t duplicates = 0;
};

struct DeliveryRecord {
    ClientId subscriber = 0;
    Tick delivered = 0;
    std::uint32_t hops = 0;
};

struct NotificationRecord {
    std::uint64_t id = 0;
    ClientId publisher = 0;
    BrokerIndex host = 0;
    Tick issued = 0;
    std::uint64_t ims = 0;
    std::vector<DeliveryRecord> deliveries;  // sorted by subscriber after run
};

struct LinkWindowRow {
    Tick window_start = 0;
    LinkIndex link = kNoLink;
    std::uint64_t q_in = 0;
    std::uint64_t q_out = 0;
    std::size_t queue_length = 0;
    double ce = 1.0;
    bool congested = false;
};

struct LinkTotals {
    std::uint64_t enqueued = 0;
    std::uint64_t serviced = 0;
    std::size_t max_queue = 0;
    // Sum over copies of ticks spent waiting; divided by a horizon it is
    // the time-averaged Q_l.
    std::uint64_t queue_ticks = 0;
    std::uint64_t congested_windows = 0;
};

struct SimResult {
    Mode mode = Mode::Snr;
    std::vector<SubscriptionRecord> subscriptions;
    std::vector<NotificationRecord> notifications;
    std::vector<LinkWindowRow> windows;
    std::vector<LinkTotals> links;

    std::uint64_t subscription_ims = 0;
    std::uint64_t notification_ims = 0;
    std::uint64_t duplicate_subscriptions = 0;
    std::uint64_t duplicate_deliveries = 0;
    std::uint64_t link_revisits = 0;  // a copy crossing a directed link already on its own path
    std::uint64_t matching_invocations = 0;
    std::uint64_t entries_scanned = 0;
    std::uint64_t unresolved_cbv_bits = 0;
    std::map<std::string, std::uint64_t> dnr_cases;

    std::vector<std::size_t> table_sizes;  // routing-table entries per broker at the end

    Tick publish_offset = 0;
    Tick quiescence = 0;  // tick of the last message event
    std::uint64_t events = 0;
    std::vector<std::string> trace;

    std::uint64_t total_ims() const { return subscription_ims + notification_ims; }
    std::uint64_t delivery_count() const;
};

// Runs the workload to quiescence. Throws TimeoutError when the event
// budget is exhausted.
SimResult simulate(const ScotTopology& topology, const SimConfig& config, const Workload& workload);

// CSV and summary writers. Column order is fixed:
//   messages.csv: message_id,kind,client,issue_tick,delivery_tick,hops,ims,mode
//   links.csv:    window_start,link,q_in,q_out,q_len,ce,congested
std::string messages_csv(const SimResult& r);
std::string links_csv(const ScotTopology& topology, const SimResult& r);
std::string summary_text(const ScotTopology& topology, const SimResult& r);

}  // namespace scot

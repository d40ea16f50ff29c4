#pragma once

#include <compare>
#include <cstdint>
#include <limits>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "scot/graph.hpp"

namespace scot {

using BrokerIndex = std::uint32_t;
using LinkIndex = std::uint32_t;
using ClusterIndex = std::uint32_t;

inline constexpr LinkIndex kNoLink = std::numeric_limits<LinkIndex>::max();

// B(x, y): x is the acyclic-factor label (the region), y the cluster index.
struct BrokerId {
    std::string region;
    ClusterIndex cluster = 0;

    std::string str() const;  // "(b,2)"
    auto operator<=>(const BrokerId&) const = default;
    bool operator==(const BrokerId&) const = default;
};

// Parses "(b,2)", "b,2" or "B(b,2)".
BrokerId parse_broker_id(const std::string& text);

enum class LinkKind : std::uint8_t { aCOL, iCOL };
enum class BrokerKind : std::uint8_t { Edge, Inner };

const char* to_string(LinkKind kind);
const char* to_string(BrokerKind kind);

// Directed view l<source, destination> of an undirected overlay edge.
struct LinkRef {
    BrokerIndex source = 0;
    BrokerIndex destination = 0;
    LinkKind kind = LinkKind::aCOL;
};

struct NeighbourLink {
    LinkIndex link = kNoLink;
    BrokerIndex destination = 0;
    BrokerId destination_id;
    LinkKind kind = LinkKind::aCOL;
};

// What a single broker knows: its own identity and kind, its direct
// neighbours and the kind of each of its links. Routing engines see
// nothing else of the topology.
class BrokerView {
public:
    BrokerIndex self() const { return self_; }
    const BrokerId& id() const { return id_; }
    ClusterIndex cluster() const { return id_.cluster; }
    std::size_t cluster_count() const { return icol_by_cluster_.size(); }
    BrokerKind kind() const { return kind_; }

    std::span<const NeighbourLink> primary() const { return primary_; }
    std::span<const NeighbourLink> secondary() const { return secondary_; }

    bool owns(LinkIndex link) const;
    const NeighbourLink& outgoing(LinkIndex link) const;
    LinkKind kind_of(LinkIndex link) const { return outgoing(link).kind; }

    // The single iCOL from this broker into `cluster`.
    LinkIndex icol_toward(ClusterIndex cluster) const;

private:
    friend class ScotTopology;

    BrokerIndex self_ = 0;
    BrokerId id_;
    BrokerKind kind_ = BrokerKind::Edge;
    std::vector<NeighbourLink> primary_;
    std::vector<NeighbourLink> secondary_;
    std::vector<LinkIndex> icol_by_cluster_;
};

struct BuildOptions {
    // Reject connectivity-factor labels that are not exactly 0..k-1
    // instead of relabelling them.
    bool strict_index = false;
};

// Clustered product of an acyclic factor and a complete factor. Broker
// index = region index * cluster count + cluster index.
class ScotTopology {
public:
    static ScotTopology build(const Graph& af, const Graph& cf, BuildOptions options = {});

    const Graph& acyclic_factor() const { return af_; }
    // Relabelled so that vertex i carries label "i".
    const Graph& connectivity_factor() const { return cf_; }
    const Graph& product() const { return product_; }

    std::size_t broker_count() const { return brokers_.size(); }
    std::size_t cluster_count() const { return cf_.order(); }
    std::size_t region_count() const { return af_.order(); }
    std::size_t af_diameter() const { return af_diameter_; }

    // Undirected overlay link counts.
    std::size_t acol_count() const { return af_.size() * cf_.order(); }
    std::size_t icol_count() const { return af_.order() * cf_.size(); }
    std::size_t overlay_link_count() const { return acol_count() + icol_count(); }

    // Directed link views; twice the overlay link count.
    std::size_t link_count() const { return links_.size(); }
    const LinkRef& link(LinkIndex l) const { return links_.at(l); }
    std::optional<LinkIndex> find_link(BrokerIndex source, BrokerIndex destination) const;
    LinkIndex link_between(const BrokerId& source, const BrokerId& destination) const;
    std::string link_name(LinkIndex l) const;  // "l<(b,2),(b,0)>"

    const BrokerId& broker(BrokerIndex b) const { return brokers_.at(b); }
    BrokerIndex find(const BrokerId& id) const;  // throws UnknownBroker
    std::span<const BrokerId> brokers() const { return brokers_; }
    const BrokerView& view(BrokerIndex b) const { return views_.at(b); }

    ClusterIndex cluster_of(BrokerIndex b) const { return broker(b).cluster; }
    const std::string& region_of(BrokerIndex b) const { return broker(b).region; }
    std::size_t region_index(BrokerIndex b) const { return b / cluster_count(); }

    std::vector<BrokerIndex> primary_neighbours(BrokerIndex b) const;
    std::vector<BrokerIndex> secondary_neighbours(BrokerIndex b) const;
    BrokerKind classify(BrokerIndex b) const { return view(b).kind(); }
    LinkIndex icol_toward(BrokerIndex b, ClusterIndex c) const;

    // Cluster label as given in the connectivity factor before relabelling.
    const std::string& original_cluster_label(ClusterIndex c) const {
        return original_cluster_labels_.at(c);
    }
    std::optional<ClusterIndex> cluster_from_label(const std::string& label) const;

    std::size_t hop_distance(BrokerIndex a, BrokerIndex b) const;

private:
    ScotTopology(Graph af, Graph cf, Graph product);

    Graph af_;
    Graph cf_;
    Graph product_;
    std::size_t af_diameter_ = 0;
    std::vector<std::string> original_cluster_labels_;
    std::vector<BrokerId> brokers_;
    std::map<BrokerId, BrokerIndex> broker_index_;
    std::vector<LinkRef> links_;
    std::map<std::pair<BrokerIndex, BrokerIndex>, LinkIndex> link_index_;
    std::vector<BrokerView> views_;
    std::vector<std::vector<std::size_t>> distances_;
};

// Brokers with kinds, links with kinds, then a count summary.
std::string dump_topology(const ScotTopology& topology);

// "18 brokers, 33 links, 3 clusters, 6 regions"
std::string topology_summary(const ScotTopology& topology);

}  // namespace scot

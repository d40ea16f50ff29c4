#include "scot/topology.hpp"

#include <algorithm>
#include <cctype>

#include <fmt/format.h>

namespace scot {

std::string BrokerId::str() const { return fmt::format("({},{})", region, cluster); }

BrokerId parse_broker_id(const std::string& text) {
    std::string s;
    for (char ch : text)
        if (!std::isspace(static_cast<unsigned char>(ch))) s.push_back(ch);
    if (!s.empty() && (s[0] == 'B' || s[0] == 'b') && s.size() > 1 && s[1] == '(') s.erase(0, 1);
    if (!s.empty() && s.front() == '(') {
        if (s.back() != ')') throw ParseError(fmt::format("bad broker id '{}'", text));
        s = s.substr(1, s.size() - 2);
    }
    auto comma = s.rfind(',');
    if (comma == std::string::npos || comma == 0 || comma + 1 == s.size())
        throw ParseError(fmt::format("bad broker id '{}'", text));
    BrokerId id;
    id.region = s.substr(0, comma);
    const std::string cluster = s.substr(comma + 1);
    if (!std::all_of(cluster.begin(), cluster.end(),
                     [](char c) { return std::isdigit(static_cast<unsigned char>(c)); }))
        throw ParseError(fmt::format("bad cluster index in broker id '{}'", text));
    id.cluster = static_cast<ClusterIndex>(std::stoul(cluster));
    return id;
}

const char* to_string(LinkKind kind) { return kind == LinkKind::aCOL ? "aCOL" : "iCOL"; }
const char* to_string(BrokerKind kind) { return kind == BrokerKind::Edge ? "edge" : "inner"; }

bool BrokerView::owns(LinkIndex link) const {
    auto has = [link](std::span<const NeighbourLink> links) {
        return std::any_of(links.begin(), links.end(),
                           [link](const NeighbourLink& n) { return n.link == link; });
    };
    return has(primary_) || has(secondary_);
}

const NeighbourLink& BrokerView::outgoing(LinkIndex link) const {
    for (const auto* group : {&primary_, &secondary_})
        for (const auto& n : *group)
            if (n.link == link) return n;
    throw TopologyError(fmt::format("link {} is not an outgoing link of {}", link, id_.str()));
}

LinkIndex BrokerView::icol_toward(ClusterIndex cluster) const {
    if (cluster >= icol_by_cluster_.size())
        throw TopologyError(fmt::format("cluster {} out of range at {}", cluster, id_.str()));
    if (cluster == id_.cluster)
        throw TopologyError(fmt::format("{} has no iCOL into its own cluster", id_.str()));
    return icol_by_cluster_[cluster];
}

ScotTopology::ScotTopology(Graph af, Graph cf, Graph product)
    : af_(std::move(af)), cf_(std::move(cf)), product_(std::move(product)) {}

ScotTopology ScotTopology::build(const Graph& af, const Graph& cf, BuildOptions options) {
    if (af.empty() || cf.empty()) throw TopologyError("SCOT factors must be non-empty");
    if (!af.acyclic())
        throw AcyclicPropertyViolation("acyclic factor contains a cycle");
    if (!af.connected())
        throw AcyclicPropertyViolation("acyclic factor must be connected");
    if (!cf.complete())
        throw ConnectivityPropertyViolation("connectivity factor is not a complete graph");

    const std::size_t k = cf.order();
    std::vector<std::size_t> order(k);
    for (std::size_t i = 0; i < k; ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return natural_less(cf.label(a).first, cf.label(b).first);
    });
    if (options.strict_index) {
        for (std::size_t i = 0; i < k; ++i) {
            if (cf.label(order[i]).first != std::to_string(i))
                throw IndexPropertyViolation(fmt::format(
                    "connectivity factor labels must be 0..{}; found '{}'", k - 1,
                    cf.label(order[i]).str()));
        }
    }
    // old vertex index -> cluster index
    std::vector<std::size_t> cluster_of_vertex(k);
    std::vector<std::string> original(k);
    for (std::size_t i = 0; i < k; ++i) {
        cluster_of_vertex[order[i]] = i;
        original[i] = cf.label(order[i]).first;
    }
    std::vector<VertexLabel> cf_vertices;
    for (std::size_t i = 0; i < k; ++i) cf_vertices.emplace_back(std::to_string(i));
    std::vector<std::pair<VertexLabel, VertexLabel>> cf_edges;
    for (const auto& [x, y] : cf.edges())
        cf_edges.emplace_back(cf_vertices[cluster_of_vertex[x]], cf_vertices[cluster_of_vertex[y]]);
    Graph relabelled(cf_vertices, cf_edges);

    Graph product = cartesian_product(af, relabelled);
    ScotTopology t(af, std::move(relabelled), std::move(product));
    t.af_diameter_ = af.diameter();
    t.original_cluster_labels_ = std::move(original);

    const std::size_t n = t.product_.order();
    t.brokers_.reserve(n);
    for (std::size_t v = 0; v < n; ++v) {
        const auto& label = t.product_.label(v);
        BrokerId id{label.first, static_cast<ClusterIndex>(v % k)};
        t.broker_index_.emplace(id, static_cast<BrokerIndex>(v));
        t.brokers_.push_back(std::move(id));
    }
    for (std::size_t u = 0; u < n; ++u) {
        for (std::size_t v : t.product_.neighbours(u)) {
            LinkRef ref;
            ref.source = static_cast<BrokerIndex>(u);
            ref.destination = static_cast<BrokerIndex>(v);
            ref.kind = (u % k == v % k) ? LinkKind::aCOL : LinkKind::iCOL;
            auto id = static_cast<LinkIndex>(t.links_.size());
            t.links_.push_back(ref);
            t.link_index_.emplace(std::make_pair(ref.source, ref.destination), id);
        }
    }

    t.views_.resize(n);
    for (std::size_t u = 0; u < n; ++u) {
        BrokerView& view = t.views_[u];
        view.self_ = static_cast<BrokerIndex>(u);
        view.id_ = t.brokers_[u];
        view.icol_by_cluster_.assign(k, kNoLink);
        for (std::size_t v : t.product_.neighbours(u)) {
            LinkIndex l = t.link_index_.at({static_cast<BrokerIndex>(u), static_cast<BrokerIndex>(v)});
            NeighbourLink nl{l, static_cast<BrokerIndex>(v), t.brokers_[v], t.links_[l].kind};
            if (nl.kind == LinkKind::aCOL) {
                view.primary_.push_back(nl);
            } else {
                view.icol_by_cluster_[v % k] = l;
                view.secondary_.push_back(nl);
            }
        }
        auto by_id = [](const NeighbourLink& a, const NeighbourLink& b) {
            return a.destination_id < b.destination_id;
        };
        std::sort(view.primary_.begin(), view.primary_.end(), by_id);
        std::sort(view.secondary_.begin(), view.secondary_.end(), by_id);
        view.kind_ = view.primary_.size() <= 1 ? BrokerKind::Edge : BrokerKind::Inner;
    }

    t.distances_.reserve(n);
    for (std::size_t u = 0; u < n; ++u) t.distances_.push_back(t.product_.distances_from(u));
    return t;
}

std::optional<LinkIndex> ScotTopology::find_link(BrokerIndex source, BrokerIndex destination) const {
    auto it = link_index_.find({source, destination});
    if (it == link_index_.end()) return std::nullopt;
    return it->second;
}

LinkIndex ScotTopology::link_between(const BrokerId& source, const BrokerId& destination) const {
    auto l = find_link(find(source), find(destination));
    if (!l)
        throw TopologyError(fmt::format("no overlay link between {} and {}", source.str(),
                                        destination.str()));
    return *l;
}

std::string ScotTopology::link_name(LinkIndex l) const {
    const auto& ref = link(l);
    return fmt::format("l<{},{}>", broker(ref.source).str(), broker(ref.destination).str());
}

BrokerIndex ScotTopology::find(const BrokerId& id) const {
    auto it = broker_index_.find(id);
    if (it == broker_index_.end()) throw UnknownBroker(fmt::format("unknown broker {}", id.str()));
    return it->second;
}

std::vector<BrokerIndex> ScotTopology::primary_neighbours(BrokerIndex b) const {
    std::vector<BrokerIndex> out;
    for (const auto& n : view(b).primary()) out.push_back(n.destination);
    return out;
}

std::vector<BrokerIndex> ScotTopology::secondary_neighbours(BrokerIndex b) const {
    std::vector<BrokerIndex> out;
    for (const auto& n : view(b).secondary()) out.push_back(n.destination);
    return out;
}

LinkIndex ScotTopology::icol_toward(BrokerIndex b, ClusterIndex c) const {
    return view(b).icol_toward(c);
}

std::optional<ClusterIndex> ScotTopology::cluster_from_label(const std::string& label) const {
    for (std::size_t i = 0; i < original_cluster_labels_.size(); ++i)
        if (original_cluster_labels_[i] == label) return static_cast<ClusterIndex>(i);
    return std::nullopt;
}

std::size_t ScotTopology::hop_distance(BrokerIndex a, BrokerIndex b) const {
    return distances_.at(a).at(b);
}

std::string dump_topology(const ScotTopology& t) {
    std::string out;
    out += "brokers:\n";
    for (BrokerIndex b = 0; b < t.broker_count(); ++b) {
        out += fmt::format("  B{} cluster={} region={} kind={}\n", t.broker(b).str(),
                           t.cluster_of(b), t.region_of(b), to_string(t.classify(b)));
    }
    out += "links:\n";
    for (LinkIndex l = 0; l < t.link_count(); ++l) {
        const auto& ref = t.link(l);
        if (ref.source > ref.destination) continue;
        out += fmt::format("  {}-{} {}\n", t.broker(ref.source).str(),
                           t.broker(ref.destination).str(), to_string(ref.kind));
    }
    std::size_t inner = 0;
    for (BrokerIndex b = 0; b < t.broker_count(); ++b)
        if (t.classify(b) == BrokerKind::Inner) ++inner;
    out += "summary:\n";
    out += fmt::format("  brokers={}\n  links={}\n  acols={}\n  icols={}\n  clusters={}\n"
                       "  regions={}\n  inner_brokers={}\n  edge_brokers={}\n  af_diameter={}\n",
                       t.broker_count(), t.overlay_link_count(), t.acol_count(), t.icol_count(),
                       t.cluster_count(), t.region_count(), inner, t.broker_count() - inner,
                       t.af_diameter());
    return out;
}

std::string topology_summary(const ScotTopology& t) {
    return fmt::format("{} brokers, {} links, {} clusters, {} regions", t.broker_count(),
                       t.overlay_link_count(), t.cluster_count(), t.region_count());
}

}  // namespace scot

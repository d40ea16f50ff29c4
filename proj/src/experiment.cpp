#include "scot/experiment.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>

#include <fmt/format.h>

#include "scot/error.hpp"
#include "scot/samples.hpp"

namespace scot {

using nlohmann::json;

namespace {

// A ConfigError that already names its origin, line and path.
class AnchoredError : public ConfigError {
public:
    using ConfigError::ConfigError;
};

class Source {
public:
    Source(std::string origin, std::string text) : origin_(std::move(origin)), text_(std::move(text)) {}

    // Best effort: follows the object keys of `path` through the raw text.
    std::size_t line_of(const std::string& path) const {
        if (text_.empty()) return 0;
        std::size_t pos = 0, found = std::string::npos;
        std::stringstream ss(path);
        std::string seg;
        while (std::getline(ss, seg, '/')) {
            if (seg.empty() || std::all_of(seg.begin(), seg.end(), ::isdigit)) continue;
            auto at = text_.find("\"" + seg + "\"", pos);
            if (at == std::string::npos) break;
            found = pos = at;
        }
        if (found == std::string::npos) return 0;
        return 1 + static_cast<std::size_t>(std::count(text_.begin(), text_.begin() + found, '\n'));
    }

    [[noreturn]] void fail(const std::string& path, const std::string& what) const {
        std::size_t line = line_of(path);
        std::string where = line ? fmt::format("{}:{}", origin_, line) : origin_;
        throw AnchoredError(fmt::format("{}: {}: {}", where, path.empty() ? "/" : path, what));
    }

private:
    std::string origin_;
    std::string text_;
};

class Node {
public:
    Node(const json& j, std::string path, const Source& src) : j_(j), path_(std::move(path)), src_(src) {}

    const json& raw() const { return j_; }
    const std::string& path() const { return path_; }

    [[noreturn]] void fail(const std::string& what) const { src_.fail(path_, what); }

    void expect_object() const {
        if (!j_.is_object()) fail("expected an object");
    }

    bool has(const char* key) const { return j_.is_object() && j_.contains(key); }

    Node at(const char* key) const {
        expect_object();
        if (!j_.contains(key)) fail(fmt::format("missing required key '{}'", key));
        return Node(j_.at(key), path_ + "/" + key, src_);
    }

    std::optional<Node> opt(const char* key) const {
        expect_object();
        if (!j_.contains(key)) return std::nullopt;
        return Node(j_.at(key), path_ + "/" + key, src_);
    }

    void allow(std::initializer_list<const char*> keys) const {
        expect_object();
        for (const auto& [k, v] : j_.items()) {
            bool known = false;
            for (const char* key : keys) known |= k == key;
            if (!known) Node(v, path_ + "/" + k, src_).fail("unknown key");
        }
    }

    std::vector<Node> items() const {
        if (!j_.is_array()) fail("expected an array");
        std::vector<Node> out;
        for (std::size_t i = 0; i < j_.size(); ++i)
            out.emplace_back(j_[i], fmt::format("{}/{}", path_, i), src_);
        return out;
    }

    double number() const {
        if (!j_.is_number()) fail("expected a number");
        return j_.get<double>();
    }

    std::int64_t integer() const {
        if (!j_.is_number_integer()) fail("expected an integer");
        return j_.get<std::int64_t>();
    }

    std::uint64_t count() const {
        std::int64_t v = integer();
        if (v < 0) fail("expected a non-negative integer");
        return static_cast<std::uint64_t>(v);
    }

    std::string string() const {
        if (!j_.is_string()) fail("expected a string");
        return j_.get<std::string>();
    }

    // Vertex names may be written as strings or integers.
    std::string name() const {
        if (j_.is_number_integer()) return std::to_string(j_.get<std::int64_t>());
        return string();
    }

    bool boolean() const {
        if (!j_.is_boolean()) fail("expected true or false");
        return j_.get<bool>();
    }

private:
    const json& j_;
    std::string path_;
    const Source& src_;
};

template <class F>
auto guarded(const Node& n, F&& f) -> decltype(f()) {
    try {
        return f();
    } catch (const AnchoredError&) {
        throw;
    } catch (const Error& e) {
        n.fail(e.what());
    }
}

Graph parse_graph(const Node& n) {
    n.expect_object();
    if (n.has("generator")) {
        n.allow({"generator", "n"});
        const std::string g = n.at("generator").string();
        const std::size_t size = n.at("n").count();
        if (size == 0) n.at("n").fail("must be at least 1");
        if (g == "path") return make_path(size);
        if (g == "star") return make_star(size);
        if (g == "complete") return make_complete(size);
        n.at("generator").fail(fmt::format("unknown generator '{}' (path, star or complete)", g));
    }
    if (n.has("tree")) {
        n.allow({"tree"});
        std::vector<std::pair<std::string, std::string>> edges;
        for (const auto& e : n.at("tree").items()) {
            auto ends = e.items();
            if (ends.size() != 2) e.fail("an edge needs exactly two endpoints");
            edges.emplace_back(ends[0].name(), ends[1].name());
        }
        return guarded(n, [&] { return make_tree(edges); });
    }
    n.allow({"vertices", "edges"});
    std::vector<VertexLabel> vertices;
    for (const auto& v : n.at("vertices").items()) vertices.emplace_back(v.name());
    std::vector<std::pair<VertexLabel, VertexLabel>> edges;
    if (auto es = n.opt("edges")) {
        for (const auto& e : es->items()) {
            auto ends = e.items();
            if (ends.size() != 2) e.fail("an edge needs exactly two endpoints");
            edges.emplace_back(ends[0].name(), ends[1].name());
        }
    }
    return guarded(n, [&] { return Graph(std::move(vertices), edges); });
}

BrokerIndex parse_broker(const Node& n, const ScotTopology& t) {
    return guarded(n, [&] { return t.find(parse_broker_id(n.string())); });
}

LinkIndex parse_link(const Node& n, const ScotTopology& t) {
    auto ends = n.items();
    if (ends.size() != 2) n.fail("a link is written as [\"(x,i)\", \"(y,j)\"]");
    BrokerIndex a = parse_broker(ends[0], t);
    BrokerIndex b = parse_broker(ends[1], t);
    auto l = t.find_link(a, b);
    if (!l) n.fail(fmt::format("{} and {} are not neighbours", t.broker(a).str(), t.broker(b).str()));
    return *l;
}

WorkloadSpec parse_generator(const Node& n, const ScotTopology& t) {
    n.allow({"subscribers", "publishers", "notifications_per_publisher", "rate_npm", "selectivity",
             "start_spread", "symbols", "attributes", "hrp"});
    WorkloadSpec s;
    if (auto v = n.opt("subscribers")) s.subscribers = v->count();
    if (auto v = n.opt("publishers")) s.publishers = v->count();
    if (auto v = n.opt("notifications_per_publisher")) s.notifications_per_publisher = v->count();
    if (auto v = n.opt("rate_npm")) s.rate_npm = v->number();
    if (auto v = n.opt("selectivity")) s.selectivity = v->number();
    if (auto v = n.opt("start_spread")) s.start_spread = v->integer();
    if (auto v = n.opt("symbols")) s.symbols = v->count();
    if (auto v = n.opt("attributes")) s.attributes = v->count();
    if (auto h = n.opt("hrp")) {
        h->allow({"rate_npm", "count", "start", "broker", "interested_fraction"});
        HrpSpec hrp;
        if (auto v = h->opt("rate_npm")) hrp.rate_npm = v->number();
        if (auto v = h->opt("count")) hrp.count = v->count();
        if (auto v = h->opt("start")) hrp.start = v->integer();
        if (auto v = h->opt("broker")) hrp.broker = parse_broker(*v, t);
        if (auto v = h->opt("interested_fraction")) hrp.interested_fraction = v->number();
        s.hrp = hrp;
    }
    guarded(n, [&] {
        validate(s);
        return 0;
    });
    return s;
}

Workload parse_explicit(const Node& n, const ScotTopology& t) {
    Workload w;
    std::size_t subs = 0;
    if (auto list = n.opt("subscriptions")) {
        for (const auto& s : list->items()) {
            s.allow({"name", "broker", "filter", "at", "client"});
            SubscribeRequest r;
            r.broker = parse_broker(s.at("broker"), t);
            r.filter = guarded(s, [&] { return parse_filter(s.at("filter").string()); });
            if (auto v = s.opt("at")) r.at = v->integer();
            if (r.at < 0) s.at("at").fail("must be non-negative");
            r.client = s.has("client") ? static_cast<ClientId>(s.at("client").count())
                                       : static_cast<ClientId>(subs);
            ++subs;
            w.subscriptions.push_back(std::move(r));
        }
    }
    std::size_t pubs = 0;
    if (auto list = n.opt("publications")) {
        for (const auto& p : list->items()) {
            p.allow({"name", "broker", "content", "at", "client"});
            PublishRequest r;
            r.broker = parse_broker(p.at("broker"), t);
            r.content = guarded(p, [&] { return parse_content(p.at("content").string()); });
            if (auto v = p.opt("at")) r.at = v->integer();
            if (r.at < 0) p.at("at").fail("must be non-negative");
            r.client = p.has("client") ? static_cast<ClientId>(p.at("client").count())
                                       : static_cast<ClientId>(subs + pubs);
            ++pubs;
            w.publications.push_back(std::move(r));
        }
    }
    return w;
}

Experiment parse(const json& doc, const Source& src, const std::string& origin) {
    Node root(doc, "", src);
    root.allow({"schema", "description", "topology", "mode", "seed", "congestion", "link",
                "processing", "overloads", "queues", "publish_after_subscriptions",
                "event_budget", "workload", "output"});
    const std::string schema = root.at("schema").string();
    if (schema != kConfigSchema)
        root.at("schema").fail(fmt::format("unsupported schema '{}' (expected '{}')", schema, kConfigSchema));

    Experiment e;
    e.origin = origin;
    e.document = doc;

    Node topo = root.at("topology");
    topo.allow({"af", "cf", "strict_index"});
    Graph af = parse_graph(topo.at("af"));
    Graph cf = parse_graph(topo.at("cf"));
    BuildOptions opts;
    if (auto v = topo.opt("strict_index")) opts.strict_index = v->boolean();
    e.topology = std::make_shared<const ScotTopology>(ScotTopology::build(af, cf, opts));
    const ScotTopology& t = *e.topology;

    if (auto v = root.opt("mode")) {
        const std::string m = v->string();
        e.sim.mode = guarded(*v, [&] { return parse_mode(m); });
    }
    if (auto v = root.opt("seed")) e.seed = v->count();
    if (auto c = root.opt("congestion")) {
        c->allow({"tau", "window"});
        if (auto v = c->opt("tau")) e.sim.congestion.tau = v->number();
        if (auto v = c->opt("window")) e.sim.congestion.window = v->integer();
        if (e.sim.congestion.window <= 0) c->fail("window must be positive");
    }
    if (auto l = root.opt("link")) {
        l->allow({"latency", "service_rate", "client_latency"});
        if (auto v = l->opt("latency")) e.sim.link.latency = v->integer();
        if (auto v = l->opt("service_rate")) e.sim.link.service_rate = v->number();
        if (auto v = l->opt("client_latency")) e.sim.link.client_latency = v->integer();
        if (e.sim.link.latency < 0 || e.sim.link.client_latency < 0) l->fail("latencies must be non-negative");
        if (!(e.sim.link.service_rate > 0)) l->fail("service_rate must be positive");
    }
    if (auto p = root.opt("processing")) {
        p->allow({"per_message", "per_entry"});
        if (auto v = p->opt("per_message")) e.sim.processing.per_message = v->number();
        if (auto v = p->opt("per_entry")) e.sim.processing.per_entry = v->number();
        if (e.sim.processing.per_message < 0 || e.sim.processing.per_entry < 0)
            p->fail("processing costs must be non-negative");
    }
    auto overrides = [&](const char* key, bool overloaded) {
        if (auto list = root.opt(key)) {
            for (const auto& o : list->items()) {
                o.allow({"link", "queue_length"});
                LinkOverride r;
                r.link = parse_link(o.at("link"), t);
                r.overloaded = overloaded;
                if (auto q = o.opt("queue_length")) r.queue_length = q->count();
                if (!overloaded && !r.queue_length) o.fail("missing required key 'queue_length'");
                e.sim.overrides.push_back(r);
            }
        }
    };
    overrides("overloads", true);
    overrides("queues", false);
    if (auto v = root.opt("event_budget")) e.sim.event_budget = v->count();
    if (auto v = root.opt("output")) e.output = v->string();

    bool generated = false;
    if (auto w = root.opt("workload")) {
        if (w->has("generate")) {
            w->allow({"generate"});
            e.generator = parse_generator(w->at("generate"), t);
            e.workload = generate_workload(*e.generator, t, e.seed);
            generated = true;
        } else {
            w->allow({"subscriptions", "publications"});
            e.workload = parse_explicit(*w, t);
        }
    }
    e.sim.publish_after_subscriptions = generated;
    if (auto v = root.opt("publish_after_subscriptions")) e.sim.publish_after_subscriptions = v->boolean();
    return e;
}

}  // namespace

void Experiment::reseed(std::uint64_t new_seed) {
    seed = new_seed;
    if (generator) workload = generate_workload(*generator, *topology, seed);
}

Experiment parse_experiment(const std::string& text, const std::string& origin) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& ex) {
        std::size_t line = 1 + static_cast<std::size_t>(std::count(
                                   text.begin(), text.begin() + std::min(ex.byte, text.size()), '\n'));
        throw ConfigError(fmt::format("{}:{}: malformed JSON: {}", origin, line, ex.what()));
    }
    return parse(doc, Source(origin, text), origin);
}

Experiment parse_experiment(const json& doc, const std::string& origin) {
    return parse(doc, Source(origin, doc.dump(2)), origin);
}

Experiment load_experiment(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError(fmt::format("{}: cannot open config", path.string()));
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_experiment(ss.str(), path.string());
}

RunArtifacts run_experiment(const Experiment& e, Mode mode) {
    SimConfig cfg = e.sim;
    cfg.mode = mode;
    RunArtifacts a;
    a.result = simulate(*e.topology, cfg, e.workload);
    a.messages_csv = messages_csv(a.result);
    a.links_csv = links_csv(*e.topology, a.result);
    a.summary = summary_text(*e.topology, a.result);
    return a;
}

void write_artifacts(const std::filesystem::path& dir, const RunArtifacts& a) {
    std::filesystem::create_directories(dir);
    auto put = [&](const char* name, const std::string& body) {
        std::ofstream out(dir / name, std::ios::binary);
        if (!out) throw Error(fmt::format("cannot write {}", (dir / name).string()));
        out << body;
    };
    put("messages.csv", a.messages_csv);
    put("links.csv", a.links_csv);
    put("summary.txt", a.summary);
    if (!a.result.trace.empty()) {
        std::string body;
        for (const auto& line : a.result.trace) body += line + "\n";
        put("trace.txt", body);
    }
}

std::string comparison_text(const std::vector<RunArtifacts>& runs) {
    std::string out;
    for (const auto& a : runs) {
        const auto& r = a.result;
        const char* m = to_string(r.mode);
        std::size_t max_queue = 0;
        for (const auto& l : r.links) max_queue = std::max(max_queue, l.max_queue);
        out += fmt::format("{}.subscription_ims={}\n", m, r.subscription_ims);
        out += fmt::format("{}.notification_ims={}\n", m, r.notification_ims);
        out += fmt::format("{}.total_ims={}\n", m, r.total_ims());
        out += fmt::format("{}.deliveries={}\n", m, r.delivery_count());
        out += fmt::format("{}.max_queue={}\n", m, max_queue);
        out += fmt::format("{}.quiescence_tick={}\n", m, r.quiescence);
    }
    return out;
}

namespace {

json tree_json(const Graph& g) {
    json edges = json::array();
    for (auto [u, v] : g.edges()) edges.push_back({g.label(u).first, g.label(v).first});
    return json{{"tree", edges}};
}

json complete_json(std::size_t n) { return json{{"generator", "complete"}, {"n", n}}; }

json base(const std::string& description, const Graph& af, std::size_t k) {
    json j;
    j["schema"] = kConfigSchema;
    j["description"] = description;
    j["topology"] = {{"af", tree_json(af)}, {"cf", complete_json(k)}};
    j["seed"] = 1;
    j["congestion"] = {{"tau", 10}, {"window", 50}};
    j["link"] = {{"latency", 1}, {"service_rate", 1}, {"client_latency", 0}};
    return j;
}

json sub(const char* name, const char* broker, const char* filter) {
    return json{{"name", name}, {"broker", broker}, {"filter", filter}};
}

json pub(const char* name, const char* broker, const char* content) {
    return json{{"name", name}, {"broker", broker}, {"content", content}};
}

json link(const char* a, const char* b) { return json::array({a, b}); }

json h_tree_workload(bool with_publishers) {
    json w;
    w["subscriptions"] = {sub("S1", "(a,0)", "x ge 2"), sub("S2", "(f,0)", "x ge 2"),
                          sub("S3", "(f,1)", "x neq 2")};
    if (!with_publishers) return w;
    w["subscriptions"].push_back(sub("S4", "(a,2)", "x ge 2"));
    w["publications"] = {pub("P1", "(f,2)", "x=3"), pub("P2", "(f,1)", "x=2"),
                         pub("P3", "(a,1)", "x=1")};
    return w;
}

json dnr_case(int which) {
    json j = base(fmt::format("3x3 overlay, publisher at (b,2), dynamic routing case {}", which),
                  samples::path_abc(), 3);
    j["mode"] = "dnr";
    j["publish_after_subscriptions"] = true;
    json w;
    if (which == 3)
        w["subscriptions"] = {sub("S1", "(a,0)", "x eq 1"), sub("S2", "(c,1)", "x eq 1"),
                              sub("S3", "(c,2)", "x eq 1"), sub("S4", "(c,2)", "x eq 1")};
    else
        w["subscriptions"] = {sub("S1", "(c,0)", "x eq 1"), sub("S2", "(c,1)", "x eq 1"),
                              sub("S3", "(a,2)", "x eq 1"), sub("S4", "(c,2)", "x eq 1")};
    w["publications"] = {pub("P", "(b,2)", "x=1")};
    j["workload"] = w;
    auto over = [](json l, int q) { return json{{"link", l}, {"queue_length", q}}; };
    if (which == 1) {
        j["overloads"] = {over(link("(b,2)", "(b,0)"), 20)};
    } else if (which == 2) {
        j["overloads"] = {over(link("(b,2)", "(b,0)"), 20), over(link("(b,2)", "(b,1)"), 20)};
        j["queues"] = {over(link("(b,2)", "(a,2)"), 3)};
    } else {
        j["overloads"] = {over(link("(b,2)", "(b,0)"), 30), over(link("(b,2)", "(b,1)"), 10),
                          over(link("(b,2)", "(c,2)"), 5), over(link("(b,1)", "(b,0)"), 20),
                          over(link("(c,1)", "(c,0)"), 20)};
    }
    return j;
}

}  // namespace

std::vector<std::string> fixture_names() {
    return {"h-tree", "h-tree-subscribe", "h-tree-notify", "dnr-case1", "dnr-case2", "dnr-case3", "roman", "stability"};
}

json fixture(const std::string& name) {
    if (name == "h-tree") return base("H-tree x K3, topology only", samples::h_tree(), 3);
    if (name == "h-tree-subscribe") {
        json j = base("H-tree x K3, two-step subscription forwarding", samples::h_tree(), 3);
        j["mode"] = "snr";
        j["workload"] = h_tree_workload(false);
        return j;
    }
    if (name == "h-tree-notify") {
        json j = base("H-tree x K3, static notification routing", samples::h_tree(), 3);
        j["mode"] = "snr";
        j["publish_after_subscriptions"] = true;
        j["workload"] = h_tree_workload(true);
        return j;
    }
    if (name == "dnr-case1") return dnr_case(1);
    if (name == "dnr-case2") return dnr_case(2);
    if (name == "dnr-case3") return dnr_case(3);
    if (name == "roman") {
        json j = base("15-vertex tree x K5, scalability workload", samples::roman_tree(), 5);
        j["mode"] = "snr";
        j["workload"] = {{"generate",
                          {{"subscribers", 200},
                           {"publishers", 10},
                           {"notifications_per_publisher", 20},
                           {"rate_npm", 60},
                           {"selectivity", 0.02},
                           {"start_spread", 5000}}}};
        return j;
    }
    if (name == "stability") {
        json j = base("15-vertex tree x K5, high-rate publisher at 1/100 volume",
                      samples::roman_tree(), 5);
        j["mode"] = "dnr";
        j["link"]["service_rate"] = 0.01;
        j["workload"] = {{"generate",
                          {{"subscribers", 50},
                           {"publishers", 100},
                           {"notifications_per_publisher", 20},
                           {"rate_npm", 60},
                           {"selectivity", 0.02},
                           {"start_spread", 5000},
                           {"hrp",
                            {{"rate_npm", 1000},
                             {"count", 1000},
                             {"start", 0},
                             {"broker", "(viii,2)"},
                             {"interested_fraction", 0.002}}}}}};
        return j;
    }
    std::string known;
    for (const auto& n : fixture_names()) known += (known.empty() ? "" : ", ") + n;
    throw ConfigError(fmt::format("unknown fixture '{}' (known: {})", name, known));
}

}  // namespace scot

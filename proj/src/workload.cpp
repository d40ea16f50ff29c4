#include "scot/workload.hpp"

#include <cmath>
#include <limits>

#include <fmt/format.h>

#include "scot/error.hpp"

namespace scot {

std::uint64_t Rng::below(std::uint64_t n) {
    if (n == 0) throw std::invalid_argument("Rng::below(0)");
    const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                                std::numeric_limits<std::uint64_t>::max() % n;
    for (;;) {
        const std::uint64_t x = engine_();
        if (x < limit) return x % n;
    }
}

double Rng::unit() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

namespace {

constexpr int kPriceSteps = 10000;  // price = step / 100
const std::string kHrpSymbol = "HRP";

std::string symbol(std::size_t i) { return fmt::format("S{:03}", i); }

}  // namespace

void validate(const WorkloadSpec& spec) {
    if (spec.symbols == 0) throw ConfigError("symbol universe must not be empty");
    if (spec.attributes < 2) throw ConfigError("notifications need at least 2 attributes");
    const double lo = 1.0 / static_cast<double>(spec.symbols);
    if (!(spec.selectivity >= lo && spec.selectivity <= 1.0))
        throw ConfigError(fmt::format("selectivity {} is not achievable with {} symbols; use a value in [{}, 1]",
                                      spec.selectivity, spec.symbols, lo));
    if (!(spec.rate_npm > 0)) throw ConfigError("rate_npm must be positive");
    if (spec.start_spread < 0) throw ConfigError("start_spread must be non-negative");
    if (spec.hrp) {
        if (!(spec.hrp->rate_npm > 0)) throw ConfigError("hrp rate_npm must be positive");
        if (!(spec.hrp->interested_fraction >= 0 && spec.hrp->interested_fraction <= 1))
            throw ConfigError("hrp interested_fraction must lie in [0, 1]");
        if (spec.hrp->start < 0) throw ConfigError("hrp start must be non-negative");
    }
}

Workload generate_workload(const WorkloadSpec& spec, const ScotTopology& topology,
                           std::uint64_t seed) {
    validate(spec);
    Rng rng(seed);
    const std::size_t brokers = topology.broker_count();
    const std::size_t k = topology.cluster_count();
    const std::size_t pool = static_cast<std::size_t>(std::floor(1.0 / spec.selectivity + 1e-9));
    const double residual = spec.selectivity * static_cast<double>(pool);
    const bool price_cut = residual < 1.0 - 1e-9;
    const double cut = std::round(residual * kPriceSteps) / 100.0;

    Workload w;
    std::optional<BrokerIndex> hrp_host;
    std::size_t interested = 0;
    if (spec.hrp) {
        hrp_host = spec.hrp->broker ? *spec.hrp->broker : static_cast<BrokerIndex>(rng.below(brokers));
        if (*hrp_host >= brokers)
            throw ConfigError(fmt::format("hrp broker {} is not in the topology", *hrp_host));
        if (spec.subscribers > 0) {
            interested = static_cast<std::size_t>(
                std::ceil(spec.hrp->interested_fraction * static_cast<double>(spec.subscribers)));
            interested = std::min(std::max(interested, k), spec.subscribers);
        }
    }

    for (std::size_t i = 0; i < spec.subscribers; ++i) {
        SubscribeRequest s;
        s.client = static_cast<ClientId>(i);
        if (i < interested) {
            // Spread HRP interest across every cluster, never on the HRP host.
            const ClusterIndex c = static_cast<ClusterIndex>(i % k);
            BrokerIndex b;
            do {
                b = static_cast<BrokerIndex>(rng.below(topology.region_count()) * k + c);
            } while (b == *hrp_host && topology.region_count() > 1);
            s.broker = b;
            s.filter = Filter({{"sym", Op::eq, kHrpSymbol}});
        } else {
            s.broker = static_cast<BrokerIndex>(rng.below(brokers));
            std::vector<Predicate> p{{"sym", Op::eq, symbol(rng.below(pool))}};
            if (price_cut) p.push_back({"price", Op::lt, cut});
            s.filter = Filter(std::move(p));
        }
        w.subscriptions.push_back(std::move(s));
    }

    auto content = [&](const std::string& sym) {
        std::vector<std::pair<std::string, Value>> a;
        a.emplace_back("sym", sym);
        a.emplace_back("price", static_cast<double>(rng.below(kPriceSteps)) / 100.0);
        for (std::size_t j = 2; j < spec.attributes; ++j)
            a.emplace_back(fmt::format("a{}", j), static_cast<double>(rng.below(1000)));
        return Content(std::move(a));
    };

    const double period = 60000.0 / spec.rate_npm;
    for (std::size_t p = 0; p < spec.publishers; ++p) {
        const ClientId client = static_cast<ClientId>(spec.subscribers + p);
        const BrokerIndex host = static_cast<BrokerIndex>(rng.below(brokers));
        const Tick start =
            spec.start_spread > 0 ? static_cast<Tick>(rng.below(spec.start_spread)) : 0;
        for (std::size_t j = 0; j < spec.notifications_per_publisher; ++j) {
            PublishRequest r;
            r.at = start + static_cast<Tick>(std::floor(static_cast<double>(j) * period));
            r.broker = host;
            r.client = client;
            r.content = content(symbol(rng.below(pool)));
            w.publications.push_back(std::move(r));
        }
    }

    if (spec.hrp) {
        const double hrp_period = 60000.0 / spec.hrp->rate_npm;
        const ClientId client = static_cast<ClientId>(spec.subscribers + spec.publishers);
        for (std::size_t j = 0; j < spec.hrp->count; ++j) {
            PublishRequest r;
            r.at = spec.hrp->start + static_cast<Tick>(std::floor(static_cast<double>(j) * hrp_period));
            r.broker = *hrp_host;
            r.client = client;
            r.content = content(kHrpSymbol);
            w.publications.push_back(std::move(r));
        }
    }

    std::stable_sort(w.publications.begin(), w.publications.end(),
                     [](const auto& a, const auto& b) { return a.at < b.at; });
    return w;
}

}  // namespace scot
